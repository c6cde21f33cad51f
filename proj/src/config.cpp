#include "vsi/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vsi/verify.hpp"

namespace vsi {

namespace {

using nlohmann::json;

constexpr double kBoltzmannMeVPerK = 0.08617333262;

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw std::invalid_argument(origin + ": " + msg);
}

double as_number(const std::string& origin, const json& v,
                 const std::string& field) {
  if (!v.is_number()) fail(origin, "field \"" + field + "\": expected a number");
  return v.get<double>();
}

double as_nonneg(const std::string& origin, const json& v,
                 const std::string& field) {
  double x = as_number(origin, v, field);
  if (x < 0) fail(origin, "field \"" + field + "\": must be >= 0");
  return x;
}

double as_positive(const std::string& origin, const json& v,
                   const std::string& field) {
  double x = as_number(origin, v, field);
  if (x <= 0) fail(origin, "field \"" + field + "\": must be > 0");
  return x;
}

bool as_bool(const std::string& origin, const json& v,
             const std::string& field) {
  if (!v.is_boolean()) fail(origin, "field \"" + field + "\": expected a bool");
  return v.get<bool>();
}

std::string as_string(const std::string& origin, const json& v,
                      const std::string& field) {
  if (!v.is_string()) fail(origin, "field \"" + field + "\": expected a string");
  return v.get<std::string>();
}

void parse_rates(const std::string& origin, const json& block,
                 RateConfig& rates) {
  if (!block.is_object()) fail(origin, "field \"rates\": expected an object");
  std::optional<double> lambda, delta, temperature, nbar;
  std::vector<RatePair> pairs;
  bool mode_computed = false;
  for (const auto& [key, v] : block.items()) {
    std::string field = "rates." + key;
    if (key == "mode") {
      std::string m = as_string(origin, v, field);
      if (m == "computed") {
        mode_computed = true;
      } else if (m != "phenomenological") {
        fail(origin, "field \"" + field +
                         "\": expected \"phenomenological\" or \"computed\"");
      }
    } else if (key == "isc_ratio") {
      rates.isc_ratio = as_nonneg(origin, v, field);
    } else if (key == "alpha") {
      rates.alpha = as_nonneg(origin, v, field);
    } else if (key == "lambda") {
      lambda = as_number(origin, v, field);
    } else if (key == "delta") {
      delta = as_number(origin, v, field);
    } else if (key == "mode_energy") {
      rates.model.mode_energy = as_positive(origin, v, field);
    } else if (key == "huang_rhys") {
      rates.model.huang_rhys = as_nonneg(origin, v, field);
    } else if (key == "sigma") {
      // Zero passes the schema; the vibronic module rejects it at use.
      rates.model.sigma = as_nonneg(origin, v, field);
    } else if (key == "nbar") {
      nbar = as_nonneg(origin, v, field);
    } else if (key == "temperature") {
      temperature = as_positive(origin, v, field);
    } else if (key == "max_quanta") {
      double q = as_positive(origin, v, field);
      if (q != std::floor(q)) fail(origin, "field \"" + field + "\": integer");
      rates.model.max_quanta = static_cast<int>(q);
    } else if (key == "pairs") {
      if (!v.is_array()) fail(origin, "field \"" + field + "\": array");
      for (const auto& e : v) {
        if (!e.is_object())
          fail(origin, "field \"" + field + "\": entries are objects");
        RatePair p;
        bool has_initial = false, has_final = false;
        for (const auto& [pk, pv] : e.items()) {
          std::string pfield = field + "." + pk;
          if (pk == "initial") {
            p.initial = as_string(origin, pv, pfield);
            has_initial = true;
          } else if (pk == "final") {
            p.final_ = as_string(origin, pv, pfield);
            has_final = true;
          } else if (pk == "lambda") {
            p.lambda = as_number(origin, pv, pfield);
          } else if (pk == "delta") {
            p.delta = as_number(origin, pv, pfield);
          } else {
            fail(origin, "unknown key \"" + pfield + "\"");
          }
        }
        if (!has_initial || !has_final)
          fail(origin, "field \"" + field + "\": initial and final required");
        pairs.push_back(p);
      }
    } else {
      fail(origin, "unknown key \"rates." + key + "\"");
    }
  }
  if (temperature && nbar)
    fail(origin, "field \"rates\": nbar and temperature are exclusive");
  if (temperature)
    rates.model.nbar =
        1.0 / std::expm1(rates.model.mode_energy /
                         (kBoltzmannMeVPerK * *temperature));
  if (nbar) rates.model.nbar = *nbar;

  if (mode_computed) {
    rates.mode = RateConfig::Mode::Computed;
    if (pairs.empty()) {
      if (!lambda || !delta)
        fail(origin,
             "field \"rates\": computed mode needs lambda and delta or an "
             "explicit pairs list");
      for (const auto& [initial, final_] : default_isc_pairs())
        pairs.push_back({initial, final_, *lambda, *delta});
    }
    rates.pairs = pairs;
  } else if (!pairs.empty() || lambda || delta) {
    fail(origin,
         "field \"rates\": lambda, delta and pairs require mode \"computed\"");
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(origin, e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  ScenarioConfig cfg;
  cfg.origin = origin;
  bool gamma0_set = false;
  for (const auto& [key, v] : j.items()) {
    if (key == "channel") {
      cfg.channel = as_string(origin, v, key);
      if (cfg.channel != "q1d4" && cfg.channel != "q1d1" &&
          cfg.channel != "q2")
        fail(origin, "field \"channel\": expected q1d4, q1d1 or q2");
    } else if (key == "omega") {
      cfg.omega = as_nonneg(origin, v, key);
    } else if (key == "gamma0") {
      cfg.rates.gamma0 = as_nonneg(origin, v, key);
      gamma0_set = true;
    } else if (key == "t_end") {
      cfg.t_end = as_positive(origin, v, key);
    } else if (key == "sample_dt") {
      cfg.sample_dt = as_positive(origin, v, key);
    } else if (key == "adaptive") {
      cfg.adaptive = as_bool(origin, v, key);
    } else if (key == "c1") {
      cfg.c1 = as_nonneg(origin, v, key);
    } else if (key == "c2") {
      cfg.c2 = as_nonneg(origin, v, key);
    } else if (key == "ratio_sweep") {
      if (!v.is_array()) fail(origin, "field \"ratio_sweep\": array");
      for (const auto& e : v) {
        if (!e.is_array() || e.size() != 2)
          fail(origin, "field \"ratio_sweep\": entries are [c1, c2] pairs");
        cfg.ratio_sweep.push_back({as_nonneg(origin, e[0], "ratio_sweep[0]"),
                                   as_nonneg(origin, e[1], "ratio_sweep[1]")});
      }
    } else if (key == "include_d1") {
      cfg.include_d1 = as_bool(origin, v, key);
    } else if (key == "d4_to_d1") {
      cfg.d4_to_d1 = as_nonneg(origin, v, key);
    } else if (key == "d1_to_g") {
      cfg.d1_to_g = as_nonneg(origin, v, key);
    } else if (key == "site") {
      cfg.site = as_string(origin, v, key);
      if (cfg.site != "h" && cfg.site != "k")
        fail(origin, "field \"site\": expected \"h\" or \"k\"");
    } else if (key == "svg") {
      cfg.svg = as_bool(origin, v, key);
    } else if (key == "rates") {
      parse_rates(origin, v, cfg.rates);
    } else {
      fail(origin, "unknown key \"" + key + "\"");
    }
  }
  if (!gamma0_set) cfg.rates.gamma0 = cfg.omega;
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::vector<ScenarioInstance> expand_sweep(const ScenarioConfig& cfg) {
  std::string stem = cfg.channel.empty() ? "run" : cfg.channel;
  if (cfg.ratio_sweep.empty()) return {{cfg, stem}};
  std::vector<ScenarioInstance> out;
  for (const auto& [c1, c2] : cfg.ratio_sweep) {
    ScenarioInstance inst{cfg, stem + "_r" + fmt6(c1) + "-" + fmt6(c2)};
    inst.config.c1 = c1;
    inst.config.c2 = c2;
    inst.config.ratio_sweep.clear();
    out.push_back(std::move(inst));
  }
  return out;
}

LindbladModel build_model(const ScenarioConfig& cfg) {
  if (cfg.channel.empty())
    fail(cfg.origin.empty() ? "<defaults>" : cfg.origin,
         "field \"channel\": required (set it in the config or with "
         "--channel)");
  RateSet rates = derive_rateset(cfg.rates);
  if (cfg.channel == "q1d4")
    return build_channel1_model(Channel1Variant::ViaD4, rates, cfg.omega);
  if (cfg.channel == "q1d1")
    return build_channel1_model(Channel1Variant::ViaD1, rates, cfg.omega);
  Channel2Options opts;
  opts.include_d1 = cfg.include_d1;
  opts.d4_to_d1 = cfg.d4_to_d1;
  opts.d1_to_g = cfg.d1_to_g;
  return build_channel2_model(cfg.c1, cfg.c2, rates, cfg.omega, opts);
}

void RunReport::add(const std::string& key, const std::string& value) {
  fields.emplace_back(key, value);
}

void RunReport::add(const std::string& key, double value) {
  fields.emplace_back(key, fmt12(value));
}

std::string RunReport::text() const {
  std::string out;
  for (const auto& [k, v] : fields) out += k + " = " + v + "\n";
  return out;
}

namespace {

bool is_ground(const std::string& level) { return level.rfind("g_", 0) == 0; }

bool is_32(const std::string& level) {
  return level.size() >= 3 && level.compare(level.size() - 3, 3, "_32") == 0;
}

double t90(const Trajectory& tr) {
  double target = 0.9 * std::abs(tr.polarization.back());
  if (target == 0.0) return 0.0;
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    if (std::abs(tr.polarization[i]) >= target) return tr.times[i];
  return tr.times.back();
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  RunResult res;
  res.model = build_model(cfg);
  Matrix rho0 = equal_ground_mixture(res.model);
  res.trajectory = evolve(res.model, rho0, cfg.t_end,
                          {.sample_dt = cfg.sample_dt, .adaptive = cfg.adaptive});
  res.steady = steady_state(res.model);
  res.post_pump = pump_off_relax(res.model, res.steady);

  RunReport& rep = res.report;
  rep.add("channel", cfg.channel);
  rep.add("site", cfg.site);
  rep.add("omega_per_ns", cfg.omega);
  rep.add("gamma0_per_ns", cfg.rates.gamma0);
  rep.add("rate_mode", cfg.rates.mode == RateConfig::Mode::Computed
                           ? "computed"
                           : "phenomenological");
  if (cfg.rates.mode == RateConfig::Mode::Computed)
    rep.add("alpha", cfg.rates.alpha);
  else
    rep.add("isc_ratio", cfg.rates.isc_ratio);
  if (cfg.channel == "q2") {
    rep.add("c1", cfg.c1);
    rep.add("c2", cfg.c2);
    rep.add("include_d1", cfg.include_d1 ? "true" : "false");
  }
  rep.add("t_end_ns", cfg.t_end);
  rep.add("sample_dt_ns", cfg.sample_dt);
  rep.add("integrator", cfg.adaptive ? "adaptive" : "fixed");

  CheckResult cat = catalog_check();
  CheckResult tab = coupling_table_check();
  rep.add("catalog_check",
          std::string(cat.passed ? "pass" : "FAIL") + " (" + cat.detail + ")");
  rep.add("table_check",
          std::string(tab.passed ? "pass" : "FAIL") + " (" + tab.detail + ")");

  double excited12 = 0;
  for (int i = 0; i < res.model.scheme.size(); ++i) {
    const std::string& name = res.model.scheme.levels[i];
    double pop = res.steady(i, i).real();
    rep.add("steady." + name, pop);
    if (!is_ground(name) && !is_32(name)) excited12 += pop;
  }
  rep.add("steady_excited_sz12", excited12);
  rep.add("polarization_at_t_end", res.trajectory.polarization.back());
  rep.add("polarization_t90_ns", t90(res.trajectory));
  rep.add("postpump.g_12", res.post_pump.g12);
  rep.add("postpump.g_32", res.post_pump.g32);
  rep.add("final_polarization",
          polarization(res.post_pump.g12, res.post_pump.g32));

  auto wall = std::chrono::duration<double, std::milli>(
      std::chrono::steady_clock::now() - start);
  rep.add("wall_ms", wall.count());
  return res;
}

std::string trajectory_csv(const LindbladModel& model, const Trajectory& tr) {
  std::string out = "t_ns";
  for (const std::string& level : model.scheme.levels) out += "," + level;
  out += ",polarization\n";
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    out += fmt12(tr.times[s]);
    for (double p : tr.populations[s]) out += "," + fmt12(p);
    out += "," + fmt12(tr.polarization[s]) + "\n";
  }
  return out;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string trajectory_svg(const LindbladModel& model, const Trajectory& tr) {
  const double w = 720, h = 480, left = 64, right = 16, top = 20, bottom = 44;
  const double pw = w - left - right, ph = h - top - bottom;
  double t_max = tr.times.back() > 0 ? tr.times.back() : 1.0;
  auto x_of = [&](double t) { return left + pw * t / t_max; };
  auto y_of = [&](double p) { return top + ph * (1.0 - p); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  // axes and gridlines
  for (int i = 0; i <= 4; ++i) {
    double frac = i / 4.0;
    double y = y_of(frac), x = x_of(frac * t_max);
    svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << w - right
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << fmt6(frac)
        << "</text>\n";
    svg << "<text x=\"" << x << "\" y=\"" << h - bottom + 18
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fmt6(frac * t_max)
        << "</text>\n";
  }
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << h - bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\""
      << w - right << "\" y2=\"" << h - bottom << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 8
      << "\" font-size=\"13\" text-anchor=\"middle\">time (ns)</text>\n";
  svg << "<text x=\"16\" y=\"" << top + ph / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">population</text>\n";

  int n = model.scheme.size();
  for (int i = 0; i < n; ++i) {
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[i % 8]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t s = 0; s < tr.times.size(); ++s)
      svg << fmt6(x_of(tr.times[s])) << "," << fmt6(y_of(tr.populations[s][i]))
          << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << w - right - 108 << "\" y=\"" << top + 16 + 16 * i
        << "\" font-size=\"12\" fill=\"" << kPalette[i % 8] << "\">"
        << model.scheme.levels[i] << "</text>\n";
  }
  // polarization on a -1..1 scale, drawn dashed
  svg << "<polyline fill=\"none\" stroke=\"#333333\" stroke-width=\"1.2\" "
         "stroke-dasharray=\"5,4\" points=\"";
  for (std::size_t s = 0; s < tr.times.size(); ++s)
    svg << fmt6(x_of(tr.times[s])) << ","
        << fmt6(y_of(0.5 * (tr.polarization[s] + 1.0))) << " ";
  svg << "\"/>\n";
  svg << "<text x=\"" << w - right - 108 << "\" y=\"" << top + 16 + 16 * n
      << "\" font-size=\"12\" fill=\"#333333\">polarization (-1..1)</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument(tmp + ": cannot open for writing");
    out << content;
    if (!out) throw std::invalid_argument(tmp + ": write failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::invalid_argument(path + ": rename failed");
}

}  // namespace vsi
