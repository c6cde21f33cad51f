#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vsi/catalog.hpp"
#include "vsi/dynamics.hpp"
#include "vsi/group.hpp"
#include "vsi/scenario.hpp"
#include "vsi/soc.hpp"
#include "vsi/verify.hpp"
#include "vsi/vibronic.hpp"

namespace {

// Exit codes: 0 success, 2 configuration/usage-of-data errors, 3 physics or
// check failures.  Command-line syntax errors use CLI11's own codes.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;

using vsi::Complex;

std::string fmt_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string fmt_complex(Complex z) {
  double re = z.real(), im = z.imag();
  if (std::abs(re) < 1e-14 && std::abs(im) < 1e-14) return "0";
  if (std::abs(im) < 1e-14) return fmt_num(re);
  std::string imag = (im == 1.0 ? "" : im == -1.0 ? "-" : fmt_num(im)) + "i";
  if (std::abs(re) < 1e-14) return imag;
  return fmt_num(re) + (im > 0 ? "+" : "") + imag;
}

struct Output {
  std::string format = "text";  // "text" or "csv"
  bool csv() const { return format == "csv"; }
};

void cmd_states(const Output& out) {
  const vsi::Catalog& cat = vsi::shared_catalog();
  if (out.csv()) {
    std::printf("name,family,config,spin,ms,irrep,orbital_irrep,spin_irrep\n");
    for (const vsi::CatalogState& st : cat.states())
      std::printf("%s,%s,%s,%g,%s,%s,%s,%s\n", st.name.c_str(),
                  st.family.c_str(), vsi::config_name(st.config), st.spin,
                  vsi::ms_label(st.ms, st.ms_mixed).c_str(),
                  vsi::irrep_name(st.gamma), vsi::irrep_name(st.gamma_orb),
                  vsi::irrep_name(st.gamma_spin));
    return;
  }
  std::printf("%-10s %-7s %-5s %4s %-6s %-6s %-4s %-5s\n", "name", "family",
              "cfg", "S", "mS", "irrep", "orb", "spin");
  for (const vsi::CatalogState& st : cat.states())
    std::printf("%-10s %-7s %-5s %4.1f %-6s %-6s %-4s %-5s\n", st.name.c_str(),
                st.family.c_str(), vsi::config_name(st.config), st.spin,
                vsi::ms_label(st.ms, st.ms_mixed).c_str(),
                vsi::irrep_name(st.gamma), vsi::irrep_name(st.gamma_orb),
                vsi::irrep_name(st.gamma_spin));
}

void cmd_cgc(const Output& out) {
  using vsi::Irrep;
  struct Pair {
    Irrep a, b;
  };
  const Pair pairs[] = {
      {Irrep::E, Irrep::E},       {Irrep::A2, Irrep::E},
      {Irrep::E, Irrep::E12},     {Irrep::E12, Irrep::E12},
      {Irrep::A2, Irrep::E12},    {Irrep::E32a, Irrep::E12},
      {Irrep::E32b, Irrep::E12},  {Irrep::E32a, Irrep::E32b},
      {Irrep::E32a, Irrep::E32a}, {Irrep::E32b, Irrep::E32b},
  };
  if (out.csv()) std::printf("a,b,g,s,i,k,m,re,im\n");
  for (const Pair& p : pairs) {
    auto content =
        vsi::decompose(vsi::product_rep(vsi::irrep_rep(p.a), vsi::irrep_rep(p.b)));
    for (auto [g, mult] : content) {
      vsi::CgcTensor t = vsi::solve_cgc(p.a, p.b, g);
      for (int s = 0; s < mult; ++s) {
        if (!out.csv())
          std::printf("\n%s x %s -> %s%s\n", vsi::irrep_name(p.a),
                      vsi::irrep_name(p.b), vsi::irrep_name(g),
                      mult > 1 ? (" (copy " + std::to_string(s + 1) + ")").c_str()
                               : "");
        for (int m = 0; m < vsi::irrep_dim(g); ++m)
          for (int i = 0; i < vsi::irrep_dim(p.a); ++i)
            for (int k = 0; k < vsi::irrep_dim(p.b); ++k) {
              Complex c = t(s, i, k, m);
              if (std::abs(c) < 1e-14) continue;
              if (out.csv())
                std::printf("%s,%s,%s,%d,%d,%d,%d,%.12g,%.12g\n",
                            vsi::irrep_name(p.a), vsi::irrep_name(p.b),
                            vsi::irrep_name(g), s, i, k, m, c.real(), c.imag());
              else
                std::printf("  |%s,%d> <= |%s,%d> |%s,%d| : %s\n",
                            vsi::irrep_name(g), m, vsi::irrep_name(p.a), i,
                            vsi::irrep_name(p.b), k, fmt_complex(c).c_str());
            }
      }
    }
  }
}

void cmd_chartable(const Output& out) {
  const char* classes[] = {"E", "Eb", "2C3", "2C3b", "3sv", "3svb"};
  const int reps[] = {0, 6, 1, 7, 3, 9};
  if (out.csv()) {
    std::printf("irrep,class,re,im\n");
    for (int g = 0; g < vsi::kNumIrreps; ++g)
      for (int c = 0; c < 6; ++c) {
        Complex chi = vsi::character(static_cast<vsi::Irrep>(g), reps[c]);
        std::printf("%s,%s,%.12g,%.12g\n",
                    vsi::irrep_name(static_cast<vsi::Irrep>(g)), classes[c],
                    chi.real(), chi.imag());
      }
    return;
  }
  std::printf("%-7s", "");
  for (const char* c : classes) std::printf("%7s", c);
  std::printf("\n");
  for (int g = 0; g < vsi::kNumIrreps; ++g) {
    std::printf("%-7s", vsi::irrep_name(static_cast<vsi::Irrep>(g)));
    for (int c = 0; c < 6; ++c)
      std::printf("%7s",
                  fmt_complex(vsi::character(static_cast<vsi::Irrep>(g), reps[c]))
                      .c_str());
    std::printf("\n");
  }
}

int cmd_soc_table(const Output& out, bool check, double perturb) {
  if (check) {
    vsi::CheckResult r = vsi::coupling_table_check(perturb);
    std::printf("[%s] %s - %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    return r.passed ? kExitOk : kExitPhysics;
  }
  const vsi::SocTable t = vsi::golden_soc_table(vsi::shared_catalog());
  if (out.csv()) {
    std::printf("row,col,re,im,channel,dagger,erratum\n");
    for (const vsi::TableEntry& e : t.entries)
      std::printf("%s,%s,%.12g,%.12g,%s,%d,%d\n",
                  t.row_names[e.row].c_str(), t.col_names[e.col].c_str(),
                  e.coeff.real(), e.coeff.imag(),
                  vsi::soc_channel_name(e.channel), e.dagger ? 1 : 0,
                  e.erratum ? 1 : 0);
    return kExitOk;
  }
  std::printf("%-8s %-8s %-14s %-6s %-6s %s\n", "row", "col", "coeff",
              "chan", "dag", "erratum");
  for (const vsi::TableEntry& e : t.entries)
    std::printf("%-8s %-8s %-14s %-6s %-6s %s\n", t.row_names[e.row].c_str(),
                t.col_names[e.col].c_str(), fmt_complex(e.coeff).c_str(),
                vsi::soc_channel_name(e.channel), e.dagger ? "yes" : "",
                e.erratum ? "yes" : "");
  return kExitOk;
}

void cmd_rates(const Output& out, const vsi::ScenarioConfig& cfg) {
  vsi::RateSet rates = vsi::derive_rateset(cfg.rates);
  if (out.csv()) {
    std::printf("initial,final,rate_per_ns,provenance\n");
    std::printf("-,gamma_0,%.12g,relaxation\n", rates.gamma_0);
    std::printf("-,gamma_E,%.12g,relaxation\n", rates.gamma_E);
    std::printf("-,gamma_A1,%.12g,relaxation\n", rates.gamma_A1);
    for (const auto& [pair, rate] : rates.gamma_isc) {
      auto prov =
          rates.provenance.find("gamma_isc(" + pair.first + "," + pair.second + ")");
      std::printf("%s,%s,%.12g,%s\n", pair.first.c_str(), pair.second.c_str(),
                  rate,
                  prov == rates.provenance.end() ? "" : prov->second.c_str());
    }
    return;
  }
  std::printf("relaxation rates (1/ns):\n");
  std::printf("  gamma_0  = %-12s gamma_E = %-12s gamma_A1 = %s\n",
              fmt_num(rates.gamma_0).c_str(), fmt_num(rates.gamma_E).c_str(),
              fmt_num(rates.gamma_A1).c_str());
  std::printf("intersystem crossing rates (1/ns):\n");
  for (const auto& [pair, rate] : rates.gamma_isc) {
    auto prov =
        rates.provenance.find("gamma_isc(" + pair.first + "," + pair.second + ")");
    std::printf("  %-4s -> %-4s %-14s %s\n", pair.first.c_str(),
                pair.second.c_str(), fmt_num(rate).c_str(),
                prov == rates.provenance.end() ? "" : prov->second.c_str());
  }
}

int cmd_sweep(const std::string& param, const std::string& range,
              const vsi::ScenarioConfig& cfg, const std::string& out_dir) {
  if (param != "delta")
    throw std::invalid_argument("sweep: unsupported --param \"" + param +
                                "\" (supported: delta)");
  double a = 0, b = 0;
  int n = 0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
    throw std::invalid_argument(
        "sweep: --range expects a:b:n with n >= 1, got \"" + range + "\"");
  double lambda = 1.0;
  if (!cfg.rates.pairs.empty()) lambda = cfg.rates.pairs.front().lambda;
  std::string csv = "delta_mev,rate\n";
  for (int i = 0; i < n; ++i) {
    double delta = n == 1 ? a : a + (b - a) * i / (n - 1);
    double rate = vsi::isc_rate_first_order(lambda, cfg.rates.model, delta,
                                            cfg.rates.alpha);
    char line[80];
    std::snprintf(line, sizeof(line), "%.12g,%.12g\n", delta, rate);
    csv += line;
  }
  if (out_dir.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::filesystem::create_directories(out_dir);
    std::string path = out_dir + "/sweep_" + param + ".csv";
    vsi::write_file_atomic(path, csv);
    std::printf("wrote %s\n", path.c_str());
  }
  return kExitOk;
}

int cmd_simulate(vsi::ScenarioConfig cfg, const std::string& channel_flag,
                 bool svg_flag, const std::string& out_dir) {
  if (!channel_flag.empty()) cfg.channel = channel_flag;
  if (svg_flag) cfg.svg = true;
  std::vector<vsi::ScenarioInstance> instances = vsi::expand_sweep(cfg);

  std::vector<std::future<vsi::RunResult>> futures;
  futures.reserve(instances.size());
  for (const vsi::ScenarioInstance& inst : instances)
    futures.push_back(std::async(
        instances.size() > 1 ? std::launch::async : std::launch::deferred,
        [&inst] { return vsi::run_scenario(inst.config); }));

  std::string dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    vsi::RunResult res = futures[i].get();
    const std::string& label = instances[i].label;
    std::string csv_path = dir + "/" + label + ".csv";
    vsi::write_file_atomic(csv_path,
                           vsi::trajectory_csv(res.model, res.trajectory));
    std::string files = csv_path;
    if (instances[i].config.svg) {
      std::string svg_path = dir + "/" + label + ".svg";
      vsi::write_file_atomic(svg_path,
                             vsi::trajectory_svg(res.model, res.trajectory));
      files += " " + svg_path;
    }
    std::string summary_path = dir + "/" + label + "_summary.txt";
    vsi::write_file_atomic(summary_path, res.report.text());
    files += " " + summary_path;

    std::printf("## %s\n%swrote %s\n", label.c_str(),
                res.report.text().c_str(), files.c_str());
  }
  return kExitOk;
}

int cmd_verify(const vsi::ScenarioConfig& cfg, double perturb) {
  vsi::VerifyOptions opts;
  opts.lambda_perturbation = perturb;
  opts.sigma = cfg.rates.model.sigma;
  std::vector<vsi::CheckResult> checks = vsi::verify_suite(opts);
  int passed = 0;
  for (const vsi::CheckResult& c : checks) {
    std::printf("[%s] %s - %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
    passed += c.passed ? 1 : 0;
  }
  std::printf("%d/%zu checks passed\n", passed, checks.size());
  return vsi::all_passed(checks) ? kExitOk : kExitPhysics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"silicon-vacancy spin polarization simulator"};
  app.require_subcommand(1);
  // Parent flags (--config, --out, --format) remain valid after the
  // subcommand name.
  app.fallthrough();

  Output out;
  std::string config_path, out_dir, channel_flag;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"text", "csv"}));
  app.add_option("--config", config_path, "JSON scenario file");
  app.add_option("--out", out_dir, "output directory for generated files");

  CLI::App* states = app.add_subcommand("states", "symmetry-adapted catalog");
  CLI::App* cgc = app.add_subcommand("cgc", "coupling coefficient blocks");
  CLI::App* chartable =
      app.add_subcommand("chartable", "double-group character table");
  CLI::App* soc = app.add_subcommand("soc-table", "reference coupling table");
  bool soc_check = false;
  double perturb = 0.0;
  soc->add_flag("--check", soc_check,
                "compare the computed operator against the reference");
  soc->add_option("--perturb-lambda", perturb,
                  "negative-control hook: offset one reference coefficient");
  CLI::App* rates = app.add_subcommand("rates", "derived rate set");
  CLI::App* sweep =
      app.add_subcommand("sweep", "rate versus a swept parameter, CSV");
  std::string sweep_param = "delta", sweep_range;
  sweep->add_option("--param", sweep_param, "swept parameter (delta)");
  sweep->add_option("--range", sweep_range, "a:b:n inclusive grid")
      ->required();
  CLI::App* simulate =
      app.add_subcommand("simulate", "integrate a polarization scenario");
  simulate->add_option("--channel", channel_flag, "q1d4, q1d1 or q2")
      ->check(CLI::IsMember({"q1d4", "q1d1", "q2"}));
  bool svg_flag = false;
  simulate->add_flag("--svg", svg_flag, "also write an SVG line plot");
  CLI::App* verify = app.add_subcommand("verify", "run the release checks");
  verify->add_option("--perturb-lambda", perturb,
                     "negative-control hook: offset one reference coefficient");

  CLI11_PARSE(app, argc, argv);

  try {
    vsi::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = vsi::load_config(config_path);

    if (states->parsed()) {
      cmd_states(out);
    } else if (cgc->parsed()) {
      cmd_cgc(out);
    } else if (chartable->parsed()) {
      cmd_chartable(out);
    } else if (soc->parsed()) {
      return cmd_soc_table(out, soc_check, perturb);
    } else if (rates->parsed()) {
      cmd_rates(out, cfg);
    } else if (sweep->parsed()) {
      return cmd_sweep(sweep_param, sweep_range, cfg, out_dir);
    } else if (simulate->parsed()) {
      return cmd_simulate(cfg, channel_flag, svg_flag, out_dir);
    } else if (verify->parsed()) {
      return cmd_verify(cfg, perturb);
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "physics error: %s\n", e.what());
    return kExitPhysics;
  }
}
