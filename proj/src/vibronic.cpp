#include "vsi/vibronic.hpp"

#include <cmath>
#include <stdexcept>

#include "vsi/fock.hpp"

namespace vsi {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Bose ladder weights below this are treated as exactly zero to bound the
// initial-state sums.
constexpr double kWeightFloor = 1e-300;

int intermediate_cutoff(const VibronicModel& model,
                        const PhononSpectrum& spectrum) {
  return spectrum.max_intermediate < 0 ? model.max_quanta
                                       : spectrum.max_intermediate;
}

void check_model(const VibronicModel& model) {
  if (model.huang_rhys < 0)
    throw std::invalid_argument("huang_rhys must be nonnegative");
  if (model.sigma <= 0)
    throw std::invalid_argument("gaussian width sigma must be positive");
  if (model.nbar < 0) throw std::invalid_argument("nbar must be nonnegative");
  if (model.max_quanta < 0)
    throw std::invalid_argument("max_quanta must be nonnegative");
}

}  // namespace

// ====================== strain ======================

StrainDeltas strain_deltas(const StrainTensor& e) {
  StrainDeltas d;
  d.a_A1 = 0.5 * (e.e_xx + e.e_yy);
  d.b_A1 = e.e_zz;
  d.a_E1 = 0.5 * (e.e_xx - e.e_yy);
  d.a_E2 = 0.5 * (e.e_xy + e.e_yx);
  d.b_E1 = 0.5 * (e.e_xz + e.e_zx);
  d.b_E2 = 0.5 * (e.e_yz + e.e_zy);
  return d;
}

Matrix strain_hamiltonian(const StrainTensor& e) {
  StrainDeltas d = strain_deltas(e);
  const int X = 0, Y = 1, U = 2, V = 3;
  Matrix h = Matrix::Zero(4, 4);
  h(X, X) += d.a_A1 + d.a_E1;
  h(Y, Y) += d.a_A1 - d.a_E1;
  h(X, Y) += d.a_E2;
  h(Y, X) += d.a_E2;
  h(U, U) += d.b_A1;
  h(V, V) += d.b_A1;
  h(U, V) += d.b_A1;
  h(V, U) += d.b_A1;
  h(X, U) += d.b_E1;
  h(U, X) += d.b_E1;
  h(X, V) += d.b_E1;
  h(V, X) += d.b_E1;
  h(Y, U) += d.b_E2;
  h(U, Y) += d.b_E2;
  h(Y, V) += d.b_E2;
  h(V, Y) += d.b_E2;
  return h;
}

// ====================== electron-phonon projectors ======================

Matrix eph_projector(const Catalog& cat, const std::string& initial_family,
                     const std::string& final_family, PhononMode mode) {
  std::vector<int> rows = cat.family(initial_family);
  std::vector<int> cols = cat.family(final_family);
  if (rows.empty())
    throw std::invalid_argument("unknown manifold '" + initial_family + "'");
  if (cols.empty())
    throw std::invalid_argument("unknown manifold '" + final_family + "'");

  // Unit-amplitude strain projector of the requested symmetry, in the
  // project orbital order ex, ey, v, u.
  const int X = 0, Y = 1, V = 2, U = 3;
  Matrix o = Matrix::Zero(4, 4);
  switch (mode) {
    case PhononMode::A1:
      o(X, X) = o(Y, Y) = 1;
      o(U, U) = o(V, V) = 1;
      o(U, V) = o(V, U) = 1;
      break;
    case PhononMode::E1:
      o(X, X) = 1;
      o(Y, Y) = -1;
      o(X, U) = o(U, X) = 1;
      o(X, V) = o(V, X) = 1;
      break;
    case PhononMode::E2:
      o(X, Y) = o(Y, X) = 1;
      o(Y, U) = o(U, Y) = 1;
      o(Y, V) = o(V, Y) = 1;
      break;
  }

  Matrix one_body = Matrix::Zero(8, 8);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int s = 0; s < 2; ++s) one_body(2 * a + s, 2 * b + s) = o(a, b);

  Matrix full = cat.to_catalog(lift_one_body(cat.basis(), one_body));
  Matrix restricted = Matrix::Zero(kDetCount, kDetCount);
  for (int r : rows)
    for (int c : cols) restricted(r, c) = full(r, c);
  return restricted;
}

// ====================== vibrational model ======================

double gaussian_delta(double x, double sigma) {
  if (sigma <= 0)
    throw std::invalid_argument("gaussian width sigma must be positive");
  double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(kTwoPi));
}

double thermal_weight(double nbar, int m) {
  if (nbar < 0) throw std::invalid_argument("nbar must be nonnegative");
  if (m < 0) throw std::invalid_argument("ladder index must be nonnegative");
  if (nbar == 0) return m == 0 ? 1.0 : 0.0;
  double q = nbar / (1.0 + nbar);
  return (1.0 - q) * std::pow(q, m);
}

double fc_overlap(const VibronicModel& model, int n) {
  return fc_overlap(model, 0, n);
}

double fc_overlap(const VibronicModel& model, int m, int n) {
  if (model.huang_rhys < 0)
    throw std::invalid_argument("huang_rhys must be nonnegative");
  if (m < 0 || n < 0)
    throw std::invalid_argument("ladder index must be nonnegative");
  double s = model.huang_rhys;
  int lo = std::min(m, n), d = std::abs(m - n);
  if (s == 0) return d == 0 ? 1.0 : 0.0;
  // <chi_m|chi'_n> for a ladder displaced by sqrt(2S): Laguerre closed form,
  // log-stabilized; the sign flips with odd d when the displaced side is
  // the higher one.
  double sign = (n > m && d % 2 == 1) ? -1.0 : 1.0;
  double lg = 0.5 * (std::lgamma(lo + 1) - std::lgamma(lo + d + 1));
  return sign * std::exp(lg - 0.5 * s) * std::pow(s, 0.5 * d) *
         std::assoc_laguerre(lo, d, s);
}

// ====================== intersystem-crossing rates ======================

double isc_rate_first_order(double lambda, const VibronicModel& model,
                            double delta, double alpha) {
  check_model(model);
  double rate = 0;
  for (int m = 0; m <= model.max_quanta; ++m) {
    double w = thermal_weight(model.nbar, m);
    if (w < kWeightFloor) break;
    for (int n = 0; n <= model.max_quanta; ++n) {
      double f = fc_overlap(model, m, n);
      double x = (n - m) * model.mode_energy - delta;
      rate += w * f * f * gaussian_delta(x, model.sigma);
    }
  }
  return alpha * lambda * lambda * rate;
}

double isc_rate_second_order(double lambda, const VibronicModel& model,
                             double delta4, double delta6,
                             const PhononSpectrum& spectrum, double alpha) {
  check_model(model);
  int n_max = intermediate_cutoff(model, spectrum);
  double rate = 0;
  for (const PhononSpectrum::Mode& ph : spectrum.modes) {
    if (ph.nbar < 0)
      throw std::invalid_argument("phonon nbar must be nonnegative");
    for (int m = 0; m <= model.max_quanta; ++m) {
      double w = thermal_weight(model.nbar, m);
      if (w < kWeightFloor) break;
      double nu_m = m * model.mode_energy;
      for (int l = 0; l <= model.max_quanta; ++l) {
        double nu_l = l * model.mode_energy;
        // Emission carries nbar+1 and is always live; absorption carries
        // nbar and is skipped (with its resonance check) when dark.
        for (int branch = 0; branch < 2; ++branch) {
          double occ = branch == 0 ? ph.nbar + 1.0 : ph.nbar;
          if (occ == 0) continue;
          double sgn = branch == 0 ? -1.0 : 1.0;
          double amp = 0;
          for (int n = 0; n <= n_max; ++n) {
            double den = delta6 + nu_m - n * model.mode_energy + sgn * ph.energy;
            if (std::abs(den) < spectrum.guard)
              throw std::runtime_error("intermediate resonance");
            amp += ph.coupling * fc_overlap(model, m, n) * std::sqrt(occ) *
                   fc_overlap(model, n, l) / den;
          }
          rate += w * amp * amp *
                  gaussian_delta(delta4 + nu_m - nu_l + sgn * ph.energy,
                                 model.sigma);
        }
      }
    }
  }
  return alpha * lambda * lambda * rate;
}

double isc_rate_second_order_chi0(double lambda, const VibronicModel& model,
                                  double delta4, double delta6,
                                  const PhononSpectrum& spectrum,
                                  double alpha) {
  check_model(model);
  double rate = 0;
  for (const PhononSpectrum::Mode& ph : spectrum.modes) {
    if (ph.nbar < 0)
      throw std::invalid_argument("phonon nbar must be nonnegative");
    double d2 = ph.coupling * ph.coupling;
    for (int m = 0; m <= model.max_quanta; ++m) {
      double w = thermal_weight(model.nbar, m);
      if (w < kWeightFloor) break;
      double nu_m = m * model.mode_energy;
      double entry = fc_overlap(model, m, 0);
      double entry2 = entry * entry;
      for (int branch = 0; branch < 2; ++branch) {
        double occ = branch == 0 ? ph.nbar + 1.0 : ph.nbar;
        if (occ == 0) continue;
        double sgn = branch == 0 ? -1.0 : 1.0;
        double den = delta6 + nu_m + sgn * ph.energy;
        if (std::abs(den) < spectrum.guard)
          throw std::runtime_error("intermediate resonance");
        double exit_sum = 0;
        for (int l = 0; l <= model.max_quanta; ++l) {
          double exit = fc_overlap(model, 0, l);
          exit_sum += exit * exit *
                      gaussian_delta(delta4 + nu_m - l * model.mode_energy +
                                         sgn * ph.energy,
                                     model.sigma);
        }
        rate += w * d2 * entry2 * occ * exit_sum / (den * den);
      }
    }
  }
  return alpha * lambda * lambda * rate;
}

// ====================== rate sets ======================

double RateSet::isc(const std::string& initial,
                    const std::string& final_) const {
  auto it = gamma_isc.find({initial, final_});
  if (it == gamma_isc.end())
    throw std::invalid_argument("missing required rate " + initial + " -> " +
                                final_);
  return it->second;
}

const std::vector<std::pair<std::string, std::string>>& default_isc_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"q1", "d6"}, {"q1", "d9"}, {"d4", "g"},  {"d1", "g"},
      {"q2", "d2"}, {"q2", "d3"}, {"q2", "d4"}, {"d2", "g"},
      {"d3", "g"},
  };
  return pairs;
}

RateSet derive_rateset(const RateConfig& config) {
  if (config.gamma0 < 0)
    throw std::invalid_argument("gamma0 must be nonnegative");
  if (config.isc_ratio < 0)
    throw std::invalid_argument("isc_ratio must be nonnegative");

  RateSet out;
  out.gamma_0 = config.gamma0;
  out.gamma_E = config.gamma0;
  out.gamma_A1 = config.gamma0;
  out.provenance["gamma_0"] = "config gamma0";
  out.provenance["gamma_E"] = "set equal to gamma0";
  out.provenance["gamma_A1"] = "set equal to gamma0";

  if (config.mode == RateConfig::Mode::Phenomenological) {
    double g = config.isc_ratio * config.gamma0;
    if (config.pairs.empty()) {
      for (const auto& p : default_isc_pairs()) {
        out.gamma_isc[p] = g;
        out.provenance["gamma_isc(" + p.first + "," + p.second + ")"] =
            "phenomenological: isc_ratio * gamma0";
      }
    } else {
      for (const RatePair& p : config.pairs) {
        out.gamma_isc[{p.initial, p.final_}] = g;
        out.provenance["gamma_isc(" + p.initial + "," + p.final_ + ")"] =
            "phenomenological: isc_ratio * gamma0";
      }
    }
    return out;
  }

  if (config.pairs.empty())
    throw std::invalid_argument(
        "missing required rate: computed mode needs explicit pairs");
  for (const RatePair& p : config.pairs) {
    double g =
        isc_rate_first_order(p.lambda, config.model, p.delta, config.alpha);
    out.gamma_isc[{p.initial, p.final_}] = g;
    out.provenance["gamma_isc(" + p.initial + "," + p.final_ + ")"] =
        "computed: alpha * first-order rate at delta = " +
        std::to_string(p.delta);
  }
  return out;
}

}  // namespace vsi
