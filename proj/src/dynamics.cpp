#include "vsi/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vsi {

namespace {

const Complex kI(0.0, 1.0);

constexpr double kTraceTol = 1e-9;
constexpr double kHermTol = 1e-10;
constexpr double kEigTol = 1e-9;

std::string fmt_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

void require_nonneg(double value, const char* name) {
  if (value < 0)
    throw std::invalid_argument(std::string(name) + " must be nonnegative");
}

void add_jump(LindbladModel& m, const std::string& from, const std::string& to,
              double rate, double coeff2) {
  // coeff2 is the squared numeric coefficient in front of sqrt(rate).
  require_nonneg(rate, "rate");
  double a = std::sqrt(coeff2 * rate);
  if (a == 0) return;
  m.jumps.push_back(
      {m.scheme.index(from), m.scheme.index(to), a, from + "->" + to});
}

void add_drive(LindbladModel& m, const std::string& g, const std::string& e) {
  int a = m.scheme.index(g), b = m.scheme.index(e);
  m.hamiltonian(a, b) += 0.5 * m.omega;
  m.hamiltonian(b, a) += 0.5 * m.omega;
}

double ground_polarization(const std::vector<double>& pops, int ig12,
                           int ig32) {
  double sum = pops[ig12] + pops[ig32];
  return sum > 0 ? (pops[ig12] - pops[ig32]) / sum : 0.0;
}

// Fourth-order stepper with preallocated workspace; the Hamiltonian part
// uses H rho = (rho H)^dagger for Hermitian rho.
struct Stepper {
  const LindbladModel& m;
  int n;
  Matrix k1, k2, k3, k4, stage, work;

  explicit Stepper(const LindbladModel& model)
      : m(model), n(model.scheme.size()) {
    k1 = k2 = k3 = k4 = stage = work = Matrix::Zero(n, n);
  }

  void rhs(const Matrix& rho, Matrix& out) {
    work.noalias() = m.hamiltonian * rho;
    out = -kI * (work - work.adjoint());
    for (const Jump& j : m.jumps) {
      double a2 = j.amplitude * j.amplitude;
      out(j.to, j.to) += a2 * rho(j.from, j.from);
      for (int k = 0; k < n; ++k) {
        out(j.from, k) -= 0.5 * a2 * rho(j.from, k);
        out(k, j.from) -= 0.5 * a2 * rho(k, j.from);
      }
    }
  }

  void step(Matrix& rho, double dt) {
    rhs(rho, k1);
    stage = rho + (0.5 * dt) * k1;
    rhs(stage, k2);
    stage = rho + (0.5 * dt) * k2;
    rhs(stage, k3);
    stage = rho + dt * k3;
    rhs(stage, k4);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

double fixed_dt(const LindbladModel& m, double fallback) {
  double scale = m.omega;
  for (const Jump& j : m.jumps)
    scale = std::max(scale, j.amplitude * j.amplitude);
  return scale > 0 ? 0.01 / scale : fallback;
}

void check_trace(const Matrix& rho, double t) {
  if (std::abs(Complex(rho.trace()) - 1.0) > kTraceTol)
    throw std::runtime_error("trace tolerance breached at t = " + fmt_time(t) +
                             " ns");
}

void check_sample(const Matrix& rho, double t) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::runtime_error("hermiticity tolerance breached at t = " +
                             fmt_time(t) + " ns");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -kEigTol)
    throw std::runtime_error("positivity tolerance breached at t = " +
                             fmt_time(t) + " ns");
}

// Advances rho from t across span; samples are handled by the caller.
void advance_fixed(Stepper& st, Matrix& rho, double t, double span) {
  double dtm = fixed_dt(st.m, span);
  int sub = std::max(1, static_cast<int>(std::ceil(span / dtm - 1e-12)));
  double dt = span / sub;
  for (int s = 0; s < sub; ++s) {
    st.step(rho, dt);
    check_trace(rho, t + (s + 1) * dt);
  }
}

void advance_adaptive(Stepper& st, Matrix& rho, double t, double span,
                      double tol) {
  double left = span;
  double h = std::min(span, fixed_dt(st.m, span) * 4.0);
  Matrix full = rho, half = rho;
  while (left > 1e-13) {
    h = std::min(h, left);
    full = rho;
    st.step(full, h);
    half = rho;
    st.step(half, 0.5 * h);
    st.step(half, 0.5 * h);
    double err = (full - half).cwiseAbs().maxCoeff();
    if (err > tol && h > 1e-10) {
      h *= std::max(0.25, 0.9 * std::pow(tol / (err + 1e-300), 0.2));
      continue;
    }
    rho = half + (half - full) / 15.0;
    left -= h;
    check_trace(rho, t + (span - left));
    if (err < tol / 32.0) h = std::min(h * 2.0, span);
  }
}

}  // namespace

// ====================== level schemes ======================

int LevelScheme::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (levels[i] == name) return i;
  throw std::invalid_argument("unknown level '" + name + "'");
}

double LindbladModel::jump_amplitude(const std::string& from,
                                     const std::string& to) const {
  int f = scheme.index(from), t = scheme.index(to);
  for (const Jump& j : jumps)
    if (j.from == f && j.to == t) return j.amplitude;
  return 0.0;
}

LindbladModel build_channel1_model(Channel1Variant variant,
                                   const RateSet& rates, double omega) {
  require_nonneg(omega, "omega");
  require_nonneg(rates.gamma_0, "gamma_0");
  require_nonneg(rates.gamma_E, "gamma_E");
  require_nonneg(rates.gamma_A1, "gamma_A1");

  LindbladModel m;
  bool via_d4 = variant == Channel1Variant::ViaD4;
  m.scheme.channel = via_d4 ? LevelScheme::Channel::Q1ViaD4
                            : LevelScheme::Channel::Q1ViaD1;
  m.scheme.levels = {"g_12", "g_32", "q1_12", "q1_32",
                     "d6",   "d9",   via_d4 ? "d4" : "d1"};
  m.omega = omega;
  m.hamiltonian = Matrix::Zero(7, 7);
  add_drive(m, "g_12", "q1_12");
  add_drive(m, "g_32", "q1_32");

  add_jump(m, "q1_32", "d6", rates.isc("q1", "d6"), 3.0 / 4.0);
  add_jump(m, "q1_12", "d9", rates.isc("q1", "d9"), 8.0 / 3.0);
  add_jump(m, "q1_12", "g_12", rates.gamma_0, 1.0);
  add_jump(m, "q1_32", "g_32", rates.gamma_0, 1.0);
  if (via_d4) {
    add_jump(m, "d6", "d4", rates.gamma_E, 1.0);
    add_jump(m, "d9", "d4", rates.gamma_A1, 1.0);
    add_jump(m, "d4", "g_12", rates.isc("d4", "g"), 8.0 / 3.0);
  } else {
    add_jump(m, "d6", "d1", rates.gamma_E, 1.0);
    add_jump(m, "d9", "d1", rates.gamma_A1, 1.0);
    // The d1 return splits 3:1 toward the 3/2 sector, the ratio of the
    // squared ground couplings of that doublet.
    add_jump(m, "d1", "g_32", rates.isc("d1", "g"), 3.0);
    add_jump(m, "d1", "g_12", rates.isc("d1", "g"), 1.0);
  }
  return m;
}

LindbladModel build_channel2_model(double c1, double c2, const RateSet& rates,
                                   double omega, const Channel2Options& opts) {
  require_nonneg(c1, "c1");
  require_nonneg(c2, "c2");
  require_nonneg(omega, "omega");
  require_nonneg(rates.gamma_0, "gamma_0");
  require_nonneg(opts.d4_to_d1, "d4_to_d1");
  require_nonneg(opts.d1_to_g, "d1_to_g");

  LindbladModel m;
  m.scheme.channel = LevelScheme::Channel::Q2;
  m.scheme.levels = {"g_12", "g_32", "q2_12", "q2_32", "d2", "d3", "d4"};
  if (opts.include_d1) m.scheme.levels.push_back("d1");
  int n = m.scheme.size();
  m.omega = omega;
  m.hamiltonian = Matrix::Zero(n, n);
  add_drive(m, "g_12", "q2_12");
  add_drive(m, "g_32", "q2_32");

  for (const char* s : {"q2_12", "q2_32"}) {
    add_jump(m, s, "d2", rates.isc("q2", "d2"), c1 * c1);
    add_jump(m, s, "d3", rates.isc("q2", "d3"), c1 * c1);
    add_jump(m, s, "d4", rates.isc("q2", "d4"), c2 * c2);
  }
  for (const char* d : {"d2", "d3"}) {
    add_jump(m, d, "g_32", rates.isc(d, "g"), 4.0);
    add_jump(m, d, "g_12", rates.isc(d, "g"), 4.0 / 3.0);
  }
  add_jump(m, "q2_12", "g_12", rates.gamma_0, 1.0);
  add_jump(m, "q2_32", "g_32", rates.gamma_0, 1.0);

  if (opts.include_d1) {
    add_jump(m, "d4", "d1", opts.d4_to_d1, 1.0);
    add_jump(m, "d1", "g_32", opts.d1_to_g, 3.0);
    add_jump(m, "d1", "g_12", opts.d1_to_g, 1.0);
  } else {
    add_jump(m, "d4", "g_12", rates.isc("d4", "g"), 8.0 / 3.0);
  }
  return m;
}

// ====================== evolution ======================

Matrix apply_lindbladian(const LindbladModel& model, const Matrix& rho) {
  Stepper st(model);
  Matrix out = Matrix::Zero(st.n, st.n);
  st.rhs(rho, out);
  return out;
}

Matrix equal_ground_mixture(const LindbladModel& model) {
  Matrix rho = Matrix::Zero(model.scheme.size(), model.scheme.size());
  int a = model.scheme.index("g_12"), b = model.scheme.index("g_32");
  rho(a, a) = 0.5;
  rho(b, b) = 0.5;
  return rho;
}

void validate_density(const Matrix& rho) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  if (std::abs(Complex(rho.trace()) - 1.0) > kTraceTol)
    throw std::invalid_argument("density matrix trace is not 1");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::invalid_argument("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -kEigTol)
    throw std::invalid_argument("density matrix has a negative eigenvalue");
}

Trajectory evolve(const LindbladModel& model, const Matrix& rho0, double t_end,
                  const EvolveOptions& opts) {
  if (t_end < 0) throw std::invalid_argument("t_end must be nonnegative");
  if (opts.sample_dt <= 0)
    throw std::invalid_argument("sample_dt must be positive");
  if (rho0.rows() != model.scheme.size())
    throw std::invalid_argument("density matrix does not match the scheme");
  validate_density(rho0);

  Stepper st(model);
  Matrix rho = rho0;
  int ig12 = model.scheme.index("g_12"), ig32 = model.scheme.index("g_32");

  Trajectory traj;
  auto record = [&](double t) {
    check_sample(rho, t);
    std::vector<double> pops(st.n);
    for (int i = 0; i < st.n; ++i) pops[i] = rho(i, i).real();
    traj.times.push_back(t);
    traj.polarization.push_back(ground_polarization(pops, ig12, ig32));
    traj.populations.push_back(std::move(pops));
  };

  record(0.0);
  double t = 0.0;
  while (t < t_end - 1e-12) {
    double span = std::min(opts.sample_dt, t_end - t);
    if (opts.adaptive)
      advance_adaptive(st, rho, t, span, opts.rel_tol);
    else
      advance_fixed(st, rho, t, span);
    t += span;
    record(t);
  }
  return traj;
}

Matrix steady_state(const LindbladModel& model) {
  int n = model.scheme.size(), N = n * n;
  Matrix gen = Matrix::Zero(N, N);
  // Column-stacked convention: rho(i, j) sits at j*n + i.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (model.hamiltonian(i, k) == Complex(0, 0)) continue;
      for (int j = 0; j < n; ++j)
        gen(j * n + i, j * n + k) += -kI * model.hamiltonian(i, k);
    }
  }
  // rho H term, written separately.
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) {
      if (model.hamiltonian(l, j) == Complex(0, 0)) continue;
      for (int i = 0; i < n; ++i)
        gen(j * n + i, l * n + i) += kI * model.hamiltonian(l, j);
    }
  }
  for (const Jump& jp : model.jumps) {
    double a2 = jp.amplitude * jp.amplitude;
    gen(jp.to * n + jp.to, jp.from * n + jp.from) += a2;
    for (int j = 0; j < n; ++j) {
      gen(j * n + jp.from, j * n + jp.from) -= 0.5 * a2;
      gen(jp.from * n + j, jp.from * n + j) -= 0.5 * a2;
    }
  }

  Eigen::JacobiSVD<Matrix> svd(gen, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int dim;
  if (sv(0) < 1e-14) {
    dim = N;
  } else {
    double tol = sv(0) * 1e-10;
    dim = 0;
    for (int i = 0; i < N; ++i)
      if (sv(i) < tol) ++dim;
  }
  if (dim != 1)
    throw std::runtime_error("stationary subspace dimension " +
                             std::to_string(dim) + "; expected 1");

  Matrix rho(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rho(i, j) = svd.matrixV()(j * n + i, N - 1);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Complex tr = rho.trace();
  if (std::abs(tr) < 1e-10 * rho.norm())
    throw std::runtime_error(
        "stationary subspace dimension exceeds 1 (traceless null vector)");
  rho /= tr;
  double resid = apply_lindbladian(model, rho).cwiseAbs().maxCoeff();
  if (resid > 1e-10)
    throw std::runtime_error("stationary residual " + std::to_string(resid) +
                             " exceeds tolerance");
  return rho;
}

GroundPopulations pump_off_relax(const LindbladModel& model, const Matrix& rho,
                                 const RelaxOptions& opts) {
  validate_density(rho);
  LindbladModel dark = model;
  dark.omega = 0;
  dark.hamiltonian.setZero();

  int ig12 = model.scheme.index("g_12"), ig32 = model.scheme.index("g_32");
  auto excited = [&](const Matrix& r) {
    return 1.0 - r(ig12, ig12).real() - r(ig32, ig32).real();
  };

  Stepper st(dark);
  Matrix state = rho;
  double t = 0.0;
  const double chunk = 50.0;
  while (excited(state) >= opts.threshold) {
    if (t >= opts.horizon)
      throw std::runtime_error(
          "pump-off relaxation did not converge within the horizon");
    advance_fixed(st, state, t, chunk);
    t += chunk;
  }
  check_sample(state, t);
  return {state(ig12, ig12).real(), state(ig32, ig32).real()};
}

double polarization(double g12, double g32) {
  if (g12 < -kEigTol || g32 < -kEigTol)
    throw std::invalid_argument("ground populations must be nonnegative");
  g12 = std::max(g12, 0.0);
  g32 = std::max(g32, 0.0);
  double sum = g12 + g32;
  if (sum <= 0) throw std::invalid_argument("zero ground population");
  return (g12 - g32) / sum;
}

}  // namespace vsi
