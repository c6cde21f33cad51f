#include "vsi/catalog.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace vsi {

namespace {

constexpr Complex kI{0.0, 1.0};

int token_spin_orbital(const std::string& tok) {
  if (tok.empty() || tok.size() > 2) {
    throw std::invalid_argument("bad spin-orbital token '" + tok + "'");
  }
  Orb o;
  switch (tok[0]) {
    case 'x': o = Orb::EX; break;
    case 'y': o = Orb::EY; break;
    case 'v': o = Orb::V; break;
    case 'u': o = Orb::U; break;
    default:
      throw std::invalid_argument("bad spin-orbital token '" + tok + "'");
  }
  int down = 0;
  if (tok.size() == 2) {
    if (tok[1] != '-') {
      throw std::invalid_argument("bad spin-orbital token '" + tok + "'");
    }
    down = 1;
  }
  return spin_orbital(o, down);
}

}  // namespace

Vector parse_state(const HoleBasis& basis,
                   const std::vector<std::pair<std::string, Complex>>& terms) {
  Vector amp = Vector::Zero(kDetCount);
  for (const auto& [written, coeff] : terms) {
    std::istringstream in(written);
    std::array<int, 3> so{};
    std::string tok;
    for (int k = 0; k < 3; ++k) {
      if (!(in >> tok)) {
        throw std::invalid_argument("term '" + written + "' needs three holes");
      }
      so[k] = token_spin_orbital(tok);
    }
    if (in >> tok) {
      throw std::invalid_argument("term '" + written + "' has extra tokens");
    }
    auto [idx, sign] = basis.det_from_orbitals(so);
    amp[idx] += sign * coeff;
  }
  double norm = amp.norm();
  if (norm < 1e-12) {
    throw std::invalid_argument("state expansion cancels to zero");
  }
  return amp / norm;
}

std::string ms_label(double ms, bool mixed) {
  auto half = [](double v) {
    int two = static_cast<int>(std::lround(2.0 * v));
    std::string s = (two % 2 == 0) ? std::to_string(two / 2)
                                   : std::to_string(std::abs(two)) + "/2";
    if (two % 2 != 0 && two < 0) s = "-" + s;
    return s;
  };
  if (mixed) return "|" + half(std::abs(ms)) + "|";
  std::string s = half(ms);
  if (ms >= 0.0 && s[0] != '-') s = "+" + s;
  return s;
}

SymmetryContext::SymmetryContext() : basis() {
  Antisymmetrizer anti(basis);
  full = lifted_rep(basis, anti);
  orbital = lifted_orbital_rep(basis, anti);
  spin = lifted_spin_rep(basis, anti);
  ops = make_spin_ops(basis);
  for (int g = 0; g < kNumIrreps; ++g) {
    auto irrep = static_cast<Irrep>(g);
    iso_full[g] = isotypic_projector(full, irrep);
    iso_orbital[g] = isotypic_projector(orbital, irrep);
    iso_spin[g] = isotypic_projector(spin, irrep);
  }
  for (int c = 0; c < 8; ++c) {
    config_proj[c] = config_projector(basis, static_cast<Config>(c));
  }
}

namespace {

// Largest-weight label among projectors, plus a purity flag: weight 1
// within tol means the vector lies inside that block.
template <typename Label>
std::pair<Label, bool> dominant(const Vector& amp,
                                const std::vector<Matrix>& projs,
                                const std::vector<Label>& labels, double tol) {
  int best = 0;
  double best_w = -1.0;
  double total = 0.0;
  for (size_t i = 0; i < projs.size(); ++i) {
    double w = std::real(amp.dot(projs[i] * amp));
    total += w;
    if (w > best_w) {
      best_w = w;
      best = static_cast<int>(i);
    }
  }
  (void)total;
  return {labels[best], std::abs(best_w - 1.0) < 10.0 * tol};
}

bool is_eigen(const Matrix& op, const Vector& amp, double* value, double tol) {
  Vector image = op * amp;
  *value = std::real(amp.dot(image));
  return (image - *value * amp).norm() < 100.0 * tol;
}

}  // namespace

Classification SymmetryContext::classify(const Vector& amp, double tol) const {
  Classification c{};

  {
    std::vector<Matrix> projs(config_proj.begin(), config_proj.end());
    std::vector<Config> labels;
    for (int i = 0; i < 8; ++i) labels.push_back(static_cast<Config>(i));
    auto [cfg, pure] = dominant(amp, projs, labels, tol);
    c.config = cfg;
    c.config_pure = pure;
  }

  double s2 = 0.0;
  c.spin_pure = is_eigen(ops.s2, amp, &s2, tol);
  c.spin = 0.5 * (std::sqrt(1.0 + 4.0 * std::max(0.0, s2)) - 1.0);

  c.ms_pure = is_eigen(ops.sz, amp, &c.ms, tol);
  double sz2 = 0.0;
  c.abs_ms_pure = is_eigen(Matrix(ops.sz * ops.sz), amp, &sz2, tol);
  c.abs_ms = std::sqrt(std::max(0.0, sz2));

  std::vector<Irrep> labels;
  for (int g = 0; g < kNumIrreps; ++g) labels.push_back(static_cast<Irrep>(g));
  auto as_vec = [](const std::array<Matrix, kNumIrreps>& a) {
    return std::vector<Matrix>(a.begin(), a.end());
  };
  std::tie(c.gamma, c.gamma_pure) = dominant(amp, as_vec(iso_full), labels, tol);
  std::tie(c.gamma_orb, c.gamma_orb_pure) =
      dominant(amp, as_vec(iso_orbital), labels, tol);
  std::tie(c.gamma_spin, c.gamma_spin_pure) =
      dominant(amp, as_vec(iso_spin), labels, tol);
  return c;
}

namespace {

using TermList = std::vector<std::pair<std::string, Complex>>;

struct StateSpec {
  const char* family;
  int member;
  Config config;
  double spin;
  double ms;          // magnitude when ms_mixed
  bool ms_mixed;
  Irrep gamma;
  Irrep gorb;
  Irrep gspin;
  // mS = +-3/2 single determinants split their spinor weight evenly
  // between the two one-dimensional blocks; the spin label on such rows
  // is bookkeeping only and is excluded from the purity check.
  bool gspin_nominal;
  TermList terms;
};

// 44 named states.  Coefficients are written-order determinant
// amplitudes before normalization.  Within every configuration the
// members are mutually orthogonal; construction enforces this.
std::vector<StateSpec> named_state_specs() {
  const Irrep A1 = Irrep::A1, A2 = Irrep::A2, E = Irrep::E;
  const Irrep E12 = Irrep::E12, E32a = Irrep::E32a, E32b = Irrep::E32b;
  std::vector<StateSpec> v;

  // ---- quartets, ve2 ----
  v.push_back({"g", 1, Config::VE2, 1.5, 1.5, true, E32a, A2, E32b, false,
               {{"v x y", 1}, {"v- x- y-", kI}}});
  v.push_back({"g", 2, Config::VE2, 1.5, 1.5, true, E32b, A2, E32a, false,
               {{"v x y", 1}, {"v- x- y-", -kI}}});
  v.push_back({"g", 3, Config::VE2, 1.5, 0.5, false, E12, A2, E12, false,
               {{"v x y-", 1}, {"v x- y", 1}, {"v- x y", 1}}});
  v.push_back({"g", 4, Config::VE2, 1.5, -0.5, false, E12, A2, E12, false,
               {{"v- x- y", 1}, {"v- x y-", 1}, {"v x- y-", 1}}});

  // ---- quartets, ue2 ----
  v.push_back({"q1", 1, Config::UE2, 1.5, 1.5, true, E32a, A2, E32b, false,
               {{"u x y", 1}, {"u- x- y-", kI}}});
  v.push_back({"q1", 2, Config::UE2, 1.5, 1.5, true, E32b, A2, E32a, false,
               {{"u x y", 1}, {"u- x- y-", -kI}}});
  v.push_back({"q1", 3, Config::UE2, 1.5, 0.5, false, E12, A2, E12, false,
               {{"u x y-", 1}, {"u x- y", 1}, {"u- x y", 1}}});
  v.push_back({"q1", 4, Config::UE2, 1.5, -0.5, false, E12, A2, E12, false,
               {{"u- x- y", 1}, {"u- x y-", 1}, {"u x- y-", 1}}});

  // ---- quartets, uve ----
  v.push_back({"q2", 1, Config::UVE, 1.5, 1.5, false, E12, E, E32a, true,
               {{"u v x", 1}}});
  v.push_back({"q2", 2, Config::UVE, 1.5, 1.5, false, E12, E, E32a, true,
               {{"u v y", 1}}});
  v.push_back({"q2", 3, Config::UVE, 1.5, -1.5, false, E12, E, E32b, true,
               {{"u- v- x-", 1}}});
  v.push_back({"q2", 4, Config::UVE, 1.5, -1.5, false, E12, E, E32b, true,
               {{"u- v- y-", 1}}});
  v.push_back({"q2", 5, Config::UVE, 1.5, 0.5, false, E12, E, E12, false,
               {{"u v y-", 1}, {"u v- y", 1}, {"u- v y", 1},
                {"u v x-", kI}, {"u v- x", kI}, {"u- v x", kI}}});
  v.push_back({"q2", 6, Config::UVE, 1.5, -0.5, false, E12, E, E12, false,
               {{"u- v- y", 1}, {"u- v y-", 1}, {"u v- y-", 1},
                {"u- v- x", -kI}, {"u- v x-", -kI}, {"u v- x-", -kI}}});
  v.push_back({"q2", 7, Config::UVE, 1.5, 0.5, true, E32a, E, E12, false,
               {{"u v y-", 1}, {"u v- y", 1}, {"u- v y", 1},
                {"u v- y-", -kI}, {"u- v y-", -kI}, {"u- v- y", -kI},
                {"u v x-", -kI}, {"u v- x", -kI}, {"u- v x", -kI},
                {"u v- x-", 1}, {"u- v x-", 1}, {"u- v- x", 1}}});
  v.push_back({"q2", 8, Config::UVE, 1.5, 0.5, true, E32b, E, E12, false,
               {{"u v y-", 1}, {"u v- y", 1}, {"u- v y", 1},
                {"u v- y-", kI}, {"u- v y-", kI}, {"u- v- y", kI},
                {"u v x-", -kI}, {"u v- x", -kI}, {"u- v x", -kI},
                {"u v- x-", -1}, {"u- v x-", -1}, {"u- v- x", -1}}});

  // ---- doublets, e3 ----
  v.push_back({"d1", 1, Config::E3, 0.5, 0.5, false, E12, E, E12, false,
               {{"x x- y", 1}, {"y y- x", kI}}});
  v.push_back({"d1", 2, Config::E3, 0.5, -0.5, false, E12, E, E12, false,
               {{"x- x y-", 1}, {"y- y x-", -kI}}});
  v.push_back({"d1", 3, Config::E3, 0.5, 0.5, true, E32a, E, E12, false,
               {{"x x- y", 1}, {"y y- x", -kI}, {"x- x y-", -kI}, {"y- y x-", 1}}});
  v.push_back({"d1", 4, Config::E3, 0.5, 0.5, true, E32b, E, E12, false,
               {{"x x- y", 1}, {"y y- x", -kI}, {"x- x y-", kI}, {"y- y x-", -1}}});

  // ---- doublets, ve2 ----
  v.push_back({"d2", 1, Config::VE2, 0.5, 0.5, false, E12, A2, E12, false,
               {{"v x y-", 1}, {"v x- y", 1}, {"v- x y", -2}}});
  v.push_back({"d2", 2, Config::VE2, 0.5, -0.5, false, E12, A2, E12, false,
               {{"v- x- y", 1}, {"v- x y-", 1}, {"v x- y-", -2}}});
  v.push_back({"d3", 1, Config::VE2, 0.5, 0.5, true, E32a, E, E12, false,
               {{"v x y-", 1}, {"v x- y", -1}, {"v- x- y", -kI}, {"v- x y-", kI},
                {"v x x-", kI}, {"v y y-", -kI}, {"v- x- x", -1}, {"v- y- y", 1}}});
  v.push_back({"d3", 2, Config::VE2, 0.5, 0.5, true, E32b, E, E12, false,
               {{"v x y-", 1}, {"v x- y", -1}, {"v- x- y", kI}, {"v- x y-", -kI},
                {"v x x-", kI}, {"v y y-", -kI}, {"v- x- x", 1}, {"v- y- y", -1}}});
  v.push_back({"d3", 3, Config::VE2, 0.5, 0.5, false, E12, E, E12, false,
               {{"v x y-", 1}, {"v x- y", -1}, {"v x x-", -kI}, {"v y y-", kI}}});
  v.push_back({"d3", 4, Config::VE2, 0.5, -0.5, false, E12, E, E12, false,
               {{"v- x- y", 1}, {"v- x y-", -1}, {"v- x- x", kI}, {"v- y- y", -kI}}});
  v.push_back({"d4", 1, Config::VE2, 0.5, 0.5, false, E12, A1, E12, false,
               {{"v x x-", 1}, {"v y y-", 1}}});
  v.push_back({"d4", 2, Config::VE2, 0.5, -0.5, false, E12, A1, E12, false,
               {{"v- x- x", 1}, {"v- y- y", 1}}});

  // ---- doublets, v2e ----
  v.push_back({"d5", 1, Config::V2E, 0.5, 0.5, false, E12, E, E12, false,
               {{"v v- x", 1}, {"v v- y", -kI}}});
  v.push_back({"d5", 2, Config::V2E, 0.5, -0.5, false, E12, E, E12, false,
               {{"v- v x-", 1}, {"v- v y-", kI}}});
  v.push_back({"d5", 3, Config::V2E, 0.5, 0.5, true, E32a, E, E12, false,
               {{"v v- x", 1}, {"v v- y", kI}, {"v- v x-", kI}, {"v- v y-", 1}}});
  v.push_back({"d5", 4, Config::V2E, 0.5, 0.5, true, E32b, E, E12, false,
               {{"v v- x", 1}, {"v v- y", kI}, {"v- v x-", -kI}, {"v- v y-", -1}}});

  // ---- doublets, uve ----
  // The two mS=+1/2 members span the same block; the second is
  // orthogonalized against the first (and likewise for mS=-1/2).
  v.push_back({"d6", 1, Config::UVE, 0.5, 0.5, false, E12, E, E12, false,
               {{"u v x-", kI}, {"u v- x", kI}, {"u- v x", -2.0 * kI},
                {"u v y-", 1}, {"u v- y", 1}, {"u- v y", -2}}});
  v.push_back({"d6", 2, Config::UVE, 0.5, 0.5, false, E12, E, E12, false,
               {{"u v x-", kI}, {"u v- x", -kI}, {"u v y-", 1}, {"u v- y", -1}}});
  v.push_back({"d6", 3, Config::UVE, 0.5, -0.5, false, E12, E, E12, false,
               {{"u- v x-", -kI}, {"u- v- x", -kI}, {"u v- x-", 2.0 * kI},
                {"u- v y-", 1}, {"u- v- y", 1}, {"u v- y-", -2}}});
  v.push_back({"d6", 4, Config::UVE, 0.5, -0.5, false, E12, E, E12, false,
               {{"u- v x-", kI}, {"u- v- x", -kI}, {"u- v y-", -1}, {"u- v- y", 1}}});

  // ---- doublets, ue2 ----
  v.push_back({"d7", 1, Config::UE2, 0.5, 0.5, false, E12, A2, E12, false,
               {{"u x y-", 1}, {"u x- y", 1}, {"u- x y", -2}}});
  v.push_back({"d7", 2, Config::UE2, 0.5, -0.5, false, E12, A2, E12, false,
               {{"u- x- y", 1}, {"u- x y-", 1}, {"u x- y-", -2}}});
  v.push_back({"d8", 1, Config::UE2, 0.5, 0.5, true, E32a, E, E12, false,
               {{"u x y-", 1}, {"u x- y", -1}, {"u- x- y", -kI}, {"u- x y-", kI},
                {"u x x-", kI}, {"u y y-", -kI}, {"u- x- x", -1}, {"u- y- y", 1}}});
  v.push_back({"d8", 2, Config::UE2, 0.5, 0.5, true, E32b, E, E12, false,
               {{"u x y-", 1}, {"u x- y", -1}, {"u- x- y", kI}, {"u- x y-", -kI},
                {"u x x-", kI}, {"u y y-", -kI}, {"u- x- x", 1}, {"u- y- y", -1}}});
  v.push_back({"d8", 3, Config::UE2, 0.5, 0.5, false, E12, E, E12, false,
               {{"u x y-", 1}, {"u x- y", -1}, {"u x x-", -kI}, {"u y y-", kI}}});
  v.push_back({"d8", 4, Config::UE2, 0.5, -0.5, false, E12, E, E12, false,
               {{"u- x- y", 1}, {"u- x y-", -1}, {"u- x- x", kI}, {"u- y- y", -kI}}});
  v.push_back({"d9", 1, Config::UE2, 0.5, 0.5, false, E12, A1, E12, false,
               {{"u x x-", 1}, {"u y y-", 1}}});
  v.push_back({"d9", 2, Config::UE2, 0.5, -0.5, false, E12, A1, E12, false,
               {{"u- x- x", 1}, {"u- y- y", 1}}});

  return v;
}

}  // namespace

Catalog::Catalog() : ctx_() {
  const auto specs = named_state_specs();
  states_.reserve(kDetCount);
  for (const auto& spec : specs) {
    CatalogState st;
    st.family = spec.family;
    st.member = spec.member;
    st.name = st.family + "_" + std::to_string(st.member);
    st.config = spec.config;
    st.spin = spec.spin;
    st.ms = spec.ms;
    st.ms_mixed = spec.ms_mixed;
    st.gamma = spec.gamma;
    st.gamma_orb = spec.gorb;
    st.gamma_spin = spec.gspin;
    st.amp = parse_state(ctx_.basis, spec.terms);
    st.cls = ctx_.classify(st.amp);

    auto fail = [&st](const std::string& what) {
      throw std::logic_error("catalog state " + st.name + ": " + what);
    };
    if (!st.cls.config_pure || st.cls.config != spec.config) {
      fail("configuration mismatch");
    }
    if (!st.cls.spin_pure || std::abs(st.cls.spin - spec.spin) > 1e-7) {
      fail("not an S=" + std::to_string(spec.spin) + " eigenstate");
    }
    if (spec.ms_mixed) {
      if (st.cls.ms_pure) fail("expected a +-mS superposition");
      if (!st.cls.abs_ms_pure || std::abs(st.cls.abs_ms - spec.ms) > 1e-7) {
        fail("|mS| mismatch");
      }
    } else if (!st.cls.ms_pure || std::abs(st.cls.ms - spec.ms) > 1e-7) {
      fail("mS mismatch");
    }
    if (!st.cls.gamma_pure || st.cls.gamma != spec.gamma) {
      fail(std::string("double-group irrep is not ") + irrep_name(spec.gamma));
    }
    if (!st.cls.gamma_orb_pure || st.cls.gamma_orb != spec.gorb) {
      fail(std::string("orbital irrep is not ") + irrep_name(spec.gorb));
    }
    if (!spec.gspin_nominal &&
        (!st.cls.gamma_spin_pure || st.cls.gamma_spin != spec.gspin)) {
      fail(std::string("spin irrep is not ") + irrep_name(spec.gspin));
    }
    states_.push_back(std::move(st));
  }

  append_residuals();

  u_ = Matrix::Zero(kDetCount, kDetCount);
  for (int j = 0; j < static_cast<int>(states_.size()); ++j) {
    u_.col(j) = states_[j].amp;
  }
  if (states_.size() != kDetCount) {
    throw std::logic_error("catalog does not span the three-hole space");
  }
  Matrix gram = u_.adjoint() * u_;
  for (int i = 0; i < kDetCount; ++i) {
    for (int j = 0; j < kDetCount; ++j) {
      double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(gram(i, j) - want) > 1e-8) {
        throw std::logic_error("catalog states " + states_[i].name + " and " +
                               states_[j].name + " are not orthonormal");
      }
    }
  }
}

// Residual states: the orthogonal complement of the named span inside
// each configuration, split by double-group irrep.  Basis choice is
// deterministic: project determinant basis vectors in ascending order,
// orthonormalize, make the first sizable component real positive.
void Catalog::append_residuals() {
  Matrix named = Matrix::Zero(kDetCount, kDetCount);
  for (const auto& st : states_) {
    named += st.amp * st.amp.adjoint();
  }
  Matrix comp = Matrix::Identity(kDetCount, kDetCount) - named;

  int counter = 0;
  for (int c = 0; c < 8; ++c) {
    for (int g = 0; g < kNumIrreps; ++g) {
      Matrix block = ctx_.iso_full[g] * ctx_.config_proj[c] * comp;
      int rank = static_cast<int>(std::lround(std::real(block.trace())));
      if (rank == 0) continue;
      std::vector<Vector> found;
      for (int k = 0; k < kDetCount && static_cast<int>(found.size()) < rank;
           ++k) {
        Vector w = block.col(k);
        for (const auto& b : found) w -= b.dot(w) * b;
        if (w.norm() < 1e-6) continue;
        w.normalize();
        for (int i = 0; i < kDetCount; ++i) {
          if (std::abs(w[i]) > 1e-8) {
            w *= std::abs(w[i]) / w[i];
            break;
          }
        }
        found.push_back(w);
      }
      if (static_cast<int>(found.size()) != rank) {
        throw std::logic_error("residual block extraction lost states");
      }
      for (auto& w : found) {
        CatalogState st;
        st.family = "other";
        st.member = ++counter;
        st.name = "other_" + std::to_string(st.member);
        st.config = static_cast<Config>(c);
        st.amp = std::move(w);
        st.cls = ctx_.classify(st.amp);
        if (!st.cls.config_pure || !st.cls.spin_pure || !st.cls.gamma_pure ||
            st.cls.gamma != static_cast<Irrep>(g)) {
          throw std::logic_error("residual state " + st.name +
                                 " failed classification");
        }
        st.spin = st.cls.spin;
        st.ms_mixed = !st.cls.ms_pure;
        st.ms = st.ms_mixed ? st.cls.abs_ms : st.cls.ms;
        st.gamma = st.cls.gamma;
        st.gamma_orb = st.cls.gamma_orb;
        st.gamma_spin = st.cls.gamma_spin;
        states_.push_back(std::move(st));
      }
    }
  }
  if (counter != 12) {
    throw std::logic_error("expected 12 residual states, found " +
                           std::to_string(counter));
  }
}

int Catalog::index_of(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(states_.size()); ++i) {
    if (states_[i].name == name) return i;
  }
  return -1;
}

const CatalogState& Catalog::state(const std::string& name) const {
  int i = index_of(name);
  if (i < 0) throw std::out_of_range("unknown catalog state '" + name + "'");
  return states_[i];
}

std::vector<int> Catalog::family(const std::string& family) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(states_.size()); ++i) {
    if (states_[i].family == family) out.push_back(i);
  }
  return out;
}

Matrix Catalog::to_catalog(const Matrix& op_det_basis) const {
  return u_.adjoint() * op_det_basis * u_;
}

}  // namespace vsi
