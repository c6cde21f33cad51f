#include "vsi/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "vsi/catalog.hpp"
#include "vsi/dynamics.hpp"
#include "vsi/group.hpp"
#include "vsi/soc.hpp"
#include "vsi/vibronic.hpp"

namespace vsi {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

CheckResult check_characters() {
  CheckResult r{"character table", true, ""};

  // Conjugacy classes straight from the product table; the double group
  // splits both the rotations and the reflections into barred-mixed pairs
  // of classes, so nothing here is assumed about which partner lands where.
  std::array<int, kGroupOrder> class_id;
  class_id.fill(-1);
  int num_classes = 0;
  for (int g = 0; g < kGroupOrder; ++g) {
    if (class_id[g] >= 0) continue;
    for (int h = 0; h < kGroupOrder; ++h)
      class_id[multiply(multiply(h, g), inverse(h))] = num_classes;
    ++num_classes;
  }
  if (num_classes != 6) {
    r.passed = false;
    r.detail = "expected 6 conjugacy classes, found " +
               std::to_string(num_classes);
    return r;
  }

  const Complex i(0, 1);
  int sv1 = static_cast<int>(Elem::Sv1);
  auto expected = [&](Irrep g, int e) -> Complex {
    int s = spatial_index(e);
    bool b = is_barred(e);
    bool rot = s == 1 || s == 2;
    bool refl = s >= 3;
    switch (g) {
      case Irrep::A1:
        return 1;
      case Irrep::A2:
        return refl ? -1 : 1;
      case Irrep::E:
        return refl ? 0 : (rot ? -1 : 2);
      case Irrep::E12:
        if (refl) return 0;
        if (!rot) return b ? -2 : 2;
        return (s == 1) == b ? -1 : 1;
      case Irrep::E32a:
      case Irrep::E32b: {
        Complex chi;
        if (refl) {
          chi = class_id[e] == class_id[sv1] ? i : -i;
        } else if (rot) {
          chi = (s == 1) == b ? 1 : -1;
        } else {
          chi = b ? -1 : 1;
        }
        return g == Irrep::E32b ? std::conj(chi) : chi;
      }
    }
    return 0;
  };

  double worst = 0;
  for (int g = 0; g < kNumIrreps; ++g) {
    Irrep irrep = static_cast<Irrep>(g);
    for (int e = 0; e < kGroupOrder; ++e) {
      Complex want = expected(irrep, e);
      double dev = std::abs(character(irrep, e) - want);
      worst = std::max(worst, dev);
      if (dev > 1e-12) {
        r.passed = false;
        r.detail = std::string("irrep ") + irrep_name(irrep) + " at " +
                   elem_name(elem_of(e)) + ": expected " + fmt(want.real()) +
                   "+" + fmt(want.imag()) + "i";
        return r;
      }
    }
  }
  for (int g = 0; g < kNumIrreps; ++g)
    for (int e1 = 0; e1 < kGroupOrder; ++e1)
      for (int e2 = e1 + 1; e2 < kGroupOrder; ++e2) {
        if (class_id[e1] != class_id[e2]) continue;
        Irrep irrep = static_cast<Irrep>(g);
        if (std::abs(character(irrep, e1) - character(irrep, e2)) > 1e-12) {
          r.passed = false;
          r.detail = std::string("irrep ") + irrep_name(irrep) +
                     " not constant on the class of " + elem_name(elem_of(e1));
          return r;
        }
      }

  // Single-group table as printed.
  auto tbl = character_table_single();
  const double want[3][3] = {{1, 1, 1}, {1, 1, -1}, {2, -1, 0}};
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      if (std::abs(tbl[a][c] - want[a][c]) > 1e-12) {
        r.passed = false;
        r.detail = "single-group table mismatch";
        return r;
      }
  r.detail = "all 6 irreps across 12 elements, max dev " + fmt(worst);
  return r;
}

Matrix cgc_matrix(Irrep a, Irrep b, Irrep g) {
  CgcTensor t = solve_cgc(a, b, g);
  int da = irrep_dim(a), db = irrep_dim(b), dg = irrep_dim(g);
  Matrix m(da * db, dg);
  for (int i = 0; i < da; ++i)
    for (int k = 0; k < db; ++k)
      for (int p = 0; p < dg; ++p) m(i * db + k, p) = t(0, i, k, p);
  return m;
}

CheckResult check_cgc() {
  CheckResult r{"coupling coefficients", true, ""};
  const double s = 1.0 / std::sqrt(2.0);
  auto expect = [&](Irrep a, Irrep b, Irrep g, const Matrix& want) {
    double dev = (cgc_matrix(a, b, g) - want).cwiseAbs().maxCoeff();
    if (dev > 1e-12) {
      r.passed = false;
      r.detail = std::string("block (") + irrep_name(a) + " x " +
                 irrep_name(b) + " | " + irrep_name(g) + ") off by " +
                 fmt(dev);
    }
    return dev;
  };
  Matrix id2 = Matrix::Identity(2, 2);
  Matrix rot(2, 2);
  rot << 0, 1, -1, 0;
  Matrix tr(4, 1), anti(4, 1);
  tr << s, 0, 0, s;
  anti << 0, s, -s, 0;
  double worst = expect(Irrep::A1, Irrep::E, Irrep::E, id2);
  worst = std::max(worst, expect(Irrep::A2, Irrep::E, Irrep::E, rot));
  worst = std::max(worst, expect(Irrep::E, Irrep::E, Irrep::A1, tr));
  worst = std::max(worst, expect(Irrep::E, Irrep::E, Irrep::A2, anti));
  if (!r.passed) return r;

  // Unitarity of the stacked tensors for the products the tables use.
  struct Pair {
    Irrep a, b;
  };
  for (auto [a, b] : {Pair{Irrep::E, Irrep::E}, Pair{Irrep::E, Irrep::E12},
                      Pair{Irrep::E12, Irrep::E12}}) {
    int da = irrep_dim(a), db = irrep_dim(b), n = da * db;
    Matrix stack = Matrix::Zero(n, n);
    int row = 0;
    for (auto [g, mult] : decompose(product_rep(irrep_rep(a), irrep_rep(b)))) {
      CgcTensor t = solve_cgc(a, b, g);
      for (int s2 = 0; s2 < mult; ++s2)
        for (int m = 0; m < irrep_dim(g); ++m, ++row)
          for (int i = 0; i < da; ++i)
            for (int k = 0; k < db; ++k) stack(row, i * db + k) = t(s2, i, k, m);
    }
    double dev =
        (stack * stack.adjoint() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    worst = std::max(worst, dev);
    if (dev > 1e-10) {
      r.passed = false;
      r.detail = std::string("stacked (") + irrep_name(a) + " x " +
                 irrep_name(b) + ") not unitary: dev " + fmt(dev);
      return r;
    }
  }
  r.detail = "sign blocks exact, products unitary, max dev " + fmt(worst);
  return r;
}

CheckResult check_catalog(const Catalog& cat) {
  CheckResult r{"state catalog", true, ""};
  int named = 0, quartets = 0, doublets = 0, residual = 0;
  for (const CatalogState& st : cat.states()) {
    if (st.family == "other") {
      ++residual;
      continue;
    }
    ++named;
    (st.spin > 1.0 ? quartets : doublets) += 1;
  }
  if (named != 44 || quartets != 16 || doublets != 28 || residual != 12 ||
      cat.basis_matrix().rows() != 56) {
    r.passed = false;
    r.detail = "expected 16+28 named states and 12 residuals in dim 56, got " +
               std::to_string(quartets) + "+" + std::to_string(doublets) +
               " and " + std::to_string(residual);
    return r;
  }
  const Matrix& u = cat.basis_matrix();
  double ortho =
      (u.adjoint() * u - Matrix::Identity(56, 56)).cwiseAbs().maxCoeff();

  // Membership of each tabulated state in its computed symmetry sector:
  // configuration block, isotypic block and total-spin eigenspace.
  const SymmetryContext& ctx = cat.ctx();
  Matrix p32 = (ctx.ops.s2 - 0.75 * Matrix::Identity(56, 56)) / 3.0;
  double min_overlap = 1.0;
  for (const CatalogState& st : cat.states()) {
    if (st.family == "other") continue;
    Vector v = ctx.config_proj[static_cast<int>(st.config)] *
               (ctx.iso_full[static_cast<int>(st.gamma)] * st.amp);
    v = st.spin > 1.0 ? Vector(p32 * v) : Vector(v - p32 * v);
    min_overlap = std::min(min_overlap, v.norm());
  }
  if (ortho > 1e-10 || min_overlap < 1.0 - 1e-8) {
    r.passed = false;
    r.detail = "orthonormality dev " + fmt(ortho) + ", min sector overlap " +
               fmt(min_overlap);
    return r;
  }
  r.detail = "44 named + 12 residual states, min sector overlap > 1 - " +
             fmt(1.0 - min_overlap);
  return r;
}

CheckResult check_soc_table(const Catalog& cat, double perturbation) {
  CheckResult r{"coupling table", true, ""};
  SocTable t = golden_soc_table(cat);
  if (perturbation != 0.0 && !t.entries.empty())
    t.entries.front().coeff += perturbation;
  SocParams p{1.37, 0.83, 0.61};
  Matrix ref = reference_soc_table(t, p);
  Matrix comp = computed_soc_table(cat, t, p);

  int documented = 0, unexpected = 0;
  std::string first_bad;
  for (int i = 0; i < 28; ++i) {
    for (int j = 0; j < 16; ++j) {
      const TableEntry* e = t.entry(i, j);
      double scale = std::max(1.0, std::abs(ref(i, j)));
      if (e == nullptr) {
        if (std::abs(comp(i, j)) > 1e-12 || std::abs(ref(i, j)) > 1e-12) {
          ++unexpected;
          if (first_bad.empty())
            first_bad = t.row_names[i] + "/" + t.col_names[j] +
                        " expected blank, computed " + fmt(std::abs(comp(i, j)));
        }
        continue;
      }
      bool matches = std::abs(comp(i, j) - ref(i, j)) <= 1e-10 * scale;
      bool flipped = std::abs(comp(i, j) + ref(i, j)) <= 1e-10 * scale;
      if (e->erratum ? (flipped && !matches) : matches) {
        documented += e->erratum ? 1 : 0;
        continue;
      }
      ++unexpected;
      if (first_bad.empty())
        first_bad = t.row_names[i] + "/" + t.col_names[j] + " expected " +
                    fmt(ref(i, j).real()) + "+" + fmt(ref(i, j).imag()) +
                    "i, computed " + fmt(comp(i, j).real()) + "+" +
                    fmt(comp(i, j).imag()) + "i";
    }
  }
  if (unexpected != 0 || documented != 2) {
    r.passed = false;
    r.detail = std::to_string(unexpected) + " unexpected deviation(s), " +
               std::to_string(documented) + " documented sign flip(s); " +
               first_bad;
    return r;
  }
  r.detail = "82 entries and zero pattern match; 2 documented sign flips";
  return r;
}

CheckResult check_mixed(const Catalog& cat) {
  CheckResult r{"mixed manifolds", true, ""};
  MixedManifolds mm = soc_mixed_manifolds(cat);
  auto sorted = [](const std::vector<MixedState>& v) {
    std::vector<double> s;
    for (const MixedState& m : v) s.push_back(m.split);
    std::sort(s.begin(), s.end());
    return s;
  };
  std::vector<double> q2 = sorted(mm.q2), d6 = sorted(mm.d6);
  const double third = 1.0 / 3.0;
  std::vector<double> q2_want = {-1, -1, -third, -third, third, third, 1, 1};
  std::vector<double> d6_want = {-1, -1, third, third};
  double worst = 0;
  for (std::size_t i = 0; i < q2.size(); ++i)
    worst = std::max(worst, std::abs(q2[i] - q2_want[i]));
  for (std::size_t i = 0; i < d6.size(); ++i)
    worst = std::max(worst, std::abs(d6[i] - d6_want[i]));
  if (worst > 1e-10) {
    r.passed = false;
    r.detail = "axial splittings off by " + fmt(worst);
    return r;
  }
  r.detail = "q2 and d6 axial splittings within " + fmt(worst);
  return r;
}

CheckResult check_vibrational(double sigma) {
  CheckResult r{"vibrational sum rule", true, ""};
  gaussian_delta(0.0, sigma);  // surfaces the sigma precondition
  VibronicModel m;
  m.sigma = sigma;
  double total = 0;
  for (int n = 0; n <= m.max_quanta; ++n) {
    double f = fc_overlap(m, n);
    total += f * f;
  }
  if (total < 1.0 - 1e-8) {
    r.passed = false;
    r.detail = "expected sum >= 1 - 1e-8, got " + fmt(total);
    return r;
  }
  double g02 = fc_overlap(m, 2);
  double want = 0.428881942480356;
  if (std::abs(g02 - want) > 1e-12) {
    r.passed = false;
    r.detail = "overlap <0|2'> expected " + fmt(want) + ", got " + fmt(g02);
    return r;
  }
  r.detail = "ladder sum " + fmt(total) + " over " +
             std::to_string(m.max_quanta) + " quanta";
  return r;
}

CheckResult check_rate_identity(double sigma) {
  CheckResult r{"rate identity", true, ""};
  VibronicModel m;
  m.sigma = sigma;
  PhononSpectrum sp;
  sp.modes.push_back({90.0, 0.4, 0.0});
  double worst = 0;
  for (double d6 : {150.0, 260.0}) {
    for (double d4 : {90.5, 260.0}) {
      double a = isc_rate_second_order_chi0(0.3, m, d4, d6, sp);
      PhononSpectrum sp0 = sp;
      sp0.max_intermediate = 0;
      double b = isc_rate_second_order(0.3, m, d4, d6, sp0);
      if (a == 0.0 && b == 0.0) continue;
      worst = std::max(worst, std::abs(a - b) / std::max(a, b));
    }
  }
  if (worst > 1e-10) {
    r.passed = false;
    r.detail = "closed form vs restricted sum relative gap " + fmt(worst);
    return r;
  }
  r.detail = "closed form matches restricted sum, rel dev " + fmt(worst);
  return r;
}

CheckResult check_trajectory(double t_end) {
  CheckResult r{"trajectory invariants", true, ""};
  LindbladModel model = build_channel1_model(Channel1Variant::ViaD4,
                                             derive_rateset(RateConfig{}),
                                             1.0 / 6.1);
  Trajectory tr =
      evolve(model, equal_ground_mixture(model), t_end, {.sample_dt = 5.0});
  double worst_sum = 0, min_pop = 1;
  for (const auto& pops : tr.populations) {
    double sum = 0;
    for (double p : pops) {
      sum += p;
      min_pop = std::min(min_pop, p);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  Matrix ss = steady_state(model);
  double residual = apply_lindbladian(model, ss).cwiseAbs().maxCoeff();
  if (worst_sum > 1e-8 || min_pop < -1e-9 || residual > 1e-10) {
    r.passed = false;
    r.detail = "population sum dev " + fmt(worst_sum) + ", min population " +
               fmt(min_pop) + ", steady residual " + fmt(residual);
    return r;
  }
  r.detail = "sum dev " + fmt(worst_sum) + ", min population " + fmt(min_pop) +
             ", steady residual " + fmt(residual);
  return r;
}

}  // namespace

const Catalog& shared_catalog() {
  static const Catalog cat;
  return cat;
}

CheckResult catalog_check() { return check_catalog(shared_catalog()); }

CheckResult coupling_table_check(double lambda_perturbation) {
  return check_soc_table(shared_catalog(), lambda_perturbation);
}

std::vector<CheckResult> verify_suite(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  out.push_back(check_characters());
  out.push_back(check_cgc());
  const Catalog& cat = shared_catalog();
  out.push_back(check_catalog(cat));
  out.push_back(check_soc_table(cat, opts.lambda_perturbation));
  out.push_back(check_mixed(cat));
  out.push_back(check_vibrational(opts.sigma));
  out.push_back(check_rate_identity(opts.sigma));
  out.push_back(check_trajectory(opts.trajectory_t_end));
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

}  // namespace vsi
