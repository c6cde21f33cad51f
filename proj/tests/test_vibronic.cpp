#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "vsi/catalog.hpp"
#include "vsi/soc.hpp"
#include "vsi/vibronic.hpp"

using namespace vsi;

namespace {

const Catalog& cat() {
  static Catalog c;
  return c;
}

Vector unit(const std::string& name) {
  Vector v = Vector::Zero(kDetCount);
  v(cat().index_of(name)) = 1.0;
  return v;
}

bool near(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) < tol;
}

bool cnear(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) < tol;
}

}  // namespace

TEST_CASE("strain deltas are the symmetrized tensor combinations") {
  StrainTensor e;
  e.e_xx = 0.3;
  e.e_yy = -0.1;
  e.e_zz = 0.7;
  e.e_xy = 0.2;
  e.e_yx = 0.4;
  e.e_xz = -0.5;
  e.e_zx = 0.1;
  e.e_yz = 0.6;
  e.e_zy = -0.2;
  StrainDeltas d = strain_deltas(e);
  CHECK(near(d.a_A1, 0.1));
  CHECK(near(d.b_A1, 0.7));
  CHECK(near(d.a_E1, 0.2));
  CHECK(near(d.a_E2, 0.3));
  CHECK(near(d.b_E1, -0.2));
  CHECK(near(d.b_E2, 0.2));
}

TEST_CASE("strain hamiltonian special cases") {
  CHECK(strain_hamiltonian(StrainTensor{}).norm() == 0.0);

  StrainTensor ez;
  ez.e_zz = 0.42;
  Matrix hz = strain_hamiltonian(ez);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double want = (a >= 2 && b >= 2) ? 0.42 : 0.0;
      CHECK(cnear(hz(a, b), want));
    }
  }

  StrainTensor exy;
  exy.e_xy = 0.15;
  exy.e_yx = 0.05;
  Matrix hxy = strain_hamiltonian(exy);
  CHECK(cnear(hxy(0, 1), 0.1));
  CHECK(cnear(hxy(1, 0), 0.1));
  hxy(0, 1) = hxy(1, 0) = 0.0;
  CHECK(hxy.norm() == 0.0);
}

TEST_CASE("strain hamiltonian equals its ket-bra expansion") {
  // Independent route: assemble the operator term by term from dyads
  // instead of from the per-symmetry projector sum.
  auto dyad = [](int a, int b) {
    Matrix m = Matrix::Zero(4, 4);
    m(a, b) = 1.0;
    return m;
  };
  const int X = 0, Y = 1, U = 2, V = 3;
  StrainTensor e;
  e.e_xx = 0.11;
  e.e_yy = -0.23;
  e.e_zz = 0.37;
  e.e_xy = 0.41;
  e.e_yx = -0.19;
  e.e_xz = 0.29;
  e.e_zx = 0.07;
  e.e_yz = -0.31;
  e.e_zy = 0.13;
  StrainDeltas d = strain_deltas(e);
  Matrix want = d.a_A1 * (dyad(X, X) + dyad(Y, Y)) +
                d.b_A1 * (dyad(U, U) + dyad(U, V) + dyad(V, U) + dyad(V, V)) +
                d.a_E1 * (dyad(X, X) - dyad(Y, Y)) +
                d.b_E1 * (dyad(X, U) + dyad(X, V) + dyad(U, X) + dyad(V, X)) +
                d.a_E2 * (dyad(X, Y) + dyad(Y, X)) +
                d.b_E2 * (dyad(Y, U) + dyad(Y, V) + dyad(U, Y) + dyad(V, Y));
  Matrix got = strain_hamiltonian(e);
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((got - got.adjoint()).norm() < 1e-12);
}

TEST_CASE("phonon projector selection between doublet manifolds") {
  // One-substitution rule: d9 and d4 differ by a u/v swap, which only the
  // axial pattern contains; the planar patterns leave the block empty.
  Matrix a1 = eph_projector(cat(), "d9", "d4", PhononMode::A1);
  CHECK(std::abs(a1(cat().index_of("d9_1"), cat().index_of("d4_1")) -
                 Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(a1(cat().index_of("d9_2"), cat().index_of("d4_2")) -
                 Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(a1(cat().index_of("d9_1"), cat().index_of("d4_2"))) < 1e-14);
  CHECK(a1.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK(eph_projector(cat(), "d9", "d4", PhononMode::E1).norm() == 0.0);
  CHECK(eph_projector(cat(), "d9", "d4", PhononMode::E2).norm() == 0.0);

  // Two substitutions apart: dark for every one-phonon pattern.
  CHECK(eph_projector(cat(), "d5", "d7", PhononMode::A1).norm() == 0.0);
  CHECK(eph_projector(cat(), "d5", "d7", PhononMode::E1).norm() == 0.0);
  CHECK(eph_projector(cat(), "d5", "d7", PhononMode::E2).norm() == 0.0);

  CHECK_THROWS_AS(eph_projector(cat(), "nope", "d4", PhononMode::A1),
                  std::invalid_argument);
  CHECK_THROWS_AS(eph_projector(cat(), "d9", "nope", PhononMode::A1),
                  std::invalid_argument);
}

TEST_CASE("planar phonon blocks between the residual doublets and d4") {
  SocTable t = golden_soc_table(cat());
  Matrix pe1 = eph_projector(cat(), "other", "d4", PhononMode::E1);
  Matrix pe2 = eph_projector(cat(), "other", "d4", PhononMode::E2);
  Matrix pa1 = eph_projector(cat(), "other", "d4", PhononMode::A1);

  auto layer = [&](const Matrix& p, const char* row, const char* col) {
    int r = t.row_index(row);
    return Complex((t.row_states[r].adjoint() * p * unit(col))(0, 0)) *
           t.row_norms[r];
  };

  // Within each doublet pair the two patterns carry a fixed quarter-cycle
  // phase between them; the partner pair carries the conjugate phase.
  const double g = std::sqrt(3.0) / 4.0;
  CHECK(cnear(layer(pe1, "d6p_1", "d4_1"), g));
  CHECK(cnear(layer(pe1, "d6p_2", "d4_1"), -g));
  CHECK(cnear(layer(pe1, "d6p_3", "d4_2"), -g));
  CHECK(cnear(layer(pe1, "d6p_4", "d4_2"), g));
  CHECK(cnear(layer(pe1, "d6p_1", "d4_2"), 0.0));
  CHECK(cnear(layer(pe1, "d6p_2", "d4_2"), 0.0));
  CHECK(cnear(layer(pe1, "d6p_3", "d4_1"), 0.0));
  CHECK(cnear(layer(pe1, "d6p_4", "d4_1"), 0.0));

  CHECK(cnear(layer(pe2, "d6p_1", "d4_1"), Complex(0, -g)));
  CHECK(cnear(layer(pe2, "d6p_2", "d4_1"), Complex(0, g)));
  CHECK(cnear(layer(pe2, "d6p_3", "d4_2"), Complex(0, -g)));
  CHECK(cnear(layer(pe2, "d6p_4", "d4_2"), Complex(0, g)));

  // Only the four lowest residual states touch d4; the axial pattern is
  // dark for all of them.
  for (int i = 5; i <= 12; ++i) {
    std::string name = "other_" + std::to_string(i);
    int r = cat().index_of(name);
    for (const char* c : {"d4_1", "d4_2"}) {
      CHECK(std::abs(pe1(r, cat().index_of(c))) < 1e-14);
      CHECK(std::abs(pe2(r, cat().index_of(c))) < 1e-14);
    }
  }
  CHECK(pa1.norm() < 1e-14);
}

TEST_CASE("planar phonon block between the true d6 manifold and d4") {
  MixedManifolds mm = soc_mixed_manifolds(cat());
  Matrix pe1 = eph_projector(cat(), "d6", "d4", PhononMode::E1);
  double fro2 = 0;
  for (const MixedState& s : mm.d6) {
    for (const char* c : {"d4_1", "d4_2"}) {
      fro2 += std::norm(Complex((s.amp.adjoint() * pe1 * unit(c))(0, 0)));
    }
  }
  CHECK(near(fro2, 1.0, 1e-10));
}

TEST_CASE("ground-state ladder overlaps") {
  VibronicModel m;
  m.huang_rhys = 0.0;
  CHECK(fc_overlap(m, 0) == 1.0);
  CHECK(fc_overlap(m, 1) == 0.0);
  CHECK(fc_overlap(m, 5) == 0.0);

  m.huang_rhys = 1.0;
  CHECK(near(fc_overlap(m, 2) * fc_overlap(m, 2), std::exp(-1.0) / 2.0));

  for (double s : {0.25, 1.0, 4.0, 9.0}) {
    m.huang_rhys = s;
    int cutoff = static_cast<int>(s + 10.0 * std::sqrt(s) + 20.0) + 1;
    double sum = 0;
    for (int n = 0; n <= cutoff; ++n) {
      double f = fc_overlap(m, n);
      sum += f * f;
    }
    CHECK(sum >= 1.0 - 1e-8);
  }
}

TEST_CASE("general ladder overlaps match the integral oracle") {
  // Frozen from a direct numeric overlap integral of displaced oscillator
  // eigenfunctions.
  auto fc = [](int m, int n, double s) {
    VibronicModel v;
    v.huang_rhys = s;
    return fc_overlap(v, m, n);
  };
  CHECK(near(fc(0, 2, 1.0), 0.428881942480356, 1e-12));
  CHECK(near(fc(2, 3, 1.0), -0.175090319828455, 1e-12));
  CHECK(near(fc(5, 1, 2.7), 0.396795913431853, 1e-12));
  CHECK(near(fc(0, 4, 0.3), 0.015812215198401, 1e-12));
  CHECK(near(fc(3, 3, 6.0), 0.049787068367872, 1e-12));
  CHECK(near(fc(1, 0, 1.0), 0.606530659712633, 1e-12));
  CHECK(near(fc(0, 1, 1.0), -0.606530659712633, 1e-12));
  CHECK(near(fc(4, 2, 0.9), 0.464678132343188, 1e-12));

  // Resolution of identity across the displaced basis.
  VibronicModel m;
  m.huang_rhys = 1.7;
  for (auto [a, b] : {std::pair{0, 0}, {1, 1}, {3, 2}, {0, 2}}) {
    double sum = 0;
    for (int n = 0; n <= 200; ++n) sum += fc_overlap(m, a, n) * fc_overlap(m, b, n);
    CHECK(near(sum, a == b ? 1.0 : 0.0, 1e-8));
  }

  VibronicModel bad;
  bad.huang_rhys = -0.1;
  CHECK_THROWS_AS(fc_overlap(bad, 0), std::invalid_argument);
  VibronicModel ok;
  CHECK_THROWS_AS(fc_overlap(ok, -1), std::invalid_argument);
  CHECK_THROWS_AS(fc_overlap(ok, 2, -3), std::invalid_argument);
}

TEST_CASE("broadened delta and thermal weights") {
  double sum = 0, dx = 0.02;
  for (double x = -15.0; x <= 15.0; x += dx) sum += gaussian_delta(x, 1.3) * dx;
  CHECK(near(sum, 1.0, 1e-8));
  CHECK_THROWS_AS(gaussian_delta(0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_delta(0.1, -1.0), std::invalid_argument);

  CHECK(thermal_weight(0.0, 0) == 1.0);
  CHECK(thermal_weight(0.0, 1) == 0.0);
  double tot = 0;
  for (int m = 0; m < 400; ++m) tot += thermal_weight(2.3, m);
  CHECK(near(tot, 1.0, 1e-8));
  CHECK(near(thermal_weight(2.3, 5) / thermal_weight(2.3, 4), 2.3 / 3.3));
  CHECK_THROWS_AS(thermal_weight(-0.5, 0), std::invalid_argument);
}

TEST_CASE("first-order crossing rate") {
  VibronicModel m;
  m.mode_energy = 172.0;
  m.huang_rhys = 1.3;
  m.sigma = 0.5;

  CHECK(isc_rate_first_order(0.0, m, 200.0) == 0.0);

  double r1 = isc_rate_first_order(0.7, m, 3 * 172.0);
  double r2 = isc_rate_first_order(1.4, m, 3 * 172.0);
  CHECK(near(r2 / r1, 4.0, 1e-12));

  // On an isolated resonance the sum collapses to one ladder level.
  double s = m.huang_rhys;
  double want = 0.7 * 0.7 * std::exp(-s) * s * s * s / 6.0 *
                gaussian_delta(0.0, m.sigma);
  CHECK(near(r1 / want, 1.0, 1e-12));

  // Narrowing the line rescales the peak height but not its weight.
  VibronicModel narrow = m;
  narrow.sigma = 0.25;
  double r3 = isc_rate_first_order(0.7, narrow, 3 * 172.0);
  CHECK(near(r3 * narrow.sigma, r1 * m.sigma, 1e-12));

  // Uphill transfer needs thermal occupation.
  VibronicModel cold = m, warm = m;
  warm.nbar = 0.5;
  double up_cold = isc_rate_first_order(1.0, cold, -172.0);
  double up_warm = isc_rate_first_order(1.0, warm, -172.0);
  CHECK(up_cold < 1e-30);
  CHECK(up_warm > 1e-3);

  VibronicModel bad = m;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(isc_rate_first_order(1.0, bad, 0.0), std::invalid_argument);
}

TEST_CASE("doublet-to-ground rate follows the coupling selection") {
  // The axial spin-orbit block links d4 only to the half-spin ground pair;
  // its rate inherits the zero.
  Matrix h = manybody_channel(cat(), SocChannel::Par);
  double lam_32 = std::abs(h(cat().index_of("g_1"), cat().index_of("d4_1")));
  double lam_12 = std::abs(h(cat().index_of("g_3"), cat().index_of("d4_1")));
  CHECK(lam_32 < 1e-14);
  CHECK(near(lam_12, 4.0 / std::sqrt(6.0)));

  VibronicModel m;
  m.huang_rhys = 1.0;
  CHECK(isc_rate_first_order(lam_32, m, 2 * 172.0) == 0.0);
  CHECK(isc_rate_first_order(lam_12, m, 2 * 172.0) > 0.0);
}

TEST_CASE("second-order crossing rate") {
  VibronicModel m;
  m.mode_energy = 172.0;
  m.huang_rhys = 1.0;
  m.sigma = 1.0;

  PhononSpectrum sp;
  sp.modes.push_back({90.0, 0.8, 0.0});

  CHECK(isc_rate_second_order(0.0, m, 240.0, 150.0, sp) == 0.0);

  double r1 = isc_rate_second_order(0.5, m, 240.0, 150.0, sp);
  double r2 = isc_rate_second_order(1.0, m, 240.0, 150.0, sp);
  CHECK(r1 > 0.0);
  CHECK(near(r2 / r1, 4.0, 1e-12));

  PhononSpectrum strong = sp;
  strong.modes[0].coupling = 1.6;
  double r3 = isc_rate_second_order(0.5, m, 240.0, 150.0, strong);
  CHECK(near(r3 / r1, 4.0, 1e-12));

  // A dark absorption branch contributes nothing and is never probed for
  // resonance; occupation revives both behaviors.
  PhononSpectrum res;
  res.modes.push_back({100.0, 1.0, 0.0});
  CHECK_NOTHROW(isc_rate_second_order(1.0, m, 240.0, 72.0, res));
  res.modes[0].nbar = 0.2;
  CHECK_THROWS_WITH_AS(isc_rate_second_order(1.0, m, 240.0, 72.0, res),
                       "intermediate resonance", std::runtime_error);

  PhononSpectrum em_res;
  em_res.modes.push_back({150.0, 1.0, 0.0});
  CHECK_THROWS_WITH_AS(isc_rate_second_order(1.0, m, 240.0, 150.0, em_res),
                       "intermediate resonance", std::runtime_error);

  PhononSpectrum dark = sp;
  double off = isc_rate_second_order(1.0, m, -90.0, 400.0, dark);
  dark.modes[0].nbar = 0.3;
  double on = isc_rate_second_order(1.0, m, -90.0, 400.0, dark);
  CHECK(off < 1e-10 * on);

  CHECK_THROWS_AS(isc_rate_second_order(1.0, m, 0.0, 1.0,
                                        PhononSpectrum{{{10.0, 1.0, -0.1}}}),
                  std::invalid_argument);
}

TEST_CASE("ground-intermediate closed form matches the restricted sum") {
  VibronicModel m;
  m.mode_energy = 172.0;
  m.sigma = 1.0;
  m.max_quanta = 40;

  int points = 0;
  for (double w : {40.0, 90.0, 172.0}) {
    // Keep the final Gaussian within a few widths of a ladder rung so both
    // routes stay nonzero in double precision.
    for (int k4 : {0, 1}) {
      for (double off : {0.5, -2.0}) {
        double d4 = w + 172.0 * k4 + off;
        for (double d6 : {80.0, 150.0, 260.0}) {
          for (double s : {0.4, 1.0, 2.5}) {
            for (double nb : {0.0, 0.6}) {
              VibronicModel mm = m;
              mm.huang_rhys = s;
              mm.nbar = nb;
              PhononSpectrum sp;
              sp.modes.push_back({w, 0.9, nb > 0 ? 0.4 : 0.0});
              sp.max_intermediate = 0;
              double general = isc_rate_second_order(0.8, mm, d4, d6, sp);
              double closed = isc_rate_second_order_chi0(0.8, mm, d4, d6, sp);
              REQUIRE(closed > 0.0);
              CHECK(std::abs(general - closed) <= 1e-10 * closed);
              ++points;
            }
          }
        }
      }
    }
  }
  CHECK(points == 216);

  // With the full intermediate ladder the coherent sum deviates from the
  // single-level form.
  VibronicModel mm = m;
  mm.huang_rhys = 1.0;
  PhononSpectrum sp;
  sp.modes.push_back({90.0, 0.9, 0.0});
  double full = isc_rate_second_order(0.8, mm, 240.0, 150.0, sp);
  double frozen = isc_rate_second_order_chi0(0.8, mm, 240.0, 150.0, sp);
  CHECK(std::abs(full - frozen) > 1e-6 * frozen);
}

TEST_CASE("rate set assembly") {
  RateConfig c;
  RateSet rs = derive_rateset(c);
  CHECK(near(rs.gamma_0, 1.0 / 6.1));
  CHECK(rs.gamma_E == rs.gamma_0);
  CHECK(rs.gamma_A1 == rs.gamma_0);
  CHECK(near(rs.isc("q1", "d6"), 0.2 / 6.1));
  CHECK(near(rs.isc("q1", "d6"), 0.032786885245902, 1e-9));
  CHECK(rs.gamma_isc.size() == default_isc_pairs().size());
  for (const auto& p : default_isc_pairs()) {
    CHECK(rs.provenance.count("gamma_isc(" + p.first + "," + p.second + ")") ==
          1);
  }
  CHECK_THROWS_AS(rs.isc("q1", "d5"), std::invalid_argument);

  RateConfig zero;
  zero.gamma0 = 0.0;
  RateSet z = derive_rateset(zero);
  CHECK(z.gamma_0 == 0.0);
  CHECK(z.gamma_E == 0.0);
  CHECK(z.isc("q1", "d9") == 0.0);

  RateConfig neg;
  neg.gamma0 = -1.0;
  CHECK_THROWS_AS(derive_rateset(neg), std::invalid_argument);
  RateConfig negr;
  negr.isc_ratio = -0.2;
  CHECK_THROWS_AS(derive_rateset(negr), std::invalid_argument);

  RateConfig comp;
  comp.mode = RateConfig::Mode::Computed;
  CHECK_THROWS_AS(derive_rateset(comp), std::invalid_argument);
  comp.pairs.push_back({"q1", "d6", 0.9, 2 * 172.0});
  comp.alpha = 2.5;
  RateSet cs = derive_rateset(comp);
  CHECK(near(cs.isc("q1", "d6"),
             isc_rate_first_order(0.9, comp.model, 2 * 172.0, 2.5)));
}
