#include <cmath>

#include "doctest.h"
#include "vsi/catalog.hpp"
#include "vsi/soc.hpp"

using namespace vsi;

namespace {

const Complex kI(0.0, 1.0);

const Catalog& cat() {
  static Catalog c;
  return c;
}

const Matrix& channel(SocChannel ch) {
  static std::array<Matrix, kNumSocChannels> h = {
      manybody_channel(cat(), SocChannel::Par),
      manybody_channel(cat(), SocChannel::Perp1),
      manybody_channel(cat(), SocChannel::Perp2)};
  return h[static_cast<int>(ch)];
}

Complex el(SocChannel ch, const std::string& bra, const std::string& ket) {
  return channel(ch)(cat().index_of(bra), cat().index_of(ket));
}

bool near(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("single-particle channels are hermitian traceless and u-v dark") {
  for (int c = 0; c < kNumSocChannels; ++c) {
    Matrix h = single_particle_channel(static_cast<SocChannel>(c));
    REQUIRE(h.rows() == kNumSpinOrbitals);
    CHECK((h - h.adjoint()).norm() == 0.0);
    CHECK(std::abs(h.trace()) == 0.0);
    // no direct v-u path at the one-particle level
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2) {
        CHECK(h(spin_orbital(Orb::V, s1), spin_orbital(Orb::U, s2)) == 0.0);
        CHECK(h(spin_orbital(Orb::U, s1), spin_orbital(Orb::V, s2)) == 0.0);
      }
  }
  SocParams zero{0.0, 0.0, 0.0};
  CHECK(single_particle_soc(zero).norm() == 0.0);
  SocParams p{0.3, -1.1, 2.7};
  Matrix sum = p.lambda_par * single_particle_channel(SocChannel::Par) +
               p.lambda_perp1 * single_particle_channel(SocChannel::Perp1) +
               p.lambda_perp2 * single_particle_channel(SocChannel::Perp2);
  CHECK((single_particle_soc(p) - sum).norm() == 0.0);
}

TEST_CASE("configuration pairs select one coupling channel at most") {
  auto ch = [](Config a, Config b) { return soc_pair_channel(a, b); };
  CHECK(ch(Config::VE2, Config::VE2) == SocChannel::Par);
  CHECK(ch(Config::UVE, Config::UVE) == SocChannel::Par);
  CHECK(ch(Config::E3, Config::VE2) == SocChannel::Perp1);
  CHECK(ch(Config::E3, Config::UE2) == SocChannel::Perp2);
  CHECK(ch(Config::UVE, Config::UE2) == SocChannel::Perp1);
  CHECK(ch(Config::UVE, Config::VE2) == SocChannel::Perp2);
  CHECK(ch(Config::V2E, Config::VE2) == SocChannel::Perp1);
  CHECK(ch(Config::U2E, Config::UE2) == SocChannel::Perp2);
  CHECK(ch(Config::U2E, Config::U2V) == SocChannel::Perp1);
  CHECK(ch(Config::U2V, Config::UV2) == std::nullopt);  // v-u exchange
  CHECK(ch(Config::VE2, Config::UE2) == std::nullopt);
  CHECK(ch(Config::V2E, Config::UE2) == std::nullopt);
  CHECK(ch(Config::E3, Config::UVE) == std::nullopt);
  for (Config a : {Config::VE2, Config::UE2, Config::UVE, Config::E3,
                   Config::V2E, Config::U2E, Config::U2V, Config::UV2})
    for (Config b : {Config::VE2, Config::UE2, Config::UVE, Config::E3,
                     Config::V2E, Config::U2E, Config::U2V, Config::UV2})
      CHECK(ch(a, b) == ch(b, a));
}

TEST_CASE("many-body channels are hermitian and vanish between forbidden configurations") {
  const auto& states = cat().states();
  for (int c = 0; c < kNumSocChannels; ++c) {
    SocChannel sc = static_cast<SocChannel>(c);
    const Matrix& h = channel(sc);
    CHECK((h - h.adjoint()).norm() < 1e-12);
    for (size_t i = 0; i < states.size(); ++i)
      for (size_t j = 0; j < states.size(); ++j)
        if (soc_pair_channel(states[i].config, states[j].config) != sc)
          CHECK(std::abs(h(cat().index_of(states[i].name),
                           cat().index_of(states[j].name))) < 1e-12);
  }
}

TEST_CASE("full matrix reconstructs exactly from the three unit responses") {
  SocParams p{0.37, -1.25, 0.81};
  SocMatrix m = manybody_soc(cat(), p);
  Matrix sum = p.lambda_par * m.channel[0] + p.lambda_perp1 * m.channel[1] +
               p.lambda_perp2 * m.channel[2];
  CHECK((m.matrix - sum).norm() == 0.0);
  CHECK((m.channel[0] - channel(SocChannel::Par)).norm() == 0.0);
  CHECK((m.matrix - m.matrix.adjoint()).norm() < 1e-12);
  CHECK(m.families.size() == 13);
  CHECK(m.families.at("other").size() == 12);
  CHECK_THROWS(m.block("g", "nosuch"));
}

TEST_CASE("scalar coupling only connects states of the same double-group row") {
  SocMatrix m = manybody_soc(cat(), SocParams{});
  const auto& states = cat().states();
  double worst = 0;
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = 0; j < states.size(); ++j)
      if (states[i].gamma != states[j].gamma)
        worst = std::max(worst, std::abs(m.matrix(cat().index_of(states[i].name),
                                                  cat().index_of(states[j].name))));
  CHECK(worst < 1e-12);
  // E1/2 and E3/2 quartet members never mix even inside one family
  CHECK(std::abs(m.matrix(cat().index_of("d6_1"), cat().index_of("g_1"))) <
        1e-12);
}

TEST_CASE("axial couplings match the pinned values") {
  const double s23 = std::sqrt(2.0 / 3), s2 = std::sqrt(2.0),
               r3 = 1 / std::sqrt(3.0), r6 = 1 / std::sqrt(6.0),
               r2 = 1 / std::sqrt(2.0);
  SUBCASE("v-mediated") {
    CHECK(near(el(SocChannel::Perp1, "d1_1", "g_4"), -s23));
    CHECK(near(el(SocChannel::Perp1, "d1_2", "g_3"), s23));
    CHECK(near(el(SocChannel::Perp1, "d1_3", "g_1"), -s2));
    CHECK(near(el(SocChannel::Perp1, "d1_4", "g_2"), -s2));
    CHECK(near(el(SocChannel::Perp1, "d5_1", "g_4"), -kI * s23));
    CHECK(near(el(SocChannel::Perp1, "d5_3", "g_1"), kI * s2));
    CHECK(near(el(SocChannel::Perp1, "d6_1", "q1_4"), -1.0 / 3));
    CHECK(near(el(SocChannel::Perp1, "d6_2", "q1_4"), r3));
    CHECK(near(el(SocChannel::Perp1, "d6_3", "q1_3"), 1.0 / 3));
    CHECK(near(el(SocChannel::Perp1, "d7_1", "q2_1"), -kI * r6));
    CHECK(near(el(SocChannel::Perp1, "d7_1", "q2_2"), r6));
    CHECK(near(el(SocChannel::Perp1, "d7_1", "q2_6"), 1.0 / 3));
    CHECK(near(el(SocChannel::Perp1, "d8_1", "q2_7"), kI * s23));
    CHECK(near(el(SocChannel::Perp1, "d8_2", "q2_8"), -kI * s23));
    CHECK(near(el(SocChannel::Perp1, "d8_3", "q2_1"), -kI));
    CHECK(near(el(SocChannel::Perp1, "d8_3", "q2_2"), -1.0));
    CHECK(near(el(SocChannel::Perp1, "d9_1", "q2_1"), -r2));
    CHECK(near(el(SocChannel::Perp1, "d9_1", "q2_2"), -kI * r2));
    CHECK(near(el(SocChannel::Perp1, "d9_1", "q2_6"), kI * r3));
    CHECK(near(el(SocChannel::Perp1, "other_1", "q1_1"), kI * r3));
    CHECK(near(el(SocChannel::Perp1, "other_2", "q1_1"), -kI));
  }
  SUBCASE("u-mediated") {
    CHECK(near(el(SocChannel::Perp2, "d1_1", "q1_4"), -s23));
    CHECK(near(el(SocChannel::Perp2, "d1_3", "q1_1"), -s2));
    CHECK(near(el(SocChannel::Perp2, "d2_1", "q2_1"), kI * r6));
    CHECK(near(el(SocChannel::Perp2, "d2_1", "q2_2"), -r6));
    CHECK(near(el(SocChannel::Perp2, "d2_1", "q2_6"), -1.0 / 3));
    CHECK(near(el(SocChannel::Perp2, "d3_1", "q2_7"), -kI * s23));
    CHECK(near(el(SocChannel::Perp2, "d3_3", "q2_1"), kI));
    CHECK(near(el(SocChannel::Perp2, "d3_3", "q2_2"), 1.0));
    CHECK(near(el(SocChannel::Perp2, "d4_1", "q2_1"), r2));
    CHECK(near(el(SocChannel::Perp2, "d4_1", "q2_2"), kI * r2));
    CHECK(near(el(SocChannel::Perp2, "d4_1", "q2_6"), -kI * r3));
    CHECK(near(el(SocChannel::Perp2, "d6_1", "g_4"), -2.0 / 3));
    CHECK(near(el(SocChannel::Perp2, "d6_3", "g_3"), 2.0 / 3));
    CHECK(near(el(SocChannel::Perp2, "other_1", "g_1"), -kI * r3));
    CHECK(near(el(SocChannel::Perp2, "other_2", "g_1"), -kI));
  }
}

TEST_CASE("axial-field couplings match the pinned values") {
  const double f = 4 / std::sqrt(6.0), r3 = 1 / std::sqrt(3.0),
               s2 = std::sqrt(2.0);
  CHECK(near(el(SocChannel::Par, "d4_1", "g_3"), kI * f));
  CHECK(near(el(SocChannel::Par, "d4_2", "g_4"), -kI * f));
  CHECK(near(el(SocChannel::Par, "d9_1", "q1_3"), kI * f));
  CHECK(near(el(SocChannel::Par, "d9_2", "q1_4"), -kI * f));
  CHECK(near(el(SocChannel::Par, "q2_1", "q2_2"), -kI));
  CHECK(near(el(SocChannel::Par, "q2_3", "q2_4"), kI));
  CHECK(near(el(SocChannel::Par, "q2_5", "q2_5"), -1.0 / 3));
  CHECK(near(el(SocChannel::Par, "q2_7", "q2_7"), 1.0 / 3));
  CHECK(near(el(SocChannel::Par, "d6_1", "q2_5"), s2 / 3));
  CHECK(near(el(SocChannel::Par, "d6_2", "q2_5"), s2 * r3));
  CHECK(near(el(SocChannel::Par, "other_1", "q2_7"), -kI * 2.0 * s2 / 3.0));
}

TEST_CASE("within-family splittings") {
  SUBCASE("unsplit families stay dark") {
    SocMatrix m = manybody_soc(cat(), SocParams{});
    for (const char* fam : {"g", "q1", "d2", "d3", "d4", "d7", "d8", "d9"}) {
      INFO(fam);
      CHECK(m.block(fam, fam).norm() < 1e-12);
    }
  }
  SUBCASE("spin-orbit diagonal of the orbital-triple quartets") {
    CHECK(near(el(SocChannel::Par, "d1_1", "d1_1"), 1.0));
    CHECK(near(el(SocChannel::Par, "d1_2", "d1_2"), 1.0));
    CHECK(near(el(SocChannel::Par, "d1_3", "d1_3"), -1.0));
    CHECK(near(el(SocChannel::Par, "d1_4", "d1_4"), -1.0));
    CHECK(near(el(SocChannel::Par, "d5_1", "d5_1"), -1.0));
    CHECK(near(el(SocChannel::Par, "d5_2", "d5_2"), -1.0));
    CHECK(near(el(SocChannel::Par, "d5_3", "d5_3"), 1.0));
    CHECK(near(el(SocChannel::Par, "d5_4", "d5_4"), 1.0));
  }
  SUBCASE("d6 block repeats identically in both spin sectors") {
    const double r3 = 1 / std::sqrt(3.0);
    CHECK(near(el(SocChannel::Par, "d6_1", "d6_1"), -2.0 / 3));
    CHECK(near(el(SocChannel::Par, "d6_1", "d6_2"), r3));
    CHECK(near(el(SocChannel::Par, "d6_2", "d6_2"), 0.0));
    CHECK(near(el(SocChannel::Par, "d6_3", "d6_3"), -2.0 / 3));
    CHECK(near(el(SocChannel::Par, "d6_3", "d6_4"), r3));
    CHECK(near(el(SocChannel::Par, "d6_4", "d6_4"), 0.0));
    CHECK(near(el(SocChannel::Par, "d6_1", "d6_3"), 0.0));
    CHECK(near(el(SocChannel::Par, "d6_1", "d6_4"), 0.0));
    CHECK(near(el(SocChannel::Par, "d6_2", "d6_4"), 0.0));
  }
  SUBCASE("residual-family structure") {
    const double s2 = std::sqrt(2.0);
    CHECK(near(el(SocChannel::Par, "other_1", "other_1"), -1.0 / 3));
    CHECK(near(el(SocChannel::Par, "other_2", "other_2"), 1.0));
    CHECK(near(el(SocChannel::Par, "other_3", "other_3"), -1.0 / 3));
    CHECK(near(el(SocChannel::Par, "other_4", "other_4"), 1.0));
    CHECK(near(el(SocChannel::Par, "other_5", "other_5"), -1.0));
    CHECK(near(el(SocChannel::Par, "other_7", "other_7"), 1.0));
    CHECK(near(el(SocChannel::Perp1, "other_5", "other_10"), -s2));
    CHECK(near(el(SocChannel::Perp1, "other_6", "other_9"), s2));
    CHECK(near(el(SocChannel::Par, "other_11", "other_11"), 0.0));
    CHECK(near(el(SocChannel::Par, "other_12", "other_12"), 0.0));
  }
}

TEST_CASE("v-mediated block of the lowest quartet maps onto the u-mediated one") {
  // exchanging the roles of the two axial orbitals swaps the g and q1 columns
  Matrix p1 = channel(SocChannel::Perp1), p2 = channel(SocChannel::Perp2);
  auto idx = [&](const std::string& fam) { return cat().family(fam); };
  auto g = idx("g"), q1 = idx("q1"), d1 = idx("d1");
  for (size_t r = 0; r < d1.size(); ++r)
    for (size_t c = 0; c < g.size(); ++c)
      CHECK(near(p1(d1[r], g[c]), p2(d1[r], q1[c])));
}

TEST_CASE("reference coupling table reproduces modulo the two sign errata") {
  SocParams p;
  SocTable t = golden_soc_table(cat());
  REQUIRE(t.row_names.size() == 28);
  REQUIRE(t.col_names.size() == 16);
  Matrix ref = reference_soc_table(t, p);
  Matrix comp = computed_soc_table(cat(), t, p);

  int errata = 0;
  for (int r = 0; r < ref.rows(); ++r) {
    for (int c = 0; c < ref.cols(); ++c) {
      const TableEntry* e = t.entry(r, c);
      INFO(t.row_names[r], " x ", t.col_names[c]);
      if (!e) {
        CHECK(std::abs(comp(r, c)) < 1e-12);
        continue;
      }
      Complex expect = e->erratum ? -ref(r, c) : ref(r, c);
      errata += e->erratum;
      CHECK(std::abs(comp(r, c) - expect) < 1e-10 * std::abs(expect));
      CHECK(std::abs(ref(r, c) - e->coeff) < 1e-12);
    }
  }
  CHECK(errata == 2);
  CHECK(t.entry(t.row_index("d3_2"), t.col_index("q2p_2"))->erratum);
  CHECK(t.entry(t.row_index("d8_2"), t.col_index("q2p_2"))->erratum);
}

TEST_CASE("reference table entries scale with their own coupling only") {
  SocTable t = golden_soc_table(cat());
  SocParams only_perp1{0.0, 2.0, 0.0};
  Matrix ref = reference_soc_table(t, only_perp1);
  Matrix comp = computed_soc_table(cat(), t, only_perp1);
  for (const TableEntry& e : t.entries) {
    Complex expect =
        e.channel == SocChannel::Perp1 ? 2.0 * e.coeff : Complex(0.0);
    CHECK(near(ref(e.row, e.col), expect));
    if (!e.erratum) CHECK(near(comp(e.row, e.col), expect, 1e-10));
  }
  // the d7, d8, d9 rows couple through the v-mediated channel
  CHECK(std::abs(ref(t.row_index("d8_3"), t.col_index("q2p_6"))) > 0.5);
  CHECK(std::abs(ref(t.row_index("d2_1"), t.col_index("q2p_3"))) == 0.0);
}

TEST_CASE("mixed manifolds diagonalize the family blocks") {
  MixedManifolds mm = soc_mixed_manifolds(cat());
  REQUIRE(mm.q2.size() == 8);
  REQUIRE(mm.d6.size() == 4);

  const double expected_q2[] = {1, 1, 1. / 3, 1. / 3, -1. / 3, -1. / 3, -1, -1};
  for (int i = 0; i < 8; ++i) CHECK(mm.q2[i].split == doctest::Approx(expected_q2[i]));
  const double expected_d6[] = {-1, 1. / 3, -1, 1. / 3};
  for (int i = 0; i < 4; ++i) CHECK(mm.d6[i].split == doctest::Approx(expected_d6[i]));

  SUBCASE("states are orthonormal within each manifold") {
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        Complex ov = mm.q2[i].amp.dot(mm.q2[j].amp);
        CHECK(near(ov, i == j ? 1.0 : 0.0, 1e-10));
      }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Complex ov = mm.d6[i].amp.dot(mm.d6[j].amp);
        CHECK(near(ov, i == j ? 1.0 : 0.0, 1e-10));
      }
  }

  SUBCASE("states are the documented family combinations") {
    const double r2 = 1 / std::sqrt(2.0);
    Vector v = Vector::Zero(kDetCount);
    v(cat().index_of("q2_2")) = r2;
    v(cat().index_of("q2_1")) = -kI * r2;
    CHECK(std::abs(v.dot(mm.q2[0].amp)) == doctest::Approx(1.0));
    v.setZero();
    v(cat().index_of("q2_7")) = 1.0;
    CHECK(std::abs(v.dot(mm.q2[2].amp)) == doctest::Approx(1.0));
    // second member of each d6 pair enters through its non-orthogonal twin
    v.setZero();
    v(cat().index_of("d6_1")) = (-1.0 - 0.5) * r2;
    v(cat().index_of("d6_2")) = std::sqrt(3.0) / 2 * r2;
    v /= v.norm();
    CHECK(std::abs(v.dot(mm.d6[0].amp)) == doctest::Approx(1.0));
  }

  SUBCASE("eigenvector residuals against the family-restricted operator") {
    Matrix h = channel(SocChannel::Par);
    auto restrict_to = [&](const std::string& fam) {
      Matrix p = Matrix::Zero(kDetCount, kDetCount);
      for (int i : cat().family(fam)) p(i, i) = 1.0;
      return Matrix(p * h * p);
    };
    Matrix hq2 = restrict_to("q2"), hd6 = restrict_to("d6");
    for (const MixedState& s : mm.q2)
      CHECK((hq2 * s.amp - s.split * s.amp).norm() < 1e-10);
    for (const MixedState& s : mm.d6)
      CHECK((hd6 * s.amp - s.split * s.amp).norm() < 1e-10);
  }
}

TEST_CASE("manifold mixing guard rejects an already-diagonal block") {
  CHECK_THROWS_AS(detail::require_mixing(Matrix::Identity(4, 4), 1e-12),
                  std::runtime_error);
  Matrix coupled = Matrix::Identity(4, 4);
  coupled(0, 1) = coupled(1, 0) = 0.5;
  CHECK_NOTHROW(detail::require_mixing(coupled, 1e-12));
}
