#include <bit>

#include <unsupported/Eigen/KroneckerProduct>

#include "doctest.h"
#include "vsi/fock.hpp"

using namespace vsi;

namespace {

const HoleBasis& basis() {
  static HoleBasis b;
  return b;
}

const Antisymmetrizer& anti() {
  static Antisymmetrizer a(basis());
  return a;
}

}  // namespace

TEST_CASE("determinant basis covers all three-hole masks in order") {
  const auto& b = basis();
  REQUIRE(b.size() == kDetCount);
  for (int i = 0; i < b.size(); ++i) {
    CHECK(std::popcount(static_cast<unsigned>(b.det(i).mask)) == kNumHoles);
    if (i > 0) CHECK(b.det(i - 1).mask < b.det(i).mask);
    CHECK(b.index_of(b.det(i).mask) == i);
  }
  CHECK(b.index_of(0b00000111) == 0);
  CHECK(b.index_of(0b11100000) == kDetCount - 1);
}

TEST_CASE("written-order determinants carry the reordering parity") {
  const auto& b = basis();
  int x = spin_orbital(Orb::EX, 0), y = spin_orbital(Orb::EY, 0),
      yb = spin_orbital(Orb::EY, 1);
  auto [i0, s0] = b.det_from_orbitals({x, y, yb});
  auto [i1, s1] = b.det_from_orbitals({y, yb, x});  // cyclic, even
  auto [i2, s2] = b.det_from_orbitals({y, x, yb});  // one swap, odd
  CHECK(i0 == i1);
  CHECK(i0 == i2);
  CHECK(s0 == 1.0);
  CHECK(s1 == 1.0);
  CHECK(s2 == -1.0);
  CHECK_THROWS(b.det_from_orbitals({x, x, y}));
}

TEST_CASE("configuration labels count holes per orbital") {
  const auto& b = basis();
  std::array<int, 8> sizes{};
  for (int i = 0; i < b.size(); ++i) {
    sizes[static_cast<int>(det_config(b.det(i).mask))]++;
  }
  CHECK(sizes == std::array<int, 8>{12, 12, 16, 4, 4, 4, 2, 2});
  Matrix sum = Matrix::Zero(kDetCount, kDetCount);
  for (int c = 0; c < 8; ++c) {
    sum += config_projector(b, static_cast<Config>(c));
  }
  CHECK((sum - Matrix::Identity(kDetCount, kDetCount)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("antisymmetrizer maps the cube isometrically onto determinants") {
  const Matrix& t = anti().matrix();
  REQUIRE(t.rows() == kDetCount);
  REQUIRE(t.cols() == kCubeDim);
  CHECK((t * t.adjoint() - Matrix::Identity(kDetCount, kDetCount))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("product lifts compose like the one-particle operators") {
  Matrix a = one_particle_action(static_cast<int>(Elem::C3));
  Matrix b = one_particle_action(static_cast<int>(Elem::Sv1));
  Matrix la = anti().lift_product(a);
  Matrix lb = anti().lift_product(b);
  Matrix lab = anti().lift_product(a * b);
  CHECK((la * lb - lab).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("one-body lift agrees with the antisymmetrizer route") {
  // a fixed non-symmetric one-particle operator exercises every sign
  Matrix a = Matrix::Zero(kNumSpinOrbitals, kNumSpinOrbitals);
  for (int p = 0; p < kNumSpinOrbitals; ++p) {
    for (int q = 0; q < kNumSpinOrbitals; ++q) {
      a(p, q) = Complex(0.1 * (p + 1), 0.3 * (q - p));
    }
  }
  Matrix direct = lift_one_body(basis(), a);

  Matrix id = Matrix::Identity(kNumSpinOrbitals, kNumSpinOrbitals);
  Matrix cube = Eigen::kroneckerProduct(a, Eigen::kroneckerProduct(id, id));
  cube += Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(a, id));
  cube += Eigen::kroneckerProduct(id, Eigen::kroneckerProduct(id, a));
  Matrix viaT = anti().matrix() * cube * anti().matrix().adjoint();

  CHECK((direct - viaT).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lifted symmetry action factors into orbital and spin parts") {
  Rep full = lifted_rep(basis(), anti());
  Rep orb = lifted_orbital_rep(basis(), anti());
  Rep spin = lifted_spin_rep(basis(), anti());
  for (int g = 0; g < kGroupOrder; ++g) {
    CHECK((orb.d[g] * spin.d[g] - full.d[g]).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((orb.d[g] * spin.d[g] - spin.d[g] * orb.d[g]).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("total spin operators obey the angular momentum algebra") {
  SpinOps s = make_spin_ops(basis());
  auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
  const Complex i(0.0, 1.0);
  CHECK((comm(s.sx, s.sy) - i * s.sz).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((comm(s.sy, s.sz) - i * s.sx).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((comm(s.sz, s.sx) - i * s.sy).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s.s2 - (s.sx * s.sx + s.sy * s.sy + s.sz * s.sz))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("symmetry action preserves total spin and reflects Sz") {
  SpinOps s = make_spin_ops(basis());
  Rep full = lifted_rep(basis(), anti());
  for (int g = 0; g < kGroupOrder; ++g) {
    const Matrix& u = full.d[g];
    CHECK((u * s.s2 - s.s2 * u).cwiseAbs().maxCoeff() < 1e-10);
    // rotations keep Sz; reflections send Sz to -Sz
    double sign = is_reflection(g) ? -1.0 : 1.0;
    CHECK((u * s.sz * u.adjoint() - sign * s.sz).cwiseAbs().maxCoeff() < 1e-10);
  }
}
