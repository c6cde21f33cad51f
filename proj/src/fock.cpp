#include "vsi/fock.hpp"

#include <bit>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace vsi {

namespace {

// Sign of a^dag_p acting past the occupied modes below p.
inline int jordan_wigner_sign(uint8_t mask, int p) {
  const uint8_t below = mask & static_cast<uint8_t>((1u << p) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

std::string spin_orbital_name(int so) {
  static const char* orb[4] = {"ex", "ey", "v", "u"};
  return std::string(orb[so / 2]) + (so % 2 ? "-" : "+");
}

Matrix one_particle_orbital(int elem) {
  const Rep& e = irrep_rep(Irrep::E);
  Matrix m = Matrix::Identity(4, 4);
  m.block(0, 0, 2, 2) = e.d[spatial_index(elem)];
  // v and u are A1: untouched.
  return m;
}

Matrix one_particle_spin(int elem) { return irrep_rep(Irrep::E12).d[elem]; }

Matrix one_particle_action(int elem) {
  return Eigen::kroneckerProduct(one_particle_orbital(elem),
                                 one_particle_spin(elem))
      .eval();
}

std::array<int, 3> SlaterDet::orbitals() const {
  std::array<int, 3> out{};
  int n = 0;
  for (int p = 0; p < kNumSpinOrbitals; ++p)
    if (mask & (1u << p)) out[n++] = p;
  if (n != 3) throw std::logic_error("determinant does not have 3 holes");
  return out;
}

const char* config_name(Config c) {
  static const char* names[] = {"ve2", "ue2", "uve", "e3",
                                "v2e", "u2e", "u2v", "uv2"};
  return names[static_cast<int>(c)];
}

Config det_config(uint8_t mask) {
  int ne = 0, nv = 0, nu = 0;
  for (int p = 0; p < kNumSpinOrbitals; ++p) {
    if (!(mask & (1u << p))) continue;
    const int orb = p / 2;
    if (orb <= 1) ++ne;
    else if (orb == 2) ++nv;
    else ++nu;
  }
  if (ne == 2 && nv == 1) return Config::VE2;
  if (ne == 2 && nu == 1) return Config::UE2;
  if (ne == 1 && nv == 1 && nu == 1) return Config::UVE;
  if (ne == 3) return Config::E3;
  if (ne == 1 && nv == 2) return Config::V2E;
  if (ne == 1 && nu == 2) return Config::U2E;
  if (nv == 1 && nu == 2) return Config::U2V;
  if (nv == 2 && nu == 1) return Config::UV2;
  throw std::logic_error("unreachable configuration");
}

HoleBasis::HoleBasis() {
  index_.fill(-1);
  int n = 0;
  for (int mask = 0; mask < 256; ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) != kNumHoles) continue;
    dets_[n].mask = static_cast<uint8_t>(mask);
    index_[mask] = n;
    ++n;
  }
  if (n != kDetCount) throw std::logic_error("basis count != 56");
}

int HoleBasis::index_of(uint8_t mask) const { return index_[mask]; }

std::pair<int, double> HoleBasis::det_from_orbitals(
    const std::array<int, 3>& written) const {
  uint8_t mask = 0;
  for (int p : written) {
    if (p < 0 || p >= kNumSpinOrbitals)
      throw std::invalid_argument("spin-orbital index out of range");
    if (mask & (1u << p))
      throw std::invalid_argument("repeated spin-orbital in determinant");
    mask |= (1u << p);
  }
  // parity of the permutation sorting `written` ascending
  int sign = 1;
  auto w = written;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (w[i] > w[j]) {
        std::swap(w[i], w[j]);
        sign = -sign;
      }
  return {index_of(mask), static_cast<double>(sign)};
}

Antisymmetrizer::Antisymmetrizer(const HoleBasis& basis) : basis_(basis) {
  t_ = Matrix::Zero(kDetCount, kCubeDim);
  static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                  {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  static const double sgn[6] = {1, 1, 1, -1, -1, -1};
  const double norm = 1.0 / std::sqrt(6.0);
  for (int d = 0; d < kDetCount; ++d) {
    const auto orbs = basis.det(d).orbitals();
    for (int p = 0; p < 6; ++p) {
      const int i = orbs[perms[p][0]], j = orbs[perms[p][1]], k = orbs[perms[p][2]];
      t_(d, (i * 8 + j) * 8 + k) += sgn[p] * norm;
    }
  }
}

Matrix Antisymmetrizer::lift_product(const Matrix& u) const {
  // (u x u x u) applied to each antisymmetrized row, contracted back.
  // Work per column of T^dag instead of materializing the 512x512 cube.
  Matrix lifted = Matrix::Zero(kDetCount, kDetCount);
  for (int dcol = 0; dcol < kDetCount; ++dcol) {
    const auto orbs = basis_.det(dcol).orbitals();
    // (u x u x u) T^dag e_dcol expanded over the six permutations
    Vector cube = Vector::Zero(kCubeDim);
    static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                    {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    static const double sgn[6] = {1, 1, 1, -1, -1, -1};
    const double norm = 1.0 / std::sqrt(6.0);
    for (int p = 0; p < 6; ++p) {
      const int a = orbs[perms[p][0]], b = orbs[perms[p][1]], c = orbs[perms[p][2]];
      for (int i = 0; i < 8; ++i) {
        if (u(i, a) == 0.0) continue;
        for (int j = 0; j < 8; ++j) {
          if (u(j, b) == 0.0) continue;
          for (int k = 0; k < 8; ++k)
            cube((i * 8 + j) * 8 + k) += sgn[p] * norm * u(i, a) * u(j, b) * u(k, c);
        }
      }
    }
    lifted.col(dcol) = t_ * cube;
  }
  return lifted;
}

Matrix lift_one_body(const HoleBasis& basis, const Matrix& a) {
  Matrix out = Matrix::Zero(kDetCount, kDetCount);
  for (int d = 0; d < kDetCount; ++d) {
    const uint8_t mask = basis.det(d).mask;
    for (int q = 0; q < kNumSpinOrbitals; ++q) {
      if (!(mask & (1u << q))) continue;
      const uint8_t removed = mask & ~(1u << q);
      const int s_q = jordan_wigner_sign(removed, q);
      for (int p = 0; p < kNumSpinOrbitals; ++p) {
        if (a(p, q) == 0.0) continue;
        if (removed & (1u << p)) continue;
        const uint8_t target = removed | (1u << p);
        const int s_p = jordan_wigner_sign(removed, p);
        out(basis.index_of(target), d) += a(p, q) * double(s_p * s_q);
      }
    }
  }
  return out;
}

Matrix lift_symmetry_op(const HoleBasis& basis, const Antisymmetrizer& anti,
                        int elem) {
  return anti.lift_product(one_particle_action(elem));
}

namespace {
Rep lifted_rep_from(const HoleBasis& basis, const Antisymmetrizer& anti,
                    Matrix (*one_particle)(int)) {
  Rep r;
  r.dim = kDetCount;
  for (int g = 0; g < kGroupOrder; ++g)
    r.d[g] = anti.lift_product(one_particle(g));
  r.validate(1e-9);
  return r;
}

Matrix orbital_only(int elem) {
  return Eigen::kroneckerProduct(one_particle_orbital(elem),
                                 Matrix::Identity(2, 2))
      .eval();
}

Matrix spin_only(int elem) {
  return Eigen::kroneckerProduct(Matrix::Identity(4, 4),
                                 one_particle_spin(elem))
      .eval();
}
}  // namespace

Rep lifted_rep(const HoleBasis& basis, const Antisymmetrizer& anti) {
  return lifted_rep_from(basis, anti, &one_particle_action);
}

Rep lifted_orbital_rep(const HoleBasis& basis, const Antisymmetrizer& anti) {
  return lifted_rep_from(basis, anti, &orbital_only);
}

Rep lifted_spin_rep(const HoleBasis& basis, const Antisymmetrizer& anti) {
  return lifted_rep_from(basis, anti, &spin_only);
}

SpinOps make_spin_ops(const HoleBasis& basis) {
  const Complex I{0.0, 1.0};
  Matrix sx1 = Matrix::Zero(2, 2), sy1 = Matrix::Zero(2, 2),
         sz1 = Matrix::Zero(2, 2);
  sx1 << 0, 0.5, 0.5, 0;
  sy1 << 0, -0.5 * I, 0.5 * I, 0;
  sz1 << 0.5, 0, 0, -0.5;
  const Matrix id4 = Matrix::Identity(4, 4);
  SpinOps ops;
  ops.sx = lift_one_body(basis, Eigen::kroneckerProduct(id4, sx1).eval());
  ops.sy = lift_one_body(basis, Eigen::kroneckerProduct(id4, sy1).eval());
  ops.sz = lift_one_body(basis, Eigen::kroneckerProduct(id4, sz1).eval());
  ops.s2 = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
  return ops;
}

Matrix config_projector(const HoleBasis& basis, Config c) {
  Matrix p = Matrix::Zero(kDetCount, kDetCount);
  for (int d = 0; d < kDetCount; ++d)
    if (det_config(basis.det(d).mask) == c) p(d, d) = 1.0;
  return p;
}

}  // namespace vsi
