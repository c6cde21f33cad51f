#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vsi/group.hpp"

namespace vsi {

// ====================== one-particle space ======================
//
// Four orbitals {ex, ey, v, u} with spin, eight spin-orbitals total.
// (ex, ey) carry the E irrep, v and u carry A1.  Canonical ordering:
//   ex+ < ex- < ey+ < ey- < v+ < v- < u+ < u-
// which fixes the sign of every Slater determinant.

enum class Orb : int { EX = 0, EY = 1, V = 2, U = 3 };

constexpr int kNumSpinOrbitals = 8;
constexpr int kNumHoles = 3;
constexpr int kDetCount = 56;                 // C(8,3)
constexpr int kCubeDim = 8 * 8 * 8;

inline int spin_orbital(Orb o, int spin_down) {
  return static_cast<int>(o) * 2 + spin_down;
}
std::string spin_orbital_name(int so);        // "ex+", "ey-", ...

// Orbital part (4x4) and spin part (2x2) of a group element acting on
// the one-particle space; their Kronecker product is the full action.
Matrix one_particle_orbital(int elem);        // barred = unbarred
Matrix one_particle_spin(int elem);           // barred = negated
Matrix one_particle_action(int elem);         // 8x8

// ====================== three-hole space ======================

// Occupation mask with exactly three bits set; basis order is ascending
// mask value.
struct SlaterDet {
  uint8_t mask = 0;
  std::array<int, 3> orbitals() const;        // ascending spin-orbital indices
};

enum class Config : int { VE2 = 0, UE2, UVE, E3, V2E, U2E, U2V, UV2 };
const char* config_name(Config c);
Config det_config(uint8_t mask);

class HoleBasis {
 public:
  HoleBasis();

  int size() const { return kDetCount; }
  const SlaterDet& det(int i) const { return dets_[i]; }
  int index_of(uint8_t mask) const;           // -1 if not a 3-hole mask

  // Slater determinant from spin-orbitals in arbitrary written order;
  // sign accounts for reordering into the canonical ascending order.
  // Repeated orbitals are an error.
  std::pair<int, double> det_from_orbitals(const std::array<int, 3>& written) const;

 private:
  std::array<SlaterDet, kDetCount> dets_;
  std::array<int, 256> index_;
};

// Maps the 8^3 ordered tensor cube onto the 56 antisymmetric states.
// Rows are normalized antisymmetric combinations, so T T^dag = 1 on the
// three-hole space.
class Antisymmetrizer {
 public:
  explicit Antisymmetrizer(const HoleBasis& basis);
  const Matrix& matrix() const { return t_; }  // 56 x 512

  // T (u (x) u (x) u) T^dag without forming the 512^2 product.
  Matrix lift_product(const Matrix& u) const;

 private:
  const HoleBasis& basis_;
  Matrix t_;
};

// One-body operator sum_j a(j) on the three-hole space (a is 8x8).
Matrix lift_one_body(const HoleBasis& basis, const Matrix& a);

// Full symmetry action of a double-group element on the 56-dim space.
Matrix lift_symmetry_op(const HoleBasis& basis, const Antisymmetrizer& anti,
                        int elem);

// All twelve lifted elements as a representation (validated).
Rep lifted_rep(const HoleBasis& basis, const Antisymmetrizer& anti);
// Orbital-only action, elem acting as (orbital x identity).
Rep lifted_orbital_rep(const HoleBasis& basis, const Antisymmetrizer& anti);
// Spin-only action, elem acting as (identity x spinor).
Rep lifted_spin_rep(const HoleBasis& basis, const Antisymmetrizer& anti);

struct SpinOps {
  Matrix sx, sy, sz, s2;   // total spin and its square, 56x56
};
SpinOps make_spin_ops(const HoleBasis& basis);

// Diagonal projector onto one orbital configuration.
Matrix config_projector(const HoleBasis& basis, Config c);

}  // namespace vsi
