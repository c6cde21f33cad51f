#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vsi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// ====================== C3v double group ======================
//
// Twelve elements: the six spatial operations of C3v plus their
// 2pi-rotated partners (barred elements).  Spinor representations pick
// up a sign on barred elements, vector representations do not.

enum class Elem : int {
  E = 0, C3, C3sq, Sv1, Sv2, Sv3,          // plain
  Eb, C3b, C3sqb, Sv1b, Sv2b, Sv3b         // barred (times 2pi spin rotation)
};

constexpr int kGroupOrder = 12;
constexpr int kSingleGroupOrder = 6;

const char* elem_name(Elem e);
inline Elem elem_of(int i) { return static_cast<Elem>(i); }
// Spatial part of an element (strips the bar).
inline int spatial_index(int i) { return i % kSingleGroupOrder; }
inline bool is_barred(int i) { return i >= kSingleGroupOrder; }
inline bool is_reflection(int i) { return spatial_index(i) >= 3; }

// Product g*h, computed once from the faithful spin-1/2 matrices.
int multiply(int g, int h);
int inverse(int g);

// ====================== irreducible representations ======================

enum class Irrep : int { A1 = 0, A2, E, E12, E32a, E32b };
constexpr int kNumIrreps = 6;

const char* irrep_name(Irrep g);          // "A1" "A2" "E" "E1/2" "1E3/2" "2E3/2"
int irrep_dim(Irrep g);
bool irrep_is_spinor(Irrep g);
Irrep irrep_from_name(const std::string& s);

// A representation: one matrix per group element, constant dimension.
// `validate()` checks the multiplication table; projector construction
// refuses unvalidated carriers.
struct Rep {
  std::array<Matrix, kGroupOrder> d;
  int dim = 0;
  bool validated = false;

  // Throws std::runtime_error if d[g]*d[h] != d[g*h] anywhere.
  void validate(double tol = 1e-10);
};

// Frozen matrices for each irrep.  Conventions:
//  - E acts on real (x, y): rotations R(theta), reflections across the
//    lines at 0, 60, 120 degrees.
//  - E1/2 is the SU(2) spinor rep: exp(-i theta sz) for rotations,
//    -i n.sigma for reflections (n = in-plane normal of the mirror).
//  - 1E3/2 has D(sv1) = +i, 2E3/2 has D(sv1) = -i; both have D(C3) = -1.
const Rep& irrep_rep(Irrep g);

Complex character(Irrep g, int elem);

// Single-group character table over classes {E, 2C3, 3sv} for A1, A2, E.
std::array<std::array<double, 3>, 3> character_table_single();

// Tensor product of two reps (Kronecker per element).
Rep product_rep(const Rep& a, const Rep& b);

// ====================== projection and coupling ======================

// Matrix-element projection operator on a carrier representation:
//   P^Gn_kl = (l_n/h) sum_R conj(D^Gn(R)_kl) carrier(R)
// P_kk are Hermitian idempotents; sum over all irreps and k of P_kk = 1.
Matrix projector(const Rep& carrier, Irrep g, int k, int l);

// Character (isotypic) projector: sum_k P_kk.  Independent of basis
// conventions inside each irrep.
Matrix isotypic_projector(const Rep& carrier, Irrep g);

// Multiplicity of each irrep in a carrier, by character inner products.
// Throws if a multiplicity is not near an integer.
std::map<Irrep, int> decompose(const Rep& carrier);

// Coupling coefficients (a b | g, s; i k | m) resolving products of two
// irreps.  For fixed s the stacked coefficient matrix is unitary; the
// overall phase per s is fixed by making the first nonzero coefficient
// (scanning i, then k, then m) real positive.
struct CgcTensor {
  Irrep a, b, g;
  int mult = 0;                       // multiplicity of g in a x b
  // coeff[s][m](i, k) = (a b | g, s; i k | m)
  std::vector<std::vector<Matrix>> coeff;

  Complex operator()(int s, int i, int k, int m) const { return coeff[s][m](i, k); }
};

// Throws std::runtime_error("irrep not contained in product") if g is
// absent from a x b.
CgcTensor solve_cgc(Irrep a, Irrep b, Irrep g);

// Number of times `g` appears in `a` x `b`.
int product_multiplicity(Irrep a, Irrep b, Irrep g);

// Matrix-element factor of the reduced-element decomposition:
//   <f k' | O^Go_p | i k> = conj((Gi Go | Gf; k p | k')) * <f || O || i>
// Returns 0 when Gf is not contained in Gi x Go.
Complex wigner_eckart_factor(Irrep op, int p, std::pair<Irrep, int> init,
                             std::pair<Irrep, int> fin);

// Operator selection rule: transition i -> f under an operator of
// symmetry `op` is allowed iff Gf appears in Gi x Go.
bool selection_allowed(Irrep op, Irrep init, Irrep fin);

}  // namespace vsi
