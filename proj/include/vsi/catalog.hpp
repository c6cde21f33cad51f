#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "vsi/fock.hpp"
#include "vsi/group.hpp"

namespace vsi {

constexpr double kCatalogTol = 1e-9;

// Normalized amplitude vector from a determinant expansion.  Each term
// names the three holes in written order ("u v- x" = u+, v-, ex+); the
// reordering sign into canonical ascending order is absorbed into the
// amplitude, so the input reads exactly like a penned-down wave function.
Vector parse_state(const HoleBasis& basis,
                   const std::vector<std::pair<std::string, Complex>>& terms);

// Measured quantum numbers of a vector.  Each "pure" flag records an
// eigenstate or isotypic-membership check at kCatalogTol; the value next
// to a false flag is the dominant component, kept for reporting.
struct Classification {
  Config config;
  bool config_pure;
  double spin;          // S, from the S^2 expectation
  bool spin_pure;
  double ms;            // signed <Sz>
  bool ms_pure;
  double abs_ms;        // |mS|, from the Sz^2 expectation
  bool abs_ms_pure;
  Irrep gamma;          // double-group irrep, full action
  bool gamma_pure;
  Irrep gamma_orb;      // spatial action only
  bool gamma_orb_pure;
  Irrep gamma_spin;     // spinor action only
  bool gamma_spin_pure;
};

// "+1/2", "-3/2", or "|1/2|" for a +-mS superposition.
std::string ms_label(double ms, bool mixed);

// Lifted symmetry machinery on the three-hole space, shared by the state
// catalog, the coupling tables and the self-checks.  Projectors are
// isotypic (they collect every copy of an irrep, not one row).
struct SymmetryContext {
  SymmetryContext();

  HoleBasis basis;
  Rep full;       // spatial and spinor action together
  Rep orbital;    // spatial action only
  Rep spin;       // spinor action only
  SpinOps ops;
  std::array<Matrix, kNumIrreps> iso_full;
  std::array<Matrix, kNumIrreps> iso_orbital;
  std::array<Matrix, kNumIrreps> iso_spin;
  std::array<Matrix, 8> config_proj;

  Classification classify(const Vector& amp, double tol = kCatalogTol) const;
};

struct CatalogState {
  std::string name;     // "g_1", "q2_7", "d6_2", "other_3"
  std::string family;   // "g", "q1", "q2", "d1".."d9", "other"
  int member;           // 1-based index within the family
  Config config;
  double spin;          // declared S
  double ms;            // declared mS; magnitude when ms_mixed
  bool ms_mixed;        // superposes +|mS| and -|mS|
  Irrep gamma;          // declared double-group irrep
  Irrep gamma_orb;
  Irrep gamma_spin;
  Classification cls;   // measured labels, verified against the above
  Vector amp;           // unit norm, 56-dim
};

// Orthonormal basis of symmetry-adapted three-hole states: 44 named
// multiplet members grouped in families, then 12 residual states that
// complete the space.  Construction cross-checks every state against the
// lifted symmetry operators and throws std::logic_error on any mismatch.
class Catalog {
 public:
  Catalog();

  const SymmetryContext& ctx() const { return ctx_; }
  const HoleBasis& basis() const { return ctx_.basis; }
  const std::vector<CatalogState>& states() const { return states_; }

  int index_of(const std::string& name) const;          // -1 if unknown
  const CatalogState& state(const std::string& name) const;
  std::vector<int> family(const std::string& family) const;

  // Columns are the catalog amplitudes in states() order.
  const Matrix& basis_matrix() const { return u_; }
  // Rewrites an operator from the determinant basis: U^dag op U.
  Matrix to_catalog(const Matrix& op_det_basis) const;

 private:
  void verify_named(const CatalogState& st) const;
  void append_residuals();

  SymmetryContext ctx_;
  std::vector<CatalogState> states_;
  Matrix u_;
};

}  // namespace vsi
