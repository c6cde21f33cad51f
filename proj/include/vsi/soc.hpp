#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vsi/catalog.hpp"
#include "vsi/fock.hpp"
#include "vsi/group.hpp"

namespace vsi {

// ====================== spin-orbit coupling ======================
//
// H = sum_j l_j . s_j reduces to three independent couplings: lambda_par
// scales the axial piece lz*sz inside the E orbitals, lambda_perp1 and
// lambda_perp2 scale the transverse pieces that exchange v or u with the
// E orbitals.  Spin factors enter as Pauli matrices, so each coupling
// multiplies a dimensionless structure factor and carries the energy unit.

struct SocParams {
  double lambda_par = 1.0;    // meV
  double lambda_perp1 = 1.0;  // meV
  double lambda_perp2 = 1.0;  // meV
};

enum class SocChannel : int { Par = 0, Perp1, Perp2 };
constexpr int kNumSocChannels = 3;
const char* soc_channel_name(SocChannel c);  // "par", "perp1", "perp2"

// Which coupling connects two orbital configurations: Par within a
// configuration, Perp1 across a v/e exchange, Perp2 across a u/e exchange;
// nullopt when no single-orbital substitution links them (v/u exchange has
// no matrix element, two substitutions are out of reach of a one-body
// operator).
std::optional<SocChannel> soc_pair_channel(Config a, Config b);

// One-particle operator, 8x8 spin-orbital basis, unit coupling.
Matrix single_particle_channel(SocChannel ch);
Matrix single_particle_soc(const SocParams& p);

// Lift onto the three-hole space, rewritten in the catalog state basis.
Matrix manybody_channel(const Catalog& cat, SocChannel ch);

struct SocMatrix {
  Matrix matrix;                            // 56x56, catalog basis
  std::array<Matrix, kNumSocChannels> channel;  // unit-coupling pieces
  std::map<std::string, std::vector<int>> families;

  // Sub-block of `matrix` with rows/columns restricted to two families.
  Matrix block(const std::string& row_family,
               const std::string& col_family) const;
};
SocMatrix manybody_soc(const Catalog& cat, const SocParams& p);

// ====================== SOC-mixed manifolds ======================
//
// SOC mixes states only inside the q2 and d6 families.  The mixed (primed)
// states are fixed linear combinations of catalog states; construction
// verifies each one is an eigenvector of the family-restricted SOC block.

struct MixedState {
  std::string name;   // "q2p_1".."q2p_8", "d6p_1".."d6p_4"
  Vector amp;         // catalog basis, unit norm
  double split;       // SOC eigenvalue in units of lambda_par
};
struct MixedManifolds {
  std::vector<MixedState> q2;  // 8 states, splits +1,+1,+1/3,+1/3,-1/3,-1/3,-1,-1
  std::vector<MixedState> d6;  // 4 states, splits -1,+1/3,-1,+1/3
};
// Throws std::runtime_error if a family block shows no off-diagonal mixing
// (catalog mislabeling) or a primed state fails the eigenvector check.
MixedManifolds soc_mixed_manifolds(const Catalog& cat);

namespace detail {
// Guard shared by soc_mixed_manifolds: a manifold about to be re-diagonalized
// must actually be mixed by the block.
void require_mixing(const Matrix& block, double tol);
}  // namespace detail

// ====================== reference coupling table ======================
//
// 28 doublet rows against 16 quartet columns.  Rows and columns are
// SOC-adapted recombinations of catalog states (within degenerate pairs
// they differ from the same-named catalog states).  Cell conventions of the
// reference data, reproduced by the compute path:
//   - each cell scales with the coupling its configuration pair selects;
//   - entries flagged `dagger` carry a conjugated reduced element, which
//     with real couplings amounts to one extra factor of i;
//   - each row value is multiplied by `row_norm`, the norm of the
//     historical unnormalized row combination (1 except the d6p rows);
//   - entries flagged `erratum` have the opposite sign from the operator:
//     the computed table reproduces the reference everywhere else and flips
//     exactly these.

struct TableEntry {
  int row = 0, col = 0;
  Complex coeff;       // reference coefficient at unit coupling
  SocChannel channel;  // coupling selected by the configuration pair
  bool dagger = false;
  bool erratum = false;
};

struct SocTable {
  std::vector<std::string> row_names;  // 28
  std::vector<std::string> col_names;  // 16
  std::vector<Config> row_configs, col_configs;
  std::vector<Vector> row_states, col_states;  // catalog basis, unit norm
  std::vector<double> row_norms;
  std::vector<TableEntry> entries;

  int row_index(const std::string& name) const;  // -1 if unknown
  int col_index(const std::string& name) const;
  const TableEntry* entry(int row, int col) const;  // nullptr when blank
};

SocTable golden_soc_table(const Catalog& cat);

// Numeric tables at given couplings, both following the cell conventions
// above.  `reference` scales stored coefficients; `computed` evaluates the
// lifted operator between row/column states.
Matrix reference_soc_table(const SocTable& t, const SocParams& p);
Matrix computed_soc_table(const Catalog& cat, const SocTable& t,
                          const SocParams& p);

}  // namespace vsi
