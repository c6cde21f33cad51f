#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vsi/catalog.hpp"

namespace vsi {

// ====================== strain ======================

// Dimensionless strain tensor components e_ij = du_i/dx_j.  Only the
// symmetrized combinations enter the orbital Hamiltonian.
struct StrainTensor {
  double e_xx = 0, e_yy = 0, e_zz = 0;
  double e_xy = 0, e_yx = 0;
  double e_xz = 0, e_zx = 0;
  double e_yz = 0, e_zy = 0;
};

// Symmetry-adapted strain amplitudes.  The a components act inside the E
// orbital pair, the b components involve the axial u and v orbitals, which
// both transform as A1 along z.
struct StrainDeltas {
  double a_A1 = 0;  // (e_xx + e_yy)/2
  double b_A1 = 0;  // e_zz
  double a_E1 = 0;  // (e_xx - e_yy)/2
  double a_E2 = 0;  // (e_xy + e_yx)/2
  double b_E1 = 0;  // (e_xz + e_zx)/2
  double b_E2 = 0;  // (e_yz + e_zy)/2
};

StrainDeltas strain_deltas(const StrainTensor& e);

// Single-hole strain Hamiltonian, 4x4 on {ex, ey, u, v}.  Hermitian with
// real entries; each delta multiplies a fixed orbital projector.
Matrix strain_hamiltonian(const StrainTensor& e);

// ====================== electron-phonon projectors ======================

// Phonon symmetry labels: the single A1 pattern and the two partners of the
// E pattern.  E1 carries the xx-yy quadrupole, E2 the xy one.
enum class PhononMode : int { A1 = 0, E1, E2 };

// Many-body phonon-coupling operator restricted to an ordered manifold
// pair: P_initial * lift(O_mode) * P_final, embedded in the full catalog
// basis.  O_mode is the strain projector combination for the given symmetry
// with unit amplitudes.  Symmetry-forbidden pairs give a zero matrix.
// Unknown family names throw std::invalid_argument.
Matrix eph_projector(const Catalog& cat, const std::string& initial_family,
                     const std::string& final_family, PhononMode mode);

// ====================== vibrational model ======================

// Single effective displaced harmonic mode per electronic pair.
struct VibronicModel {
  double mode_energy = 172.0;  // hbar*omega, meV
  double huang_rhys = 1.0;     // S >= 0
  double sigma = 1.0;          // Gaussian linewidth replacing deltas, meV
  double nbar = 0.0;           // Bose occupation of the mode, >= 0
  int max_quanta = 60;         // vibrational ladder cutoff
};

// Normalized Gaussian of width sigma; replaces the energy delta function.
// sigma <= 0 throws std::invalid_argument.
double gaussian_delta(double x, double sigma);

// Normalized Bose weight of ladder level m at occupation nbar; nbar = 0
// concentrates all weight at m = 0.
double thermal_weight(double nbar, int m);

// Ground-to-level overlap <chi_0|chi'_n> between the two displaced ladders;
// satisfies |<chi_0|chi'_n>|^2 = e^-S S^n / n!.  Negative S or n throws
// std::invalid_argument.
double fc_overlap(const VibronicModel& model, int n);

// General displaced-oscillator overlap <chi_m|chi'_n>.
double fc_overlap(const VibronicModel& model, int m, int n);

// ====================== intersystem-crossing rates ======================

// First-order rate: |lambda|^2 sum_{m,n} w_m |<chi_m|chi'_n>|^2
// G_sigma(nu_n - nu_m - delta), with Bose weights w_m over initial
// vibrational states.  delta is the electronic energy drop initial - final
// (meV); alpha is the overall calibration scalar.
double isc_rate_first_order(double lambda, const VibronicModel& model,
                            double delta, double alpha = 1.0);

// Exchanged-phonon spectrum for the second-order rate.  Each mode carries
// its energy, its coupling matrix element, and its own Bose occupation.
struct PhononSpectrum {
  struct Mode {
    double energy = 0;    // omega, meV
    double coupling = 0;  // delta-tilde matrix element
    double nbar = 0;      // occupation of this mode
  };
  std::vector<Mode> modes;
  double guard = 1e-6;        // meV; smaller denominators are resonant
  int max_intermediate = -1;  // intermediate ladder cutoff; -1 follows
                              // model.max_quanta, 0 restricts to chi_0
};

// Second-order rate through an intermediate electronic level: coherent sum
// over intermediate vibrational states n, squared, summed over initial m
// (Bose-weighted), final l, and spectrum modes, with emission (nbar+1) and
// absorption (nbar) branches.  delta4 and delta6 are the electronic drops
// from the initial level to the final and intermediate levels.  Any
// intermediate denominator smaller than the guard throws
// std::runtime_error("intermediate resonance").
double isc_rate_second_order(double lambda, const VibronicModel& model,
                             double delta4, double delta6,
                             const PhononSpectrum& spectrum,
                             double alpha = 1.0);

// Same rate with the intermediate ladder frozen in its ground state,
// evaluated in closed form (squared magnitudes, no coherent sum).  Oracle
// for isc_rate_second_order with max_intermediate = 0.
double isc_rate_second_order_chi0(double lambda, const VibronicModel& model,
                                  double delta4, double delta6,
                                  const PhononSpectrum& spectrum,
                                  double alpha = 1.0);

// ====================== rate sets ======================

// Rates consumed by the dynamics layer, all in 1/ns.  gamma_isc holds base
// intersystem-crossing rates per ordered (initial, final) manifold pair;
// the fixed jump amplitudes are applied downstream.
struct RateSet {
  std::map<std::pair<std::string, std::string>, double> gamma_isc;
  double gamma_E = 0;
  double gamma_A1 = 0;
  double gamma_0 = 0;
  std::map<std::string, std::string> provenance;

  // Entry lookup; missing pair throws std::invalid_argument naming it.
  double isc(const std::string& initial, const std::string& final_) const;
};

struct RatePair {
  std::string initial;
  std::string final_;
  double lambda = 0;  // meV, used in computed mode
  double delta = 0;   // meV, used in computed mode
};

struct RateConfig {
  enum class Mode { Phenomenological, Computed };
  Mode mode = Mode::Phenomenological;
  double gamma0 = 1.0 / 6.1;  // 1/ns
  double isc_ratio = 0.2;     // gamma_ISC / gamma0 in phenomenological mode
  double alpha = 1.0;         // calibration scalar in computed mode
  VibronicModel model;
  std::vector<RatePair> pairs;  // empty selects the default pair list in
                                // phenomenological mode
};

// Pairs filled by default: the quartet-to-doublet crossings and the
// doublet-to-ground returns of both polarization protocols.
const std::vector<std::pair<std::string, std::string>>& default_isc_pairs();

// Builds a complete RateSet.  Phenomenological mode applies isc_ratio *
// gamma0 to every pair; computed mode evaluates the first-order rate per
// pair and requires a nonempty pair list (std::invalid_argument otherwise).
// Negative rates throw std::invalid_argument naming the field.
RateSet derive_rateset(const RateConfig& config);

}  // namespace vsi
