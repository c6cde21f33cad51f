#pragma once

#include <string>
#include <vector>

#include "vsi/catalog.hpp"
#include "vsi/vibronic.hpp"

namespace vsi {

// ====================== level schemes ======================

// Finite-level schemes for the optical spin-polarization protocols.  Kramers
// pairs are merged, so a level is a manifold plus an |Sz| sector; the _12
// and _32 suffixes name the 1/2 and 3/2 sectors.
struct LevelScheme {
  enum class Channel { Q1ViaD4, Q1ViaD1, Q2 };
  Channel channel = Channel::Q1ViaD4;
  std::vector<std::string> levels;

  int size() const { return static_cast<int>(levels.size()); }
  // Unknown level names throw std::invalid_argument.
  int index(const std::string& name) const;
};

// One jump operator amplitude * |to><from|; the amplitude carries the
// square root of the rate together with its fixed numeric coefficient.
struct Jump {
  int from = 0;
  int to = 0;
  double amplitude = 0;  // sqrt(1/ns)
  std::string label;
};

struct LindbladModel {
  LevelScheme scheme;
  double omega = 0;    // Rabi frequency, 1/ns
  Matrix hamiltonian;  // rotating frame, resonant drive
  std::vector<Jump> jumps;

  // 0 when no jump connects the ordered pair.
  double jump_amplitude(const std::string& from, const std::string& to) const;
};

enum class Channel1Variant { ViaD4, ViaD1 };

// Seven levels {g_12, g_32, q1_12, q1_32, d6, d9, d4-or-d1}.  The drive
// couples g and q1 spin-conservingly at Rabi frequency omega.  Crossings:
// q1_32 -> d6 and q1_12 -> d9 only; the hub returns to the ground manifold
// through g_12 alone (d4 variant) or with a 3:1 rate split favoring g_32
// (d1 variant).  Negative rates or omega throw std::invalid_argument.
LindbladModel build_channel1_model(Channel1Variant variant,
                                   const RateSet& rates, double omega);

struct Channel2Options {
  bool include_d1 = false;  // adds a d1 relay below d4
  double d4_to_d1 = 0;      // 1/ns
  double d1_to_g = 0;       // 1/ns base; branched 3:1 toward g_32
};

// Levels {g_12, g_32, q2_12, q2_32, d2, d3, d4} plus an optional d1 relay.
// Both q2 sectors cross to d2 and d3 with weight c1 and to d4 with weight
// c2; d2 and d3 return with amplitudes 2 toward g_32 and 2/sqrt(3) toward
// g_12, while d4 returns to g_12 only.  Negative weights throw
// std::invalid_argument.
LindbladModel build_channel2_model(double c1, double c2, const RateSet& rates,
                                   double omega,
                                   const Channel2Options& opts = {});

// ====================== evolution ======================

struct Trajectory {
  std::vector<double> times;                      // ns
  std::vector<std::vector<double>> populations;   // [sample][level]
  std::vector<double> polarization;
};

struct EvolveOptions {
  double sample_dt = 1.0;  // ns between recorded samples
  bool adaptive = false;   // step-doubling error control instead of the
                           // fixed step 0.01 / max(omega, jump rates)
  double rel_tol = 1e-10;  // adaptive local error target
};

// Right-hand side of the master equation at rho.
Matrix apply_lindbladian(const LindbladModel& model, const Matrix& rho);

// Equal incoherent g_12 / g_32 mixture.
Matrix equal_ground_mixture(const LindbladModel& model);

// Throws std::invalid_argument when rho is not a density matrix within the
// working tolerances (trace 1e-9, Hermiticity 1e-10, eigenvalues >= -1e-9).
void validate_density(const Matrix& rho);

// Integrates the master equation, recording populations and ground-sector
// polarization at every sample.  Trace is checked at every internal step
// and Hermiticity and positivity at every sample; a breach throws
// std::runtime_error carrying the first violating time.
Trajectory evolve(const LindbladModel& model, const Matrix& rho0,
                  double t_end, const EvolveOptions& opts = {});

// Stationary state from the null space of the vectorized generator,
// normalized to unit trace; the residual must come out below 1e-10.
// A degenerate stationary subspace throws std::runtime_error naming its
// dimension.
Matrix steady_state(const LindbladModel& model);

struct GroundPopulations {
  double g12 = 0;
  double g32 = 0;
};

struct RelaxOptions {
  double horizon = 1e6;    // ns; exceeding it throws std::runtime_error
  double threshold = 1e-8; // remaining excited population
};

// Evolves with the drive removed until the excited population falls below
// the threshold, then reports the ground-sector populations.
GroundPopulations pump_off_relax(const LindbladModel& model, const Matrix& rho,
                                 const RelaxOptions& opts = {});

// (g12 - g32) / (g12 + g32); +1 means fully |Sz| = 1/2.  Negative inputs or
// an empty ground manifold throw std::invalid_argument.
double polarization(double g12, double g32);

}  // namespace vsi
