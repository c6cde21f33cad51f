#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "vsi/dynamics.hpp"
#include "vsi/vibronic.hpp"

namespace vsi {

// Scenario description backing the command line front end.  Deserialized
// from a JSON file; every key is optional except `channel` (which may also
// arrive from the command line).  Unknown keys are rejected.  The schema is
// documented in docs/config.md.
struct ScenarioConfig {
  std::string channel;  // "q1d4", "q1d1", "q2"
  double omega = 1.0 / 6.1;  // 1/ns
  double t_end = 3000.0;     // ns
  double sample_dt = 5.0;    // ns
  bool adaptive = false;
  double c1 = 1.0, c2 = 1.0;  // channel q2 branching weights
  // Optional list of (c1, c2) pairs; expands into one scenario per pair.
  std::vector<std::array<double, 2>> ratio_sweep;
  bool include_d1 = false;  // channel q2 relay
  double d4_to_d1 = 0.0;    // 1/ns
  double d1_to_g = 0.0;     // 1/ns
  std::string site = "h";   // "h" or "k", metadata only
  bool svg = false;
  RateConfig rates;  // gamma0 defaults to omega unless the file sets it
  std::string origin;  // file path or "<defaults>", for error context
};

// Parses and validates; unknown keys and negative rates are rejected with
// the offending field named.  `origin` tags error messages.
ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& origin);
ScenarioConfig load_config(const std::string& path);

// One scenario per ratio_sweep entry (the base config when the list is
// empty).  Sweep instances get distinguishing labels.
struct ScenarioInstance {
  ScenarioConfig config;
  std::string label;  // file stem: channel plus optional ratio suffix
};
std::vector<ScenarioInstance> expand_sweep(const ScenarioConfig& cfg);

LindbladModel build_model(const ScenarioConfig& cfg);

// Ordered key-value report; renders as one "key = value" line each.
struct RunReport {
  std::vector<std::pair<std::string, std::string>> fields;
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  std::string text() const;
};

struct RunResult {
  LindbladModel model;
  Trajectory trajectory;
  Matrix steady;
  GroundPopulations post_pump;
  RunReport report;
};

// Full pipeline: build, evolve from the equal ground mixture, steady state,
// pump-off relaxation, report assembly.
RunResult run_scenario(const ScenarioConfig& cfg);

// Deterministic renderings (fixed "%.12g" / "%.6g" formatting).
std::string trajectory_csv(const LindbladModel& model, const Trajectory& tr);
std::string trajectory_svg(const LindbladModel& model, const Trajectory& tr);

// Writes via a temp file in the target directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace vsi
