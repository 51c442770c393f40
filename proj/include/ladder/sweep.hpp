#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ladder/eigensolver.hpp"
#include "ladder/geometry.hpp"

namespace ladder {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named site subset. The raw spec is either a comma-separated list of
// site indices or one of the keywords central_rung, diag_pair,
// diag_pair_left, resolved against the ladder size.
struct SubsystemSpec {
  std::string name;
  std::vector<int> sites;
};

std::vector<int> resolve_subsystem_sites(const std::string& spec, int n_rungs);

struct SweepConfig {
  int n_rungs = 8;
  double j_leg = 1.0;
  double delta = -0.5;
  double j_rung_min = -1.0;
  double j_rung_max = 1.0;
  double j_rung_step = 0.01;
  double fid_delta = 0.001;
  int sz_twice = 0;
  // name=spec pairs; empty means central_rung plus diag_pair (the latter
  // only when the ladder is long enough to hold it)
  std::vector<std::pair<std::string, std::string>> subsystems;
  int workers = 0;  // 0: hardware concurrency
  SolverOptions solver;
};

struct SweepRow {
  double j_rung = 0.0;
  double energy = 0.0;
  double gap = 0.0;
  double fidelity = 0.0;
  double susceptibility = 0.0;
  std::vector<double> entropies;          // one per subsystem
  std::vector<double> entropy_derivatives;  // filled by the post-pass
  bool degenerate = false;
};

struct SweepSeries {
  std::vector<std::string> subsystem_names;
  std::vector<SweepRow> rows;  // sorted by j_rung ascending

  const SweepRow& row(size_t i) const { return rows[i]; }
  int column_of(const std::string& subsystem_name) const;
};

// One row per grid point; the fidelity at grid point L pairs the ground
// states at L and L+fid_delta. Grid points are solved in fixed-size chunks
// with warm starts chained inside each chunk, so the series is identical
// for any worker count.
SweepSeries run_sweep(const SweepConfig& config);

enum class FeatureKind {
  SusceptibilityPeak,
  FidelityValley,
  EntropyPeak,
  EntropyValley,
  EntropyDerivativePeak,
};

const char* to_string(FeatureKind kind);

struct CriticalFeature {
  FeatureKind kind;
  std::string subsystem;  // empty when the feature has no subsystem
  double j_rung;
  double value;
};

using CriticalReport = std::vector<CriticalFeature>;

// Strict interior local extrema of the series columns; plateaus report
// their smallest j_rung, endpoints are excluded.
CriticalReport detect_critical_points(const SweepSeries& series);

std::string format_report(const CriticalReport& report);

void write_csv(const SweepSeries& series, const std::string& path);
SweepSeries read_csv(const std::string& path);

}  // namespace ladder
