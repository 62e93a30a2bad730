#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptkr/observables.hpp"
#include "ptkr/params.hpp"

namespace ptkr {

/// Observables of rotor 1 after kick t (post free flight, post renormalization).
struct ObservableRecord {
  long kick_index = 0;
  double p1_mean = 0.0;
  double p1_sq_mean = 0.0;
  double variance = 0.0;      // <p1^2> - <p1>^2
  double norm_total = 1.0;    // exp(log_norm)
  double log_norm = 0.0;
  double norm_factor = 1.0;   // norm consumed by this kick's renormalization
  std::optional<double> linear_entropy;
  double edge_probability = 0.0;
  bool leak_flag = false;
};

struct MarginalSnapshot {
  long kick_index = 0;
  MomentumDistribution distribution;
};

struct TrajectoryRecord {
  SimParams params;
  std::vector<ObservableRecord> records;  // one per kick, t = 0..n_kicks
  std::vector<MarginalSnapshot> marginals;
  double leak_threshold = 1e-8;
  bool truncation_leak = false;
  long first_leak_kick = -1;
  double max_edge_probability = 0.0;
  int window_shifts = 0;

  long final_kick() const { return records.empty() ? 0 : records.back().kick_index; }
};

}  // namespace ptkr
