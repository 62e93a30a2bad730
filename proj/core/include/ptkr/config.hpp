#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptkr/phase.hpp"

namespace ptkr {

enum class OutputFormat { Csv, Json };

struct FitOptions {
  double window_fraction = 0.5;
  std::optional<long> window_start;  // explicit window overrides the fraction
  std::optional<long> window_end;
  ClassifierThresholds thresholds;
  double leak_threshold = 1e-8;
};

/// Everything one invocation of `ptkr run` needs.
struct RunConfig {
  SimParams params;
  ObservableSchedule schedule;
  bool recenter = true;
  std::vector<double> lambdas;   // more than one value (or a range key) makes a sweep
  std::vector<double> epsilons;
  bool sweep = false;
  FitOptions fit;
  std::filesystem::path output_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  int workers = 1;
  long seed = 0;  // reserved; the dynamics is deterministic

  std::vector<GridPoint> grid() const;
  AnalysisOptions analysis_options() const;
};

/// Parses flat `key = value` text: `#` starts a comment, lists are comma
/// separated. Each entry of `overrides` is a `key=value` string applied on
/// top of the file. Missing keys take their defaults.
///
/// Throws ParseError (with line number) for malformed lines and
/// ValidationError (naming the key) for unknown keys or bad values.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Names of all recognised configuration keys.
const std::vector<std::string>& config_keys();

}  // namespace ptkr
