#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "core/error.hpp"

namespace rankgauge {

// One training run of a hyperparameter sweep. Either a precomputed rank or a
// path to the run's embeddings must be present.
struct RunRecord {
  std::string run_id;
  std::variant<double, std::string> hp_value;
  std::optional<double> rank;
  std::optional<std::string> embeddings_path;
  std::optional<double> clip_cap;
};

// An ordered sweep over one hyperparameter axis. When `ordered` is set the
// hyperparameter values are numeric and strictly monotone in list order.
struct RunManifest {
  std::string axis_name;
  bool ordered = false;
  std::vector<RunRecord> runs;
};

// Parses and validates a manifest JSON document:
//   {"axis_name": str, "ordered": bool, "runs": [{"run_id": str,
//    "hp_value": number|str, "rank": number?, "embeddings_path": str?,
//    "clip_cap": number?}]}
// Run order is preserved exactly.
RunManifest load_manifest(const std::string& path);

// Validation shared with in-memory construction (tests build manifests
// directly).
void validate_manifest(const RunManifest& m);

}  // namespace rankgauge
