#include "core/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include <json.hpp>

namespace rankgauge {
namespace {

RunRecord parse_run(const nlohmann::json& j, std::size_t index) {
  if (!j.is_object()) {
    fail(ErrorCode::SchemaError, "run " + std::to_string(index) + " is not an object");
  }
  if (!j.contains("run_id") || !j["run_id"].is_string()) {
    fail(ErrorCode::SchemaError, "run " + std::to_string(index) + " needs a string run_id");
  }
  if (!j.contains("hp_value")) {
    fail(ErrorCode::SchemaError, "run " + std::to_string(index) + " needs hp_value");
  }

  RunRecord r;
  r.run_id = j["run_id"].get<std::string>();
  const auto& hv = j["hp_value"];
  if (hv.is_number()) {
    r.hp_value = hv.get<double>();
  } else if (hv.is_string()) {
    r.hp_value = hv.get<std::string>();
  } else {
    fail(ErrorCode::SchemaError, "hp_value of run '" + r.run_id + "' must be number or string");
  }

  if (j.contains("rank") && !j["rank"].is_null()) {
    if (!j["rank"].is_number()) {
      fail(ErrorCode::SchemaError, "rank of run '" + r.run_id + "' must be a number");
    }
    r.rank = j["rank"].get<double>();
    if (*r.rank < 0.0) {
      fail(ErrorCode::SchemaError, "rank of run '" + r.run_id + "' must be nonnegative");
    }
  }
  if (j.contains("embeddings_path") && !j["embeddings_path"].is_null()) {
    if (!j["embeddings_path"].is_string()) {
      fail(ErrorCode::SchemaError,
           "embeddings_path of run '" + r.run_id + "' must be a string");
    }
    r.embeddings_path = j["embeddings_path"].get<std::string>();
  }
  if (j.contains("clip_cap") && !j["clip_cap"].is_null()) {
    if (!j["clip_cap"].is_number()) {
      fail(ErrorCode::SchemaError, "clip_cap of run '" + r.run_id + "' must be a number");
    }
    r.clip_cap = j["clip_cap"].get<double>();
    if (*r.clip_cap <= 0.0) {
      fail(ErrorCode::SchemaError, "clip_cap of run '" + r.run_id + "' must be positive");
    }
  }
  return r;
}

}  // namespace

void validate_manifest(const RunManifest& m) {
  if (m.runs.empty()) fail(ErrorCode::EmptyManifest, "manifest has no runs");

  std::unordered_set<std::string> seen;
  for (const auto& r : m.runs) {
    if (!seen.insert(r.run_id).second) {
      fail(ErrorCode::DuplicateRunId, "run_id '" + r.run_id + "' appears more than once");
    }
    if (!r.rank && !r.embeddings_path) {
      fail(ErrorCode::SchemaError,
           "run '" + r.run_id + "' needs a rank or an embeddings_path");
    }
  }

  if (m.ordered && m.runs.size() >= 2) {
    std::vector<double> values;
    values.reserve(m.runs.size());
    for (const auto& r : m.runs) {
      if (!std::holds_alternative<double>(r.hp_value)) {
        fail(ErrorCode::SchemaError,
             "ordered manifest requires numeric hp_value, run '" + r.run_id + "' has text");
      }
      values.push_back(std::get<double>(r.hp_value));
    }
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] <= values[i - 1]) increasing = false;
      if (values[i] >= values[i - 1]) decreasing = false;
    }
    if (!increasing && !decreasing) {
      fail(ErrorCode::UnorderedValues,
           "ordered manifest but hp_values are not strictly monotone");
    }
  }
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::SchemaError, "bad manifest JSON in " + path + ": " + e.what());
  }

  if (!doc.is_object()) fail(ErrorCode::SchemaError, "manifest root must be an object");
  if (!doc.contains("axis_name") || !doc["axis_name"].is_string()) {
    fail(ErrorCode::SchemaError, "manifest needs a string axis_name");
  }
  if (!doc.contains("ordered") || !doc["ordered"].is_boolean()) {
    fail(ErrorCode::SchemaError, "manifest needs a boolean ordered flag");
  }
  if (!doc.contains("runs") || !doc["runs"].is_array()) {
    fail(ErrorCode::SchemaError, "manifest needs a runs array");
  }

  RunManifest m;
  m.axis_name = doc["axis_name"].get<std::string>();
  m.ordered = doc["ordered"].get<bool>();
  std::size_t index = 0;
  for (const auto& run : doc["runs"]) {
    m.runs.push_back(parse_run(run, index++));
  }
  validate_manifest(m);
  return m;
}

}  // namespace rankgauge
