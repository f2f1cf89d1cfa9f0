// rankgauge CLI: compute / select / converge / correlate.
//
// JSON reports go to stdout, diagnostics to stderr. Output bytes are
// deterministic for fixed inputs, flags and seed; wall-clock timing is only
// included when asked for (--timing). Exit codes: 0 success, 1 input or
// validation errors, 2 numeric failures, 3 missing rank/alpha values.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankgauge/rankgauge.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitMissing = 3;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

int exit_class(rg_status status) {
  switch (status) {
    case RG_OK:
      return kExitOk;
    case RG_ERR_CONVERGENCE_FAILURE:
    case RG_ERR_INSUFFICIENT_POSITIVE_EIGENVALUES:
    case RG_ERR_DEGENERATE_FIT:
      return kExitNumeric;
    case RG_ERR_MISSING_RANK:
    case RG_ERR_MISSING_ALPHA:
      return kExitMissing;
    default:
      return kExitInput;
  }
}

void check(rg_status status, const std::string& context) {
  if (status == RG_OK) return;
  const char* detail = rg_last_error_message();
  // The library's message already starts with the status name.
  const std::string what =
      (detail && *detail) ? detail : rg_status_name(status);
  throw CliError(exit_class(status), context + ": " + what);
}

template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, std::integral_constant<decltype(Free), Free>>;

using MatrixHandle = Handle<rg_matrix, rg_matrix_free>;
using SpectrumHandle = Handle<rg_spectrum, rg_spectrum_free>;
using EigenHandle = Handle<rg_eigenspectrum, rg_eigenspectrum_free>;
using ManifestHandle = Handle<rg_manifest, rg_manifest_free>;
using SelectionHandle = Handle<rg_selection, rg_selection_free>;

struct ComputeOptions {
  std::string format = "npy";  // npy | csv | raw
  bool csv_header = false;
  std::size_t samples = 25600;
  std::uint64_t seed = 0;
  double epsilon = 1e-7;
  std::optional<double> threshold_epsilon;
  std::string path = "auto";  // auto | direct | gram
  bool with_alpha = false;
  bool centered = true;
};

MatrixHandle load_matrix(const std::string& file, const ComputeOptions& opt) {
  rg_matrix* raw = nullptr;
  if (opt.format == "npy") {
    check(rg_matrix_load_npy(file.c_str(), &raw), "loading " + file);
  } else if (opt.format == "csv") {
    check(rg_matrix_load_csv(file.c_str(), opt.csv_header ? 1 : 0, &raw),
          "loading " + file);
  } else if (opt.format == "raw") {
    check(rg_matrix_load_raw(file.c_str(), &raw), "loading " + file);
  } else {
    throw CliError(kExitInput, "unknown format '" + opt.format + "'");
  }
  return MatrixHandle(raw);
}

std::string guess_format(const std::string& file) {
  const auto ext = std::filesystem::path(file).extension().string();
  if (ext == ".npy") return "npy";
  if (ext == ".csv") return "csv";
  return "raw";
}

rg_path parse_path(const std::string& name) {
  if (name == "direct") return RG_PATH_DIRECT;
  if (name == "gram") return RG_PATH_GRAM;
  if (name == "auto") return RG_PATH_AUTO;
  throw CliError(kExitInput, "unknown spectrum path '" + name + "'");
}

// Structured results of the compute pipeline; reused by `select` for runs
// that only carry embeddings.
struct ComputeResult {
  double rankme = 0.0;
  std::size_t classical_rank = 0;
  std::optional<double> alpha;
  std::optional<double> alpha_r2;
  std::size_t n_used = 0;
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  double threshold_epsilon = 0.0;
  std::string path_used;
};

ComputeResult run_compute(const std::string& file, const ComputeOptions& opt) {
  MatrixHandle matrix = load_matrix(file, opt);

  ComputeResult result;
  result.n_rows = rg_matrix_rows(matrix.get());
  result.n_cols = rg_matrix_cols(matrix.get());

  rg_matrix* sub_raw = nullptr;
  check(rg_matrix_subsample(matrix.get(), opt.samples, opt.seed, &sub_raw),
        "subsampling " + file);
  MatrixHandle sub(sub_raw);
  result.n_used = rg_matrix_rows(sub.get());

  rg_spectrum* spec_raw = nullptr;
  check(rg_spectrum_compute(sub.get(), parse_path(opt.path), &spec_raw),
        "computing spectrum of " + file);
  SpectrumHandle spectrum(spec_raw);
  result.path_used =
      rg_spectrum_path_used(spectrum.get()) == RG_PATH_GRAM ? "gram" : "direct";

  const double threshold =
      opt.threshold_epsilon
          ? *opt.threshold_epsilon
          : rg_default_threshold_epsilon(rg_matrix_dtype(matrix.get()));
  result.threshold_epsilon = threshold;

  if (opt.epsilon * static_cast<double>(rg_spectrum_size(spectrum.get())) >= 1.0) {
    std::cerr << "warning: entropy epsilon " << opt.epsilon
              << " is large for a spectrum of length "
              << rg_spectrum_size(spectrum.get()) << "\n";
  }

  check(rg_rankme(spectrum.get(), opt.epsilon, &result.rankme), "rankme");
  check(rg_classical_rank(spectrum.get(), threshold, &result.classical_rank),
        "classical rank");

  if (opt.with_alpha) {
    rg_eigenspectrum* eig_raw = nullptr;
    check(rg_covariance_eigenvalues(sub.get(), opt.centered ? 1 : 0, &eig_raw),
          "covariance eigenvalues of " + file);
    EigenHandle eigen(eig_raw);
    double alpha = 0.0, r2 = 0.0;
    check(rg_alpha_req_fit(eigen.get(), 0, 0, &alpha, &r2), "alpha fit");
    result.alpha = alpha;
    result.alpha_r2 = r2;
  }
  return result;
}

json report_skeleton(const std::string& command, const std::vector<std::string>& inputs) {
  json report;
  report["command"] = command;
  report["inputs"] = inputs;
  report["outputs"] = json::object();
  report["tool_version"] = rg_version();
  return report;
}

void emit(json& report, bool timing, std::chrono::steady_clock::time_point start) {
  if (timing) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
  }
  std::cout << report.dump(2) << "\n";
}

json selection_to_json(const rg_selection* sel) {
  json out;
  out["chosen_run_id"] = rg_selection_chosen_run_id(sel);
  out["chosen_rank"] = rg_selection_chosen_rank(sel);
  out["trace"] = json::array();
  for (std::size_t i = 0; i < rg_selection_trace_size(sel); ++i) {
    out["trace"].push_back({{"run_id", rg_selection_trace_run_id(sel, i)},
                            {"rank", rg_selection_trace_rank(sel, i)},
                            {"decision", rg_selection_trace_decision(sel, i)}});
  }
  if (rg_selection_unordered_tie(sel)) {
    out["unordered_tie"] = true;
    out["tied_max_run_ids"] = json::array();
    for (std::size_t i = 0; i < rg_selection_tied_count(sel); ++i) {
      out["tied_max_run_ids"].push_back(rg_selection_tied_run_id(sel, i));
    }
  }
  return out;
}

// Embeddings paths inside a manifest resolve relative to the manifest file.
std::string resolve_relative(const std::string& manifest_path, const std::string& entry) {
  std::filesystem::path p(entry);
  if (p.is_absolute()) return entry;
  return (std::filesystem::path(manifest_path).parent_path() / p).string();
}

int cmd_compute(const std::string& file, const ComputeOptions& opt, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const ComputeResult r = run_compute(file, opt);

  json report = report_skeleton("compute", {file});
  json& out = report["outputs"];
  out["rankme"] = r.rankme;
  out["classical_rank"] = r.classical_rank;
  if (r.alpha) {
    out["alpha"] = *r.alpha;
    out["alpha_r2"] = *r.alpha_r2;
  }
  out["n_used"] = r.n_used;
  out["n_rows"] = r.n_rows;
  out["n_cols"] = r.n_cols;
  out["config"] = {{"format", opt.format},
                   {"samples", opt.samples},
                   {"seed", opt.seed},
                   {"entropy_epsilon", opt.epsilon},
                   {"threshold_epsilon", r.threshold_epsilon},
                   {"path", r.path_used},
                   {"centered", opt.centered}};
  emit(report, timing, start);
  return kExitOk;
}

int cmd_select(const std::string& manifest_path, double tie_tolerance,
               const std::string& strategy, const ComputeOptions& opt, bool timing) {
  const auto start = std::chrono::steady_clock::now();

  rg_manifest* man_raw = nullptr;
  check(rg_manifest_load(manifest_path.c_str(), &man_raw), "loading " + manifest_path);
  ManifestHandle manifest(man_raw);
  const std::size_t n_runs = rg_manifest_size(manifest.get());

  SelectionHandle selection;
  if (strategy == "rankme") {
    // Fill in ranks for runs that only ship embeddings.
    for (std::size_t i = 0; i < n_runs; ++i) {
      if (rg_manifest_run_has_rank(manifest.get(), i)) continue;
      const char* path = rg_manifest_run_embeddings_path(manifest.get(), i);
      if (!path) {
        throw CliError(kExitMissing, std::string("run '") +
                                         rg_manifest_run_id(manifest.get(), i) +
                                         "' has neither rank nor embeddings");
      }
      ComputeOptions run_opt = opt;
      const std::string resolved = resolve_relative(manifest_path, path);
      run_opt.format = guess_format(resolved);
      const ComputeResult r = run_compute(resolved, run_opt);
      check(rg_manifest_set_run_rank(manifest.get(), i, r.rankme), "setting rank");
    }
    rg_selection* sel_raw = nullptr;
    check(rg_select_by_rank(manifest.get(), tie_tolerance, &sel_raw), "selection");
    selection = SelectionHandle(sel_raw);
  } else if (strategy == "alpha") {
    std::vector<std::string> ids;
    std::vector<double> alphas;
    for (std::size_t i = 0; i < n_runs; ++i) {
      const char* path = rg_manifest_run_embeddings_path(manifest.get(), i);
      if (!path) {
        throw CliError(kExitMissing, std::string("run '") +
                                         rg_manifest_run_id(manifest.get(), i) +
                                         "' has no embeddings to fit alpha on");
      }
      ComputeOptions run_opt = opt;
      run_opt.with_alpha = true;
      const std::string resolved = resolve_relative(manifest_path, path);
      run_opt.format = guess_format(resolved);
      const ComputeResult r = run_compute(resolved, run_opt);
      ids.push_back(rg_manifest_run_id(manifest.get(), i));
      alphas.push_back(*r.alpha);
    }
    std::vector<const char*> id_ptrs;
    for (const auto& id : ids) id_ptrs.push_back(id.c_str());
    rg_selection* sel_raw = nullptr;
    check(rg_select_by_alpha(manifest.get(), id_ptrs.data(), alphas.data(),
                             id_ptrs.size(), &sel_raw),
          "selection");
    selection = SelectionHandle(sel_raw);
  } else {
    throw CliError(kExitInput, "unknown strategy '" + strategy + "'");
  }

  json report = report_skeleton("select", {manifest_path});
  report["outputs"] = selection_to_json(selection.get());
  report["outputs"]["strategy"] = strategy;
  emit(report, timing, start);
  return kExitOk;
}

int cmd_converge(const std::string& file, const std::string& sizes_arg,
                 const ComputeOptions& opt, const std::string& out_path, bool timing) {
  const auto start = std::chrono::steady_clock::now();

  std::vector<std::size_t> sizes;
  std::stringstream ss(sizes_arg);
  std::string token;
  while (std::getline(ss, token, ',')) {
    try {
      sizes.push_back(std::stoull(token));
    } catch (const std::exception&) {
      throw CliError(kExitInput, "bad size '" + token + "'");
    }
  }
  if (sizes.empty()) throw CliError(kExitInput, "empty size list");

  MatrixHandle matrix = load_matrix(file, opt);
  std::vector<double> values(sizes.size(), 0.0);
  double full = 0.0;
  check(rg_convergence_curve(matrix.get(), sizes.data(), sizes.size(), opt.seed,
                             opt.epsilon, values.data(), &full),
        "convergence curve");

  std::ostringstream csv;
  csv << "size,rankme\n";
  csv.precision(17);
  for (std::size_t i = 0; i < sizes.size(); ++i) csv << sizes[i] << "," << values[i] << "\n";
  if (sizes.back() != rg_matrix_rows(matrix.get())) {
    csv << rg_matrix_rows(matrix.get()) << "," << full << "\n";
  }

  if (out_path == "-") {
    std::cout << csv.str();
    return kExitOk;
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw CliError(kExitInput, "cannot write " + out_path);
    out << csv.str();
  }

  json report = report_skeleton("converge", {file});
  json& out = report["outputs"];
  out["sample_sizes"] = sizes;
  out["rankme_values"] = values;
  out["full_value"] = full;
  out["n_rows"] = rg_matrix_rows(matrix.get());
  out["seed"] = opt.seed;
  emit(report, timing, start);
  return kExitOk;
}

int cmd_correlate(const std::string& pairs_csv, bool timing) {
  const auto start = std::chrono::steady_clock::now();

  std::ifstream in(pairs_csv);
  if (!in) throw CliError(kExitInput, "cannot open " + pairs_csv);

  std::string line;
  if (!std::getline(in, line)) throw CliError(kExitInput, "empty file " + pairs_csv);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "label,x,y") {
    throw CliError(kExitInput, "expected header 'label,x,y', got '" + line + "'");
  }

  std::vector<std::string> labels;
  std::vector<double> xs, ys;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw CliError(kExitInput, "row " + std::to_string(row) + " needs label,x,y");
    }
    labels.push_back(line.substr(0, c1));
    try {
      xs.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
      ys.push_back(std::stod(line.substr(c2 + 1)));
    } catch (const std::exception&) {
      throw CliError(kExitInput, "bad number in row " + std::to_string(row));
    }
  }

  double r = 0.0;
  check(rg_pearson(xs.data(), ys.data(), xs.size(), &r), "pearson");

  json report = report_skeleton("correlate", {pairs_csv});
  json& out = report["outputs"];
  out["pearson_r"] = r;
  out["n_pairs"] = xs.size();
  out["pairs"] = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out["pairs"].push_back({{"label", labels[i]}, {"x", xs[i]}, {"y", ys[i]}});
  }
  emit(report, timing, start);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("RANKGAUGE_THREADS")) {
    rg_set_max_threads(std::atoi(threads));
  }

  CLI::App app{"effective-rank metrics and label-free model selection for embedding matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rg_version());

  bool timing = false;
  app.add_flag("--timing", timing, "include wall-clock timing in the report");

  ComputeOptions opt;

  auto* compute = app.add_subcommand("compute", "rank metrics of one embedding matrix");
  std::string compute_file;
  compute->add_option("file", compute_file, "embedding matrix file")->required();
  compute->add_option("--format", opt.format, "npy | csv | raw")
      ->check(CLI::IsMember({"npy", "csv", "raw"}));
  compute->add_flag("--csv-header", opt.csv_header, "first CSV row is a header");
  compute->add_option("--samples", opt.samples, "rows used for the estimate");
  compute->add_option("--seed", opt.seed, "subsampling seed");
  compute->add_option("--epsilon", opt.epsilon, "entropy epsilon")
      ->check(CLI::NonNegativeNumber);
  compute->add_option(
      "--threshold-epsilon",
      [&opt](const std::vector<std::string>& v) {
        try {
          opt.threshold_epsilon = std::stod(v[0]);
        } catch (const std::exception&) {
          return false;
        }
        return *opt.threshold_epsilon > 0.0;
      },
      "override the dtype-derived threshold epsilon");
  compute->add_option("--path", opt.path, "spectrum path: auto | direct | gram")
      ->check(CLI::IsMember({"auto", "direct", "gram"}));
  compute->add_flag("--alpha", opt.with_alpha, "also fit the eigenspectrum decay exponent");
  compute->add_flag("--centered,!--no-centered", opt.centered,
                    "center the covariance for the alpha fit (default on)");

  auto* select = app.add_subcommand("select", "pick the best run of a sweep manifest");
  std::string manifest_path, strategy = "rankme";
  double tie_tolerance = 0.0;
  select->add_option("manifest", manifest_path, "run manifest JSON")->required();
  select->add_option("--tie-tol", tie_tolerance, "relative rank tie tolerance")
      ->check(CLI::NonNegativeNumber);
  select->add_option("--strategy", strategy, "rankme | alpha")
      ->check(CLI::IsMember({"rankme", "alpha"}));
  select->add_option("--samples", opt.samples, "rows used when computing ranks");
  select->add_option("--seed", opt.seed, "subsampling seed");
  select->add_option("--epsilon", opt.epsilon, "entropy epsilon")
      ->check(CLI::NonNegativeNumber);

  auto* converge = app.add_subcommand("converge", "rank estimate vs subsample size");
  std::string converge_file, sizes_arg, converge_out;
  converge->add_option("file", converge_file, "embedding matrix file")->required();
  converge->add_option("--sizes", sizes_arg, "comma-separated sample sizes")->required();
  converge->add_option("--seed", opt.seed, "subsampling seed");
  converge->add_option("--format", opt.format, "npy | csv | raw")
      ->check(CLI::IsMember({"npy", "csv", "raw"}));
  converge->add_option("--out", converge_out, "write CSV here ('-' for stdout)");

  auto* correlate = app.add_subcommand("correlate", "Pearson correlation of labelled pairs");
  std::string pairs_csv;
  correlate->add_option("pairs_csv", pairs_csv, "CSV with header label,x,y")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitInput;
  }

  try {
    if (compute->parsed()) return cmd_compute(compute_file, opt, timing);
    if (select->parsed())
      return cmd_select(manifest_path, tie_tolerance, strategy, opt, timing);
    if (converge->parsed())
      return cmd_converge(converge_file, sizes_arg, opt, converge_out, timing);
    if (correlate->parsed()) return cmd_correlate(pairs_csv, timing);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
