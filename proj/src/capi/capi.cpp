#include "rankgauge/rankgauge.h"

#include <Eigen/Core>
#include <cstring>
#include <map>
#include <memory>
#include <new>
#include <string>

#include "core/analysis.hpp"
#include "core/ingest.hpp"
#include "core/manifest.hpp"
#include "core/metrics.hpp"
#include "core/selection.hpp"
#include "core/spectrum.hpp"

using rankgauge::ErrorCode;

struct rg_matrix {
  rankgauge::EmbeddingMatrix m;
};
struct rg_spectrum {
  rankgauge::SingularSpectrum s;
};
struct rg_eigenspectrum {
  rankgauge::EigenSpectrum e;
};
struct rg_manifest {
  rankgauge::RunManifest m;
};
struct rg_selection {
  rankgauge::SelectionResult r;
};

namespace {

thread_local std::string g_last_error;

rg_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return RG_ERR_IO;
    case ErrorCode::MagicMismatch: return RG_ERR_MAGIC_MISMATCH;
    case ErrorCode::UnsupportedVersion: return RG_ERR_UNSUPPORTED_VERSION;
    case ErrorCode::UnsupportedDtype: return RG_ERR_UNSUPPORTED_DTYPE;
    case ErrorCode::UnsupportedOrder: return RG_ERR_UNSUPPORTED_ORDER;
    case ErrorCode::ShapeError: return RG_ERR_SHAPE;
    case ErrorCode::NonFiniteData: return RG_ERR_NON_FINITE_DATA;
    case ErrorCode::RaggedRows: return RG_ERR_RAGGED_ROWS;
    case ErrorCode::ParseError: return RG_ERR_PARSE;
    case ErrorCode::SchemaError: return RG_ERR_SCHEMA;
    case ErrorCode::DuplicateRunId: return RG_ERR_DUPLICATE_RUN_ID;
    case ErrorCode::UnorderedValues: return RG_ERR_UNORDERED_VALUES;
    case ErrorCode::EmptyManifest: return RG_ERR_EMPTY_MANIFEST;
    case ErrorCode::ConvergenceFailure: return RG_ERR_CONVERGENCE_FAILURE;
    case ErrorCode::InsufficientPositiveEigenvalues:
      return RG_ERR_INSUFFICIENT_POSITIVE_EIGENVALUES;
    case ErrorCode::DegenerateFit: return RG_ERR_DEGENERATE_FIT;
    case ErrorCode::MissingRank: return RG_ERR_MISSING_RANK;
    case ErrorCode::MissingAlpha: return RG_ERR_MISSING_ALPHA;
    case ErrorCode::ZeroVariance: return RG_ERR_ZERO_VARIANCE;
    case ErrorCode::LengthMismatch: return RG_ERR_LENGTH_MISMATCH;
    case ErrorCode::LabelMismatch: return RG_ERR_LABEL_MISMATCH;
    case ErrorCode::InvalidArgument: return RG_ERR_INVALID_ARGUMENT;
  }
  return RG_ERR_UNKNOWN;
}

// Runs fn, converting exceptions into status codes and capturing the message.
template <typename Fn>
rg_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RG_OK;
  } catch (const rankgauge::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RG_ERR_OUT_OF_MEMORY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RG_ERR_UNKNOWN;
  }
}

rg_status invalid(const char* message) {
  g_last_error = message;
  return RG_ERR_INVALID_ARGUMENT;
}

rankgauge::SpectrumPath to_core_path(rg_path p) {
  switch (p) {
    case RG_PATH_DIRECT: return rankgauge::SpectrumPath::Direct;
    case RG_PATH_GRAM: return rankgauge::SpectrumPath::Gram;
    default: return rankgauge::SpectrumPath::Auto;
  }
}

}  // namespace

extern "C" {

const char* rg_version(void) { return "0.1.0"; }

const char* rg_status_name(rg_status status) {
  switch (status) {
    case RG_OK: return "ok";
    case RG_ERR_IO: return "IoError";
    case RG_ERR_MAGIC_MISMATCH: return "MagicMismatch";
    case RG_ERR_UNSUPPORTED_VERSION: return "UnsupportedVersion";
    case RG_ERR_UNSUPPORTED_DTYPE: return "UnsupportedDtype";
    case RG_ERR_UNSUPPORTED_ORDER: return "UnsupportedOrder";
    case RG_ERR_SHAPE: return "ShapeError";
    case RG_ERR_NON_FINITE_DATA: return "NonFiniteData";
    case RG_ERR_RAGGED_ROWS: return "RaggedRows";
    case RG_ERR_PARSE: return "ParseError";
    case RG_ERR_SCHEMA: return "SchemaError";
    case RG_ERR_DUPLICATE_RUN_ID: return "DuplicateRunId";
    case RG_ERR_UNORDERED_VALUES: return "UnorderedValues";
    case RG_ERR_EMPTY_MANIFEST: return "EmptyManifest";
    case RG_ERR_CONVERGENCE_FAILURE: return "ConvergenceFailure";
    case RG_ERR_INSUFFICIENT_POSITIVE_EIGENVALUES:
      return "InsufficientPositiveEigenvalues";
    case RG_ERR_DEGENERATE_FIT: return "DegenerateFit";
    case RG_ERR_MISSING_RANK: return "MissingRank";
    case RG_ERR_MISSING_ALPHA: return "MissingAlpha";
    case RG_ERR_ZERO_VARIANCE: return "ZeroVariance";
    case RG_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case RG_ERR_LABEL_MISMATCH: return "LabelMismatch";
    case RG_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case RG_ERR_OUT_OF_MEMORY: return "OutOfMemory";
    case RG_ERR_UNKNOWN: return "UnknownError";
  }
  return "?";
}

const char* rg_last_error_message(void) { return g_last_error.c_str(); }

void rg_set_max_threads(int n) {
  // Effective when Eigen runs with OpenMP; a fixed bound either way.
  Eigen::setNbThreads(n > 0 ? n : 0);
}

/* ---- matrices ----------------------------------------------------------- */

rg_status rg_matrix_from_data(const double* data, size_t n_rows, size_t n_cols,
                              rg_matrix** out) {
  if (!data || !out) return invalid("null argument");
  return guarded([&] {
    auto handle = std::make_unique<rg_matrix>();
    handle->m.dtype = rankgauge::Dtype::F64;
    handle->m.data.resize(static_cast<Eigen::Index>(n_rows),
                          static_cast<Eigen::Index>(n_cols));
    for (size_t i = 0; i < n_rows; ++i)
      for (size_t j = 0; j < n_cols; ++j)
        handle->m.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            data[i * n_cols + j];
    rankgauge::validate_matrix(handle->m);
    *out = handle.release();
  });
}

rg_status rg_matrix_load_npy(const char* path, rg_matrix** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new rg_matrix{rankgauge::load_npy(path)}; });
}

rg_status rg_matrix_load_csv(const char* path, int has_header, rg_matrix** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new rg_matrix{rankgauge::load_csv(path, has_header != 0)}; });
}

rg_status rg_matrix_load_raw(const char* path, rg_matrix** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new rg_matrix{rankgauge::load_raw(path)}; });
}

rg_status rg_matrix_write_npy(const rg_matrix* m, const char* path, rg_dtype dtype) {
  if (!m || !path) return invalid("null argument");
  return guarded([&] {
    rankgauge::write_npy(m->m, path,
                         dtype == RG_DTYPE_F32 ? rankgauge::Dtype::F32
                                                : rankgauge::Dtype::F64);
  });
}

size_t rg_matrix_rows(const rg_matrix* m) {
  return m ? static_cast<size_t>(m->m.rows()) : 0;
}

size_t rg_matrix_cols(const rg_matrix* m) {
  return m ? static_cast<size_t>(m->m.cols()) : 0;
}

rg_dtype rg_matrix_dtype(const rg_matrix* m) {
  return (m && m->m.dtype == rankgauge::Dtype::F32) ? RG_DTYPE_F32 : RG_DTYPE_F64;
}

rg_status rg_matrix_get(const rg_matrix* m, size_t row, size_t col, double* out) {
  if (!m || !out) return invalid("null argument");
  if (row >= static_cast<size_t>(m->m.rows()) || col >= static_cast<size_t>(m->m.cols())) {
    return invalid("index out of range");
  }
  *out = m->m.data(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  return RG_OK;
}

rg_status rg_matrix_subsample(const rg_matrix* m, size_t n, uint64_t seed,
                              rg_matrix** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] { *out = new rg_matrix{rankgauge::subsample_rows(m->m, n, seed)}; });
}

void rg_matrix_free(rg_matrix* m) { delete m; }

/* ---- spectra ------------------------------------------------------------ */

rg_status rg_spectrum_compute(const rg_matrix* m, rg_path path, rg_spectrum** out) {
  if (!m || !out) return invalid("null argument");
  return guarded(
      [&] { *out = new rg_spectrum{rankgauge::singular_values(m->m, to_core_path(path))}; });
}

rg_status rg_spectrum_from_values(const double* values, size_t n, size_t n_rows,
                                  size_t n_cols, rg_spectrum** out) {
  if (!values || !out) return invalid("null argument");
  return guarded([&] {
    rankgauge::SingularSpectrum s;
    s.n_rows = n_rows;
    s.n_cols = n_cols;
    s.path = rankgauge::SpectrumPath::Direct;
    s.values.assign(values, values + n);
    for (size_t i = 0; i < n; ++i) {
      if (s.values[i] < 0.0) {
        rankgauge::fail(ErrorCode::InvalidArgument, "singular values must be nonnegative");
      }
      if (i > 0 && s.values[i] > s.values[i - 1]) {
        rankgauge::fail(ErrorCode::InvalidArgument,
                        "singular values must be sorted descending");
      }
    }
    *out = new rg_spectrum{std::move(s)};
  });
}

size_t rg_spectrum_size(const rg_spectrum* s) { return s ? s->s.size() : 0; }

rg_status rg_spectrum_values(const rg_spectrum* s, double* buffer, size_t buffer_len) {
  if (!s || !buffer) return invalid("null argument");
  if (buffer_len < s->s.size()) return invalid("buffer too small");
  std::memcpy(buffer, s->s.values.data(), s->s.size() * sizeof(double));
  return RG_OK;
}

rg_path rg_spectrum_path_used(const rg_spectrum* s) {
  if (!s) return RG_PATH_AUTO;
  return s->s.path == rankgauge::SpectrumPath::Gram ? RG_PATH_GRAM : RG_PATH_DIRECT;
}

void rg_spectrum_free(rg_spectrum* s) { delete s; }

rg_status rg_covariance_eigenvalues(const rg_matrix* m, int centered,
                                    rg_eigenspectrum** out) {
  if (!m || !out) return invalid("null argument");
  return guarded([&] {
    *out = new rg_eigenspectrum{rankgauge::covariance_eigenvalues(m->m, centered != 0)};
  });
}

size_t rg_eigenspectrum_size(const rg_eigenspectrum* e) { return e ? e->e.size() : 0; }

rg_status rg_eigenspectrum_values(const rg_eigenspectrum* e, double* buffer,
                                  size_t buffer_len) {
  if (!e || !buffer) return invalid("null argument");
  if (buffer_len < e->e.size()) return invalid("buffer too small");
  std::memcpy(buffer, e->e.values.data(), e->e.size() * sizeof(double));
  return RG_OK;
}

void rg_eigenspectrum_free(rg_eigenspectrum* e) { delete e; }

/* ---- metrics ------------------------------------------------------------ */

rg_status rg_rankme(const rg_spectrum* s, double entropy_epsilon, double* out) {
  if (!s || !out) return invalid("null argument");
  if (entropy_epsilon < 0.0) return invalid("entropy epsilon must be >= 0");
  return guarded([&] {
    rankgauge::MetricConfig cfg;
    cfg.entropy_epsilon = entropy_epsilon;
    *out = rankgauge::rankme(s->s, cfg);
  });
}

rg_status rg_classical_rank(const rg_spectrum* s, double threshold_epsilon,
                            size_t* out) {
  if (!s || !out) return invalid("null argument");
  if (threshold_epsilon <= 0.0) return invalid("threshold epsilon must be > 0");
  return guarded([&] {
    rankgauge::MetricConfig cfg;
    cfg.threshold_epsilon = threshold_epsilon;
    *out = rankgauge::classical_rank(s->s, cfg);
  });
}

double rg_default_threshold_epsilon(rg_dtype dtype) {
  return rankgauge::MetricConfig::for_dtype(dtype == RG_DTYPE_F32
                                                ? rankgauge::Dtype::F32
                                                : rankgauge::Dtype::F64)
      .threshold_epsilon;
}

rg_status rg_alpha_req_fit(const rg_eigenspectrum* e, size_t fit_start,
                           size_t fit_end, double* alpha, double* r_squared) {
  if (!e || !alpha) return invalid("null argument");
  return guarded([&] {
    rankgauge::MetricConfig cfg;
    if (fit_start > 0 && fit_end > 0) cfg.fit_range = {fit_start, fit_end};
    const rankgauge::AlphaFit fit = rankgauge::alpha_req_fit(e->e, cfg);
    *alpha = fit.alpha;
    if (r_squared) *r_squared = fit.r_squared;
  });
}

/* ---- manifests and selection -------------------------------------------- */

rg_status rg_manifest_load(const char* path, rg_manifest** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] { *out = new rg_manifest{rankgauge::load_manifest(path)}; });
}

size_t rg_manifest_size(const rg_manifest* m) { return m ? m->m.runs.size() : 0; }

const char* rg_manifest_axis_name(const rg_manifest* m) {
  return m ? m->m.axis_name.c_str() : "";
}

int rg_manifest_ordered(const rg_manifest* m) { return m && m->m.ordered ? 1 : 0; }

const char* rg_manifest_run_id(const rg_manifest* m, size_t i) {
  return (m && i < m->m.runs.size()) ? m->m.runs[i].run_id.c_str() : "";
}

int rg_manifest_run_has_rank(const rg_manifest* m, size_t i) {
  return (m && i < m->m.runs.size() && m->m.runs[i].rank.has_value()) ? 1 : 0;
}

double rg_manifest_run_rank(const rg_manifest* m, size_t i) {
  return (m && i < m->m.runs.size() && m->m.runs[i].rank) ? *m->m.runs[i].rank : 0.0;
}

const char* rg_manifest_run_embeddings_path(const rg_manifest* m, size_t i) {
  if (!m || i >= m->m.runs.size() || !m->m.runs[i].embeddings_path) return nullptr;
  return m->m.runs[i].embeddings_path->c_str();
}

int rg_manifest_run_has_clip_cap(const rg_manifest* m, size_t i) {
  return (m && i < m->m.runs.size() && m->m.runs[i].clip_cap.has_value()) ? 1 : 0;
}

double rg_manifest_run_clip_cap(const rg_manifest* m, size_t i) {
  return (m && i < m->m.runs.size() && m->m.runs[i].clip_cap) ? *m->m.runs[i].clip_cap : 0.0;
}

rg_status rg_manifest_set_run_rank(rg_manifest* m, size_t i, double rank) {
  if (!m) return invalid("null argument");
  if (i >= m->m.runs.size()) return invalid("run index out of range");
  if (rank < 0.0) return invalid("rank must be nonnegative");
  m->m.runs[i].rank = rank;
  return RG_OK;
}

void rg_manifest_free(rg_manifest* m) { delete m; }

double rg_clip_rank(double rank, double cap) {
  return rank < cap ? rank : cap;
}

rg_status rg_select_by_rank(const rg_manifest* m, double tie_tolerance,
                            rg_selection** out) {
  if (!m || !out) return invalid("null argument");
  return guarded(
      [&] { *out = new rg_selection{rankgauge::select_by_rank(m->m, tie_tolerance)}; });
}

rg_status rg_select_by_alpha(const rg_manifest* m, const char* const* run_ids,
                             const double* alphas, size_t n, rg_selection** out) {
  if (!m || !run_ids || !alphas || !out) return invalid("null argument");
  return guarded([&] {
    std::map<std::string, double> map;
    for (size_t i = 0; i < n; ++i) map[run_ids[i]] = alphas[i];
    *out = new rg_selection{rankgauge::select_by_alpha(m->m, map)};
  });
}

const char* rg_selection_chosen_run_id(const rg_selection* s) {
  return s ? s->r.chosen_run_id.c_str() : "";
}

double rg_selection_chosen_rank(const rg_selection* s) {
  return s ? s->r.chosen_rank : 0.0;
}

size_t rg_selection_trace_size(const rg_selection* s) {
  return s ? s->r.trace.size() : 0;
}

const char* rg_selection_trace_run_id(const rg_selection* s, size_t i) {
  return (s && i < s->r.trace.size()) ? s->r.trace[i].run_id.c_str() : "";
}

double rg_selection_trace_rank(const rg_selection* s, size_t i) {
  return (s && i < s->r.trace.size()) ? s->r.trace[i].rank : 0.0;
}

const char* rg_selection_trace_decision(const rg_selection* s, size_t i) {
  return (s && i < s->r.trace.size()) ? rankgauge::decision_name(s->r.trace[i].decision)
                                      : "";
}

int rg_selection_unordered_tie(const rg_selection* s) {
  return s && s->r.unordered_tie ? 1 : 0;
}

size_t rg_selection_tied_count(const rg_selection* s) {
  return s ? s->r.tied_max_run_ids.size() : 0;
}

const char* rg_selection_tied_run_id(const rg_selection* s, size_t i) {
  return (s && i < s->r.tied_max_run_ids.size()) ? s->r.tied_max_run_ids[i].c_str() : "";
}

void rg_selection_free(rg_selection* s) { delete s; }

/* ---- analysis ----------------------------------------------------------- */

rg_status rg_pearson(const double* xs, const double* ys, size_t n, double* out) {
  if (!xs || !ys || !out) return invalid("null argument");
  return guarded([&] {
    *out = rankgauge::pearson(std::vector<double>(xs, xs + n),
                              std::vector<double>(ys, ys + n));
  });
}

rg_status rg_rank_transfer(const char* const* source_labels,
                           const double* source_ranks, size_t n_source,
                           const char* const* target_labels,
                           const double* target_ranks, size_t n_target,
                           double* out) {
  if (!source_labels || !source_ranks || !target_labels || !target_ranks || !out) {
    return invalid("null argument");
  }
  return guarded([&] {
    std::vector<std::pair<std::string, double>> source, target;
    for (size_t i = 0; i < n_source; ++i) source.emplace_back(source_labels[i], source_ranks[i]);
    for (size_t i = 0; i < n_target; ++i) target.emplace_back(target_labels[i], target_ranks[i]);
    *out = rankgauge::rank_transfer_report(source, target).pearson_r;
  });
}

rg_status rg_convergence_curve(const rg_matrix* m, const size_t* sizes,
                               size_t n_sizes, uint64_t seed,
                               double entropy_epsilon, double* out_values,
                               double* out_full) {
  if (!m || !sizes || !out_values) return invalid("null argument");
  return guarded([&] {
    rankgauge::MetricConfig cfg;
    cfg.entropy_epsilon = entropy_epsilon;
    const rankgauge::ConvergenceCurve curve = rankgauge::convergence_curve(
        m->m, std::vector<std::size_t>(sizes, sizes + n_sizes), seed, cfg);
    std::memcpy(out_values, curve.rankme_values.data(), n_sizes * sizeof(double));
    if (out_full) *out_full = curve.full_value;
  });
}

rg_status rg_eckart_young(const rg_matrix* m, size_t R, double* bound,
                          double* achieved) {
  if (!m || !bound || !achieved) return invalid("null argument");
  return guarded([&] {
    const rankgauge::EckartYoungResult result = rankgauge::eckart_young_check(m->m, R);
    *bound = result.bound;
    *achieved = result.achieved;
  });
}

} /* extern "C" */
