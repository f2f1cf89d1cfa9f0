/* rankgauge — effective-rank metrics and label-free model selection for
 * embedding matrices.
 *
 * C API of the shared library. All objects are opaque handles created and
 * destroyed by the library; all functions return rg_status and write results
 * through out-parameters. On failure a per-thread message with detail is
 * available via rg_last_error_message().
 */
#ifndef RANKGAUGE_H
#define RANKGAUGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RG_API __declspec(dllexport)
#else
#define RG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rg_status {
  RG_OK = 0,
  RG_ERR_IO,
  RG_ERR_MAGIC_MISMATCH,
  RG_ERR_UNSUPPORTED_VERSION,
  RG_ERR_UNSUPPORTED_DTYPE,
  RG_ERR_UNSUPPORTED_ORDER,
  RG_ERR_SHAPE,
  RG_ERR_NON_FINITE_DATA,
  RG_ERR_RAGGED_ROWS,
  RG_ERR_PARSE,
  RG_ERR_SCHEMA,
  RG_ERR_DUPLICATE_RUN_ID,
  RG_ERR_UNORDERED_VALUES,
  RG_ERR_EMPTY_MANIFEST,
  RG_ERR_CONVERGENCE_FAILURE,
  RG_ERR_INSUFFICIENT_POSITIVE_EIGENVALUES,
  RG_ERR_DEGENERATE_FIT,
  RG_ERR_MISSING_RANK,
  RG_ERR_MISSING_ALPHA,
  RG_ERR_ZERO_VARIANCE,
  RG_ERR_LENGTH_MISMATCH,
  RG_ERR_LABEL_MISMATCH,
  RG_ERR_INVALID_ARGUMENT,
  RG_ERR_OUT_OF_MEMORY,
  RG_ERR_UNKNOWN
} rg_status;

typedef enum rg_dtype { RG_DTYPE_F32 = 0, RG_DTYPE_F64 = 1 } rg_dtype;

typedef enum rg_path {
  RG_PATH_AUTO = 0,
  RG_PATH_DIRECT = 1,
  RG_PATH_GRAM = 2
} rg_path;

typedef struct rg_matrix rg_matrix;
typedef struct rg_spectrum rg_spectrum;       /* singular values */
typedef struct rg_eigenspectrum rg_eigenspectrum; /* covariance eigenvalues */
typedef struct rg_manifest rg_manifest;
typedef struct rg_selection rg_selection;

/* ---- library info / diagnostics ---------------------------------------- */

RG_API const char* rg_version(void);
RG_API const char* rg_status_name(rg_status status);
/* Message of the most recent failure on the calling thread; empty if none. */
RG_API const char* rg_last_error_message(void);
/* Upper bound for internal parallelism; <= 0 resets to the default. */
RG_API void rg_set_max_threads(int n);

/* ---- embedding matrices ------------------------------------------------- */

/* data is row-major, n_rows x n_cols, copied in. */
RG_API rg_status rg_matrix_from_data(const double* data, size_t n_rows,
                                     size_t n_cols, rg_matrix** out);
/* NPY v1.0, 2-D little-endian '<f4'/'<f8', C order. */
RG_API rg_status rg_matrix_load_npy(const char* path, rg_matrix** out);
RG_API rg_status rg_matrix_load_csv(const char* path, int has_header,
                                    rg_matrix** out);
/* Raw little-endian payload described by <path>.json
 * {"shape": [N, K], "dtype": "f32"|"f64"}. */
RG_API rg_status rg_matrix_load_raw(const char* path, rg_matrix** out);
RG_API rg_status rg_matrix_write_npy(const rg_matrix* m, const char* path,
                                     rg_dtype dtype);
RG_API size_t rg_matrix_rows(const rg_matrix* m);
RG_API size_t rg_matrix_cols(const rg_matrix* m);
RG_API rg_dtype rg_matrix_dtype(const rg_matrix* m);
RG_API rg_status rg_matrix_get(const rg_matrix* m, size_t row, size_t col,
                               double* out);
/* n rows uniformly without replacement (original order); the whole matrix
 * when n >= N. Deterministic per seed. */
RG_API rg_status rg_matrix_subsample(const rg_matrix* m, size_t n,
                                     uint64_t seed, rg_matrix** out);
RG_API void rg_matrix_free(rg_matrix* m);

/* ---- spectra ------------------------------------------------------------ */

RG_API rg_status rg_spectrum_compute(const rg_matrix* m, rg_path path,
                                     rg_spectrum** out);
/* Builds a spectrum from caller-provided singular values (sorted descending,
 * nonnegative); n_rows/n_cols give the provenance shape. */
RG_API rg_status rg_spectrum_from_values(const double* values, size_t n,
                                         size_t n_rows, size_t n_cols,
                                         rg_spectrum** out);
RG_API size_t rg_spectrum_size(const rg_spectrum* s);
RG_API rg_status rg_spectrum_values(const rg_spectrum* s, double* buffer,
                                    size_t buffer_len);
/* The path actually taken (never RG_PATH_AUTO). */
RG_API rg_path rg_spectrum_path_used(const rg_spectrum* s);
RG_API void rg_spectrum_free(rg_spectrum* s);

RG_API rg_status rg_covariance_eigenvalues(const rg_matrix* m, int centered,
                                           rg_eigenspectrum** out);
RG_API size_t rg_eigenspectrum_size(const rg_eigenspectrum* e);
RG_API rg_status rg_eigenspectrum_values(const rg_eigenspectrum* e,
                                         double* buffer, size_t buffer_len);
RG_API void rg_eigenspectrum_free(rg_eigenspectrum* e);

/* ---- rank metrics ------------------------------------------------------- */

/* exp of the Shannon entropy of the L1-normalized singular values, each
 * shifted by entropy_epsilon. */
RG_API rg_status rg_rankme(const rg_spectrum* s, double entropy_epsilon,
                           double* out);
/* Count of singular values above max(sigma)*max(N,K)*threshold_epsilon. */
RG_API rg_status rg_classical_rank(const rg_spectrum* s,
                                   double threshold_epsilon, size_t* out);
/* Conventional threshold epsilon for a dtype: 1e-7 (f32), 2.22e-16 (f64). */
RG_API double rg_default_threshold_epsilon(rg_dtype dtype);
/* Least-squares decay exponent of log lambda_i vs log i over the 1-based
 * inclusive range [fit_start, fit_end]; pass 0, 0 for the default range.
 * r_squared may be NULL. */
RG_API rg_status rg_alpha_req_fit(const rg_eigenspectrum* e, size_t fit_start,
                                  size_t fit_end, double* alpha,
                                  double* r_squared);

/* ---- run manifests and selection ---------------------------------------- */

RG_API rg_status rg_manifest_load(const char* path, rg_manifest** out);
RG_API size_t rg_manifest_size(const rg_manifest* m);
RG_API const char* rg_manifest_axis_name(const rg_manifest* m);
RG_API int rg_manifest_ordered(const rg_manifest* m);
RG_API const char* rg_manifest_run_id(const rg_manifest* m, size_t i);
RG_API int rg_manifest_run_has_rank(const rg_manifest* m, size_t i);
RG_API double rg_manifest_run_rank(const rg_manifest* m, size_t i);
/* NULL when the run has no embeddings path. */
RG_API const char* rg_manifest_run_embeddings_path(const rg_manifest* m,
                                                   size_t i);
RG_API int rg_manifest_run_has_clip_cap(const rg_manifest* m, size_t i);
RG_API double rg_manifest_run_clip_cap(const rg_manifest* m, size_t i);
/* Fills in a rank computed elsewhere (e.g. from the run's embeddings). */
RG_API rg_status rg_manifest_set_run_rank(rg_manifest* m, size_t i,
                                          double rank);
RG_API void rg_manifest_free(rg_manifest* m);

RG_API double rg_clip_rank(double rank, double cap);

/* Highest-rank selection with the plateau tie-break on ordered manifests;
 * ranks are clipped with each run's clip_cap first. */
RG_API rg_status rg_select_by_rank(const rg_manifest* m, double tie_tolerance,
                                   rg_selection** out);
/* Picks the run with decay exponent closest to 1. run_ids/alphas are n
 * parallel arrays; every manifest run must be covered. */
RG_API rg_status rg_select_by_alpha(const rg_manifest* m,
                                    const char* const* run_ids,
                                    const double* alphas, size_t n,
                                    rg_selection** out);

RG_API const char* rg_selection_chosen_run_id(const rg_selection* s);
RG_API double rg_selection_chosen_rank(const rg_selection* s);
RG_API size_t rg_selection_trace_size(const rg_selection* s);
RG_API const char* rg_selection_trace_run_id(const rg_selection* s, size_t i);
RG_API double rg_selection_trace_rank(const rg_selection* s, size_t i);
/* "kept_initial" | "replaced_by_greater" | "replaced_by_tiebreak" | "skipped" */
RG_API const char* rg_selection_trace_decision(const rg_selection* s, size_t i);
/* Nonzero when the manifest was unordered and several runs tied the maximum;
 * the tied run ids are then listed. */
RG_API int rg_selection_unordered_tie(const rg_selection* s);
RG_API size_t rg_selection_tied_count(const rg_selection* s);
RG_API const char* rg_selection_tied_run_id(const rg_selection* s, size_t i);
RG_API void rg_selection_free(rg_selection* s);

/* ---- analysis ----------------------------------------------------------- */

RG_API rg_status rg_pearson(const double* xs, const double* ys, size_t n,
                            double* out);
/* Matches source/target entries by label and correlates the two rank
 * columns. */
RG_API rg_status rg_rank_transfer(const char* const* source_labels,
                                  const double* source_ranks, size_t n_source,
                                  const char* const* target_labels,
                                  const double* target_ranks, size_t n_target,
                                  double* out);
/* rankme over one fresh subsample per size (strictly increasing sizes,
 * max <= N). out_values must hold n_sizes entries; out_full may be NULL. */
RG_API rg_status rg_convergence_curve(const rg_matrix* m, const size_t* sizes,
                                      size_t n_sizes, uint64_t seed,
                                      double entropy_epsilon,
                                      double* out_values, double* out_full);
/* Tail energy past rank R vs the squared Frobenius error of the rank-R
 * truncated-SVD reconstruction. */
RG_API rg_status rg_eckart_young(const rg_matrix* m, size_t R, double* bound,
                                 double* achieved);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RANKGAUGE_H */
