#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "core/matrix.hpp"
#include "core/spectrum.hpp"

namespace rankgauge {

struct MetricConfig {
  // epsilon added to each normalized singular value before the entropy.
  double entropy_epsilon = 1e-7;
  // epsilon of the classical threshold rank; keyed to the dtype of the
  // source matrix, not to the working precision.
  double threshold_epsilon = 1e-7;
  // Optional 1-based inclusive index range for the power-law fit. Defaults to
  // every index whose eigenvalue exceeds max(lambda) * 1e-12.
  std::optional<std::pair<std::size_t, std::size_t>> fit_range;

  static MetricConfig for_dtype(Dtype d) {
    MetricConfig cfg;
    cfg.threshold_epsilon = (d == Dtype::F32) ? 1e-7 : 2.22e-16;
    return cfg;
  }

  // entropy_epsilon >= 1/len distorts the measure noticeably; advisory only.
  bool epsilon_questionable(std::size_t spectrum_len) const {
    return spectrum_len > 0 &&
           entropy_epsilon * static_cast<double>(spectrum_len) >= 1.0;
  }
};

// exp(-sum_k p_k log p_k) with p_k = sigma_k / ||sigma||_1 + epsilon over the
// whole spectrum. Natural logarithm; 0 log 0 := 0. An all-zero spectrum with
// epsilon = 0 evaluates to 0 by definition.
double rankme(const SingularSpectrum& s, const MetricConfig& cfg);

// Count of singular values strictly above
// max(sigma) * max(n_rows, n_cols) * threshold_epsilon.
std::size_t classical_rank(const SingularSpectrum& s, const MetricConfig& cfg);

struct AlphaFit {
  double alpha = 0.0;      // negated slope of log lambda_i vs log i
  double r_squared = 1.0;  // quality of the log-log line
  std::size_t n_points = 0;
};

// Ordinary least squares of log lambda_i against log i (1-based) over the fit
// range, restricted to strictly positive eigenvalues. Needs at least two
// positive eigenvalues inside the range.
AlphaFit alpha_req_fit(const EigenSpectrum& e, const MetricConfig& cfg);

struct RankReport {
  double rankme_value = 0.0;
  std::size_t classical_rank_value = 0;
  std::optional<AlphaFit> alpha;
  std::size_t n_used = 0;  // rows that entered the spectrum
  MetricConfig config;
};

}  // namespace rankgauge
