#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/matrix.hpp"
#include "core/metrics.hpp"

namespace rankgauge {

struct ConvergenceCurve {
  std::vector<std::size_t> sample_sizes;  // strictly increasing
  std::vector<double> rankme_values;      // same length
  double full_value = 0.0;                // rankme at the full row count
  std::size_t n_rows = 0;
};

struct CorrelationPair {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

struct CorrelationReport {
  double pearson_r = 0.0;
  std::size_t n_pairs = 0;
  std::vector<CorrelationPair> pairs;
};

// rankme over an independent fresh subsample per size (per-size seeds derived
// from `seed`), plus the full-matrix value. Sizes must be strictly increasing
// and end at or below N; a size equal to N reproduces the full value bit for
// bit.
ConvergenceCurve convergence_curve(const EmbeddingMatrix& m,
                                   const std::vector<std::size_t>& sizes,
                                   std::uint64_t seed, const MetricConfig& cfg);

// Sample Pearson correlation, (n-1)-normalized covariance. Needs two or more
// pairs and nonzero variance on both sides.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Matches entries of the two lists by label (one-to-one) and correlates the
// rank columns.
CorrelationReport rank_transfer_report(
    const std::vector<std::pair<std::string, double>>& source,
    const std::vector<std::pair<std::string, double>>& target);

struct EckartYoungResult {
  double bound = 0.0;     // sum of squared singular values past R
  double achieved = 0.0;  // squared Frobenius error of the rank-R truncation
};

// Tail energy past rank R against the error actually achieved by the rank-R
// truncated-SVD reconstruction; the two agree to roundoff.
EckartYoungResult eckart_young_check(const EmbeddingMatrix& m, std::size_t R);

}  // namespace rankgauge
