#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankgauge {

double rankme(const SingularSpectrum& s, const MetricConfig& cfg) {
  const double eps = cfg.entropy_epsilon;
  const double l1 = std::accumulate(s.values.begin(), s.values.end(), 0.0);
  if (l1 == 0.0 && eps == 0.0) return 0.0;

  double entropy = 0.0;
  for (const double sigma : s.values) {
    const double p = (l1 > 0.0 ? sigma / l1 : 0.0) + eps;
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

std::size_t classical_rank(const SingularSpectrum& s, const MetricConfig& cfg) {
  if (s.values.empty()) return 0;
  const double top = *std::max_element(s.values.begin(), s.values.end());
  const double threshold =
      top * static_cast<double>(std::max(s.n_rows, s.n_cols)) * cfg.threshold_epsilon;
  return static_cast<std::size_t>(
      std::count_if(s.values.begin(), s.values.end(),
                    [threshold](double v) { return v > threshold; }));
}

AlphaFit alpha_req_fit(const EigenSpectrum& e, const MetricConfig& cfg) {
  std::size_t begin = 1;  // 1-based, inclusive
  std::size_t end = e.size();
  if (cfg.fit_range) {
    begin = std::max<std::size_t>(1, cfg.fit_range->first);
    end = std::min(e.size(), cfg.fit_range->second);
  } else if (!e.values.empty()) {
    // Default: indices whose eigenvalue is above max(lambda) * 1e-12. Values
    // are sorted, so the kept indices form a prefix.
    const double floor = e.values.front() * 1e-12;
    while (end > 0 && e.values[end - 1] <= floor) --end;
  }

  std::vector<double> log_i, log_lambda;
  for (std::size_t i = begin; i <= end && i <= e.size(); ++i) {
    const double lambda = e.values[i - 1];
    if (lambda > 0.0) {
      log_i.push_back(std::log(static_cast<double>(i)));
      log_lambda.push_back(std::log(lambda));
    }
  }

  if (log_i.size() < 2) {
    fail(ErrorCode::InsufficientPositiveEigenvalues,
         "power-law fit needs at least two positive eigenvalues in range, got " +
             std::to_string(log_i.size()));
  }

  const std::size_t n = log_i.size();
  const double mean_x = std::accumulate(log_i.begin(), log_i.end(), 0.0) / n;
  const double mean_y = std::accumulate(log_lambda.begin(), log_lambda.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = log_i[i] - mean_x;
    const double dy = log_lambda[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    fail(ErrorCode::DegenerateFit, "all fit indices coincide");
  }

  const double slope = sxy / sxx;
  AlphaFit fit;
  fit.alpha = (slope == 0.0) ? 0.0 : -slope;
  fit.n_points = n;
  if (syy == 0.0) {
    fit.r_squared = 1.0;  // flat spectrum, the line is exact
  } else {
    const double ss_res = syy - slope * sxy;
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

}  // namespace rankgauge
