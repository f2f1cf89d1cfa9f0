#include "core/analysis.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>

#include "core/ingest.hpp"
#include "core/rng.hpp"

namespace rankgauge {

namespace {

// Independent draw per curve point; mixing keeps the per-size streams
// decorrelated from one another and from the base seed.
std::uint64_t derive_seed(std::uint64_t base, std::size_t index) {
  return splitmix64_once(base ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace

ConvergenceCurve convergence_curve(const EmbeddingMatrix& m,
                                   const std::vector<std::size_t>& sizes,
                                   std::uint64_t seed, const MetricConfig& cfg) {
  validate_matrix(m);
  if (sizes.empty()) fail(ErrorCode::InvalidArgument, "need at least one sample size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) fail(ErrorCode::InvalidArgument, "sample sizes must be >= 1");
    if (i > 0 && sizes[i] <= sizes[i - 1]) {
      fail(ErrorCode::InvalidArgument, "sample sizes must be strictly increasing");
    }
  }
  const std::size_t total = static_cast<std::size_t>(m.rows());
  if (sizes.back() > total) {
    fail(ErrorCode::InvalidArgument,
         "largest sample size " + std::to_string(sizes.back()) + " exceeds row count " +
             std::to_string(total));
  }

  ConvergenceCurve curve;
  curve.sample_sizes = sizes;
  curve.n_rows = total;
  curve.rankme_values.reserve(sizes.size());
  curve.full_value = rankme(singular_values(m), cfg);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == total) {
      // Subsampling at n = N returns the matrix unchanged, so this point is
      // the full value by construction.
      curve.rankme_values.push_back(curve.full_value);
      continue;
    }
    const EmbeddingMatrix sub = subsample_rows(m, sizes[i], derive_seed(seed, i));
    curve.rankme_values.push_back(rankme(singular_values(sub), cfg));
  }
  return curve;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    fail(ErrorCode::LengthMismatch, "series lengths differ: " + std::to_string(xs.size()) +
                                        " vs " + std::to_string(ys.size()));
  }
  if (xs.size() < 2) {
    fail(ErrorCode::LengthMismatch, "need at least two pairs, got " +
                                        std::to_string(xs.size()));
  }

  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    fail(ErrorCode::ZeroVariance, sxx == 0.0 ? "x series is constant" : "y series is constant");
  }
  return sxy / std::sqrt(sxx * syy);
}

CorrelationReport rank_transfer_report(
    const std::vector<std::pair<std::string, double>>& source,
    const std::vector<std::pair<std::string, double>>& target) {
  if (source.size() != target.size()) {
    fail(ErrorCode::LabelMismatch, "source has " + std::to_string(source.size()) +
                                       " labels, target has " + std::to_string(target.size()));
  }

  std::map<std::string, double> target_by_label;
  for (const auto& [label, rank] : target) {
    if (!target_by_label.emplace(label, rank).second) {
      fail(ErrorCode::LabelMismatch, "duplicate target label '" + label + "'");
    }
  }

  CorrelationReport report;
  std::vector<double> xs, ys;
  for (const auto& [label, rank] : source) {
    const auto it = target_by_label.find(label);
    if (it == target_by_label.end()) {
      fail(ErrorCode::LabelMismatch, "label '" + label + "' missing from target");
    }
    report.pairs.push_back({label, rank, it->second});
    xs.push_back(rank);
    ys.push_back(it->second);
  }
  report.n_pairs = report.pairs.size();
  report.pearson_r = pearson(xs, ys);
  return report;
}

EckartYoungResult eckart_young_check(const EmbeddingMatrix& m, std::size_t R) {
  validate_matrix(m);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(m.data, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    fail(ErrorCode::ConvergenceFailure, "SVD failed during truncation check");
  }
  const Eigen::VectorXd& sigma = svd.singularValues();
  const std::size_t len = static_cast<std::size_t>(sigma.size());
  if (R > len) {
    fail(ErrorCode::InvalidArgument, "R = " + std::to_string(R) +
                                         " exceeds spectrum length " + std::to_string(len));
  }

  EckartYoungResult result;
  for (std::size_t r = R; r < len; ++r) {
    result.bound += sigma(static_cast<Eigen::Index>(r)) * sigma(static_cast<Eigen::Index>(r));
  }

  const Eigen::Index rr = static_cast<Eigen::Index>(R);
  const Eigen::MatrixXd truncated = svd.matrixU().leftCols(rr) *
                                    sigma.head(rr).asDiagonal() *
                                    svd.matrixV().leftCols(rr).transpose();
  result.achieved = (m.data - truncated).squaredNorm();
  return result;
}

}  // namespace rankgauge
