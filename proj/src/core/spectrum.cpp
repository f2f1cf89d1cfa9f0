#include "core/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace rankgauge {

const char* spectrum_path_name(SpectrumPath p) {
  switch (p) {
    case SpectrumPath::Auto: return "auto";
    case SpectrumPath::Direct: return "direct";
    case SpectrumPath::Gram: return "gram";
  }
  return "?";
}

SpectrumPath resolve_path(std::size_t n_rows, std::size_t n_cols,
                          SpectrumPath requested) {
  if (requested != SpectrumPath::Auto) return requested;
  const std::size_t lo = std::min(n_rows, n_cols);
  const std::size_t hi = std::max(n_rows, n_cols);
  // Strongly rectangular, e.g. 25600 x 2048: the Gram matrix of the smaller
  // side turns the SVD into a symmetric eigenproblem.
  return (4 * lo <= hi) ? SpectrumPath::Gram : SpectrumPath::Direct;
}

namespace {

std::vector<double> gram_singular_values(const Eigen::MatrixXd& z) {
  const bool cols_smaller = z.cols() <= z.rows();
  const Eigen::Index dim = cols_smaller ? z.cols() : z.rows();

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  if (cols_smaller) {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose());
  } else {
    gram.selfadjointView<Eigen::Lower>().rankUpdate(z);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::ConvergenceFailure,
         "symmetric eigensolver failed on the " + std::to_string(dim) + "x" +
             std::to_string(dim) + " Gram matrix (max sweeps exhausted)");
  }

  // Ascending from Eigen; clamp round-off negatives before the square root.
  const Eigen::VectorXd& eig = solver.eigenvalues();
  std::vector<double> values(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double lambda = std::max(0.0, eig(dim - 1 - i));
    values[static_cast<std::size_t>(i)] = std::sqrt(lambda);
  }
  return values;
}

std::vector<double> direct_singular_values(const Eigen::MatrixXd& z) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(z);
  if (svd.info() != Eigen::Success) {
    fail(ErrorCode::ConvergenceFailure,
         "SVD failed to converge on a " + std::to_string(z.rows()) + "x" +
             std::to_string(z.cols()) + " matrix");
  }
  const Eigen::VectorXd& sv = svd.singularValues();
  std::vector<double> values(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    values[static_cast<std::size_t>(i)] = std::max(0.0, sv(i));
  }
  std::sort(values.begin(), values.end(), std::greater<double>());
  return values;
}

}  // namespace

SingularSpectrum singular_values(const EmbeddingMatrix& m, SpectrumPath path) {
  validate_matrix(m);
  const SpectrumPath resolved =
      resolve_path(static_cast<std::size_t>(m.rows()),
                   static_cast<std::size_t>(m.cols()), path);

  SingularSpectrum s;
  s.n_rows = static_cast<std::size_t>(m.rows());
  s.n_cols = static_cast<std::size_t>(m.cols());
  s.path = resolved;
  s.values = (resolved == SpectrumPath::Gram) ? gram_singular_values(m.data)
                                              : direct_singular_values(m.data);
  return s;
}

EigenSpectrum covariance_eigenvalues(const EmbeddingMatrix& m, bool center) {
  validate_matrix(m);
  if (center && m.rows() < 2) {
    fail(ErrorCode::InvalidArgument, "centering needs at least two rows");
  }

  const Eigen::Index k = m.cols();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(k, k);
  double norm;
  if (center) {
    const Eigen::RowVectorXd mean = m.data.colwise().mean();
    const Eigen::MatrixXd centered = m.data.rowwise() - mean;
    cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    norm = 1.0 / static_cast<double>(m.rows() - 1);
  } else {
    cov.selfadjointView<Eigen::Lower>().rankUpdate(m.data.transpose());
    norm = 1.0 / static_cast<double>(m.rows());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::ConvergenceFailure,
         "symmetric eigensolver failed on the " + std::to_string(k) + "x" +
             std::to_string(k) + " covariance matrix (max sweeps exhausted)");
  }

  const Eigen::VectorXd& eig = solver.eigenvalues();
  EigenSpectrum e;
  e.centered = center;
  e.values.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    e.values[static_cast<std::size_t>(i)] = std::max(0.0, eig(k - 1 - i) * norm);
  }
  return e;
}

}  // namespace rankgauge
