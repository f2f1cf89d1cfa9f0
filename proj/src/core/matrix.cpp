#include "core/matrix.hpp"

#include <cmath>

namespace rankgauge {

void validate_matrix(const EmbeddingMatrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    fail(ErrorCode::ShapeError, "matrix must have at least one row and one column, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.data.allFinite()) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!std::isfinite(m.data(i, j))) {
          fail(ErrorCode::NonFiniteData,
               "non-finite value at row " + std::to_string(i) + ", col " + std::to_string(j));
        }
      }
    }
  }
}

}  // namespace rankgauge
