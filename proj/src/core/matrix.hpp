#pragma once

#include <Eigen/Core>
#include <string>

#include "core/error.hpp"

namespace rankgauge {

// Precision of the data as stored on disk. Values are always held as f64 in
// memory; the source dtype drives the default threshold epsilon of the
// classical rank.
enum class Dtype { F32, F64 };

inline const char* dtype_name(Dtype d) { return d == Dtype::F32 ? "f32" : "f64"; }

// Dense N x K matrix of model outputs, one sample per row.
struct EmbeddingMatrix {
  Eigen::MatrixXd data;
  Dtype dtype = Dtype::F64;
  std::string source_label;

  Eigen::Index rows() const { return data.rows(); }
  Eigen::Index cols() const { return data.cols(); }
};

// Enforces N >= 1, K >= 1 and finiteness of every entry.
void validate_matrix(const EmbeddingMatrix& m);

}  // namespace rankgauge
