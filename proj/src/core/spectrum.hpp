#pragma once

#include <cstddef>
#include <vector>

#include "core/matrix.hpp"

namespace rankgauge {

enum class SpectrumPath { Auto, Direct, Gram };

const char* spectrum_path_name(SpectrumPath p);

// Nonincreasing, nonnegative singular values of an embedding matrix, together
// with the shape they came from and the computation path that produced them.
struct SingularSpectrum {
  std::vector<double> values;  // length min(n_rows, n_cols), sorted descending
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  SpectrumPath path = SpectrumPath::Direct;  // resolved path, never Auto

  std::size_t size() const { return values.size(); }
};

// Nonincreasing, nonnegative eigenvalues of a K x K (co)variance matrix.
struct EigenSpectrum {
  std::vector<double> values;  // length K, sorted descending
  bool centered = false;

  std::size_t size() const { return values.size(); }
};

// Singular values via the requested path.
//   Direct: SVD of the matrix itself.
//   Gram:   square roots of the eigenvalues of the smaller Gram matrix
//           (K x K or N x N); negative round-off eigenvalues are clamped to
//           zero before the square root.
//   Auto:   Gram when the smaller dimension is at most a quarter of the
//           larger (the usual strongly rectangular embedding dump), Direct
//           otherwise.
SingularSpectrum singular_values(const EmbeddingMatrix& m,
                                 SpectrumPath path = SpectrumPath::Auto);

SpectrumPath resolve_path(std::size_t n_rows, std::size_t n_cols,
                          SpectrumPath requested);

// Eigenvalues of (1/(N-1)) * (m - mean)' (m - mean) when centered, of
// (1/N) * m' m otherwise. Centering requires N >= 2.
EigenSpectrum covariance_eigenvalues(const EmbeddingMatrix& m, bool center);

}  // namespace rankgauge
