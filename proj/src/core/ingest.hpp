#pragma once

#include <cstdint>
#include <string>

#include "core/matrix.hpp"

namespace rankgauge {

// NPY version 1.0, two-dimensional little-endian '<f4'/'<f8', C order only.
EmbeddingMatrix load_npy(const std::string& path);

// Writes the matrix as NPY v1.0 with the given payload dtype. Loading the
// result reproduces the payload bit for bit.
void write_npy(const EmbeddingMatrix& m, const std::string& path, Dtype dtype);

// Rectangular numeric CSV, '.' decimal point, '\n' or '\r\n' newlines.
// Values are parsed as f64 regardless of formatting width.
EmbeddingMatrix load_csv(const std::string& path, bool has_header);

// Raw little-endian float payload described by a sidecar JSON document at
// <path>.json with fields {"shape": [N, K], "dtype": "f32"|"f64"}.
EmbeddingMatrix load_raw(const std::string& path);

// Keeps n uniformly chosen rows (without replacement, original order
// preserved). Returns the input unchanged when n >= N. Deterministic per
// (matrix, n, seed).
EmbeddingMatrix subsample_rows(const EmbeddingMatrix& m, std::size_t n,
                               std::uint64_t seed);

}  // namespace rankgauge
