#include "core/ingest.hpp"
#include "core/rng.hpp"

namespace rankgauge {

EmbeddingMatrix subsample_rows(const EmbeddingMatrix& m, std::size_t n,
                               std::uint64_t seed) {
  validate_matrix(m);
  if (n < 1) fail(ErrorCode::InvalidArgument, "subsample size must be >= 1");

  const std::size_t total = static_cast<std::size_t>(m.rows());
  if (n >= total) return m;

  const std::vector<std::size_t> idx = sample_without_replacement(total, n, seed);
  EmbeddingMatrix out;
  out.dtype = m.dtype;
  out.source_label = m.source_label;
  out.data.resize(static_cast<Eigen::Index>(n), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.data.row(static_cast<Eigen::Index>(i)) =
        m.data.row(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

}  // namespace rankgauge
