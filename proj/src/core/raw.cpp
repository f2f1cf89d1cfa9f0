#include <bit>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "core/ingest.hpp"

namespace rankgauge {

// Sidecar document at <path>.json: {"shape": [N, K], "dtype": "f32"|"f64"}.
EmbeddingMatrix load_raw(const std::string& path) {
  const std::string sidecar_path = path + ".json";
  std::ifstream side(sidecar_path);
  if (!side) fail(ErrorCode::IoError, "cannot open sidecar " + sidecar_path);

  nlohmann::json doc;
  try {
    side >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::SchemaError, "bad sidecar JSON in " + sidecar_path + ": " + e.what());
  }

  if (!doc.is_object() || !doc.contains("shape") || !doc.contains("dtype")) {
    fail(ErrorCode::SchemaError, "sidecar needs 'shape' and 'dtype': " + sidecar_path);
  }
  const auto& shape = doc["shape"];
  if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_integer() ||
      !shape[1].is_number_integer()) {
    fail(ErrorCode::ShapeError, "sidecar shape must be [N, K]: " + sidecar_path);
  }
  const long long n = shape[0].get<long long>();
  const long long k = shape[1].get<long long>();
  if (n < 1 || k < 1) fail(ErrorCode::ShapeError, "empty dimension in " + sidecar_path);

  const std::string dtype_str = doc["dtype"].is_string() ? doc["dtype"].get<std::string>() : "";
  Dtype dtype;
  if (dtype_str == "f32") {
    dtype = Dtype::F32;
  } else if (dtype_str == "f64") {
    dtype = Dtype::F64;
  } else {
    fail(ErrorCode::UnsupportedDtype, "sidecar dtype must be 'f32' or 'f64': " + sidecar_path);
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);

  const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
  const std::size_t item = (dtype == Dtype::F32) ? sizeof(float) : sizeof(double);

  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::size_t>(in.tellg());
  if (file_size != count * item) {
    fail(ErrorCode::ShapeError, "payload is " + std::to_string(file_size) +
                                    " bytes, sidecar shape needs " +
                                    std::to_string(count * item) + ": " + path);
  }
  in.seekg(0);

  EmbeddingMatrix m;
  m.dtype = dtype;
  m.data.resize(n, k);
  if (dtype == Dtype::F32) {
    std::vector<float> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * item));
    if (!in) fail(ErrorCode::IoError, "short read from " + path);
    for (long long i = 0; i < n; ++i)
      for (long long j = 0; j < k; ++j)
        m.data(i, j) = static_cast<double>(buf[static_cast<std::size_t>(i * k + j)]);
  } else {
    std::vector<double> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count * item));
    if (!in) fail(ErrorCode::IoError, "short read from " + path);
    for (long long i = 0; i < n; ++i)
      for (long long j = 0; j < k; ++j) m.data(i, j) = buf[static_cast<std::size_t>(i * k + j)];
  }
  validate_matrix(m);
  return m;
}

}  // namespace rankgauge
