// NPY v1.0 reader/writer for 2-D little-endian float arrays.
//
// Layout: 6-byte magic "\x93NUMPY", version bytes, little-endian u16 header
// length, then a Python dict literal padded with spaces to a newline, e.g.
//   {'descr': '<f8', 'fortran_order': False, 'shape': (3, 2), }
// followed by the raw payload.

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <vector>

#include "core/ingest.hpp"

static_assert(std::endian::native == std::endian::little,
              "little-endian host required for the NPY payload layout");

namespace rankgauge {
namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Value of `key` in the header dict, as the raw token between ':' and the
// next top-level ','. Quoted keys; tuple values keep their parentheses.
std::string dict_value(const std::string& header, const std::string& key,
                       const std::string& path) {
  const std::string quoted = "'" + key + "'";
  const std::size_t kpos = header.find(quoted);
  if (kpos == std::string::npos) {
    fail(ErrorCode::ParseError, "NPY header missing key '" + key + "' in " + path);
  }
  std::size_t pos = header.find(':', kpos + quoted.size());
  if (pos == std::string::npos) {
    fail(ErrorCode::ParseError, "malformed NPY header in " + path);
  }
  ++pos;
  int depth = 0;
  std::size_t end = pos;
  while (end < header.size()) {
    const char c = header[end];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if ((c == ',' || c == '}') && depth <= 0) break;
    ++end;
  }
  return strip(header.substr(pos, end - pos));
}

std::vector<long long> parse_shape_tuple(const std::string& token,
                                         const std::string& path) {
  std::string t = strip(token);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
    fail(ErrorCode::ParseError, "malformed shape tuple in NPY header of " + path);
  }
  t = t.substr(1, t.size() - 2);
  std::vector<long long> dims;
  std::size_t start = 0;
  while (start < t.size()) {
    std::size_t comma = t.find(',', start);
    if (comma == std::string::npos) comma = t.size();
    const std::string piece = strip(t.substr(start, comma - start));
    if (!piece.empty()) {
      try {
        dims.push_back(std::stoll(piece));
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad shape entry '" + piece + "' in " + path);
      }
    }
    start = comma + 1;
  }
  return dims;
}

template <typename T>
EmbeddingMatrix payload_to_matrix(std::ifstream& in, long long n, long long k,
                                  Dtype dtype, const std::string& path) {
  std::vector<T> buf(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(T)));
  if (static_cast<std::size_t>(in.gcount()) != buf.size() * sizeof(T)) {
    fail(ErrorCode::IoError, "truncated NPY payload in " + path);
  }

  EmbeddingMatrix m;
  m.dtype = dtype;
  m.data.resize(n, k);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < k; ++j) {
      m.data(i, j) = static_cast<double>(buf[static_cast<std::size_t>(i * k + j)]);
    }
  }
  validate_matrix(m);
  return m;
}

}  // namespace

EmbeddingMatrix load_npy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);

  char magic[6];
  in.read(magic, 6);
  if (in.gcount() != 6 || std::memcmp(magic, kMagic, 6) != 0) {
    fail(ErrorCode::MagicMismatch, path + " is not an NPY file");
  }

  unsigned char version[2];
  in.read(reinterpret_cast<char*>(version), 2);
  if (in.gcount() != 2) fail(ErrorCode::IoError, "truncated NPY header in " + path);
  if (version[0] != 1 || version[1] != 0) {
    fail(ErrorCode::UnsupportedVersion,
         "NPY version " + std::to_string(version[0]) + "." +
             std::to_string(version[1]) + " not supported (need 1.0) in " + path);
  }

  unsigned char len_bytes[2];
  in.read(reinterpret_cast<char*>(len_bytes), 2);
  if (in.gcount() != 2) fail(ErrorCode::IoError, "truncated NPY header in " + path);
  const std::size_t header_len =
      static_cast<std::size_t>(len_bytes[0]) | (static_cast<std::size_t>(len_bytes[1]) << 8);

  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (static_cast<std::size_t>(in.gcount()) != header_len) {
    fail(ErrorCode::IoError, "truncated NPY header in " + path);
  }

  const std::string descr = dict_value(header, "descr", path);
  const std::string order = dict_value(header, "fortran_order", path);
  const std::string shape = dict_value(header, "shape", path);

  Dtype dtype;
  if (descr == "'<f4'" || descr == "\"<f4\"") {
    dtype = Dtype::F32;
  } else if (descr == "'<f8'" || descr == "\"<f8\"") {
    dtype = Dtype::F64;
  } else {
    fail(ErrorCode::UnsupportedDtype,
         "dtype " + descr + " not supported (need little-endian '<f4' or '<f8') in " + path);
  }

  if (order == "True") {
    fail(ErrorCode::UnsupportedOrder, "fortran_order arrays not supported: " + path);
  }
  if (order != "False") {
    fail(ErrorCode::ParseError, "bad fortran_order value '" + order + "' in " + path);
  }

  const std::vector<long long> dims = parse_shape_tuple(shape, path);
  if (dims.size() != 2) {
    fail(ErrorCode::ShapeError, "need a 2-D array, got " + std::to_string(dims.size()) +
                                    "-D in " + path);
  }
  if (dims[0] < 1 || dims[1] < 1) {
    fail(ErrorCode::ShapeError, "empty dimension in " + path);
  }

  return dtype == Dtype::F32 ? payload_to_matrix<float>(in, dims[0], dims[1], dtype, path)
                             : payload_to_matrix<double>(in, dims[0], dims[1], dtype, path);
}

void write_npy(const EmbeddingMatrix& m, const std::string& path, Dtype dtype) {
  validate_matrix(m);

  std::string dict = "{'descr': '";
  dict += (dtype == Dtype::F32) ? "<f4" : "<f8";
  dict += "', 'fortran_order': False, 'shape': (";
  dict += std::to_string(m.rows()) + ", " + std::to_string(m.cols());
  dict += "), }";
  // Pad so magic + version + length + header is a multiple of 64 and the
  // header ends with a newline.
  std::size_t total = 6 + 2 + 2 + dict.size() + 1;
  const std::size_t padding = (64 - total % 64) % 64;
  dict.append(padding, ' ');
  dict.push_back('\n');

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");

  out.write(kMagic, 6);
  const unsigned char version[2] = {1, 0};
  out.write(reinterpret_cast<const char*>(version), 2);
  const std::size_t header_len = dict.size();
  const unsigned char len_bytes[2] = {static_cast<unsigned char>(header_len & 0xff),
                                      static_cast<unsigned char>((header_len >> 8) & 0xff)};
  out.write(reinterpret_cast<const char*>(len_bytes), 2);
  out.write(dict.data(), static_cast<std::streamsize>(dict.size()));

  if (dtype == Dtype::F32) {
    std::vector<float> buf;
    buf.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        buf.push_back(static_cast<float>(m.data(i, j)));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
  } else {
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(m.rows() * m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) buf.push_back(m.data(i, j));
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(double)));
  }
  if (!out) fail(ErrorCode::IoError, "short write to " + path);
}

}  // namespace rankgauge
