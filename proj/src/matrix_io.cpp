#include "semsub/matrix_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "semsub/errors.hpp"

namespace semsub {

namespace {

constexpr char kMagic[4] = {'U', 'F', 'M', 'X'};
constexpr unsigned char kVersion = 0x01;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(path, "write failed");
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

std::string format_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoError("failed to format value");
  return std::string(buf, ptr);
}

void write_ufmx(const std::filesystem::path& path, const Matrix& m) {
  std::string bytes;
  bytes.reserve(5 + 16 + 8 * m.size());
  bytes.append(kMagic, 4);
  bytes.push_back(static_cast<char>(kVersion));
  put_u64_le(bytes, m.rows());
  put_u64_le(bytes, m.cols());
  for (double v : m.data()) put_u64_le(bytes, std::bit_cast<std::uint64_t>(v));
  write_file(path, bytes);
}

Matrix read_ufmx(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0)
    fail(path, "malformed magic bytes at offset 0 (expected UFMX)");
  if (bytes.size() < 5) fail(path, "truncated header at offset 4");
  if (bytes[4] != kVersion) {
    std::ostringstream msg;
    msg << "unsupported version byte at offset 4: 0x" << std::hex
        << static_cast<int>(bytes[4]);
    fail(path, msg.str());
  }
  if (bytes.size() < 21) fail(path, "truncated dimensions at offset 5");
  const std::uint64_t rows = get_u64_le(bytes.data() + 5);
  const std::uint64_t cols = get_u64_le(bytes.data() + 13);
  if (rows == 0 || cols == 0) fail(path, "zero dimension in header");
  const std::uint64_t count = rows * cols;
  if (cols != 0 && count / cols != rows) fail(path, "dimension overflow in header");
  const std::uint64_t expected = 21 + 8 * count;
  if (bytes.size() != expected) {
    std::ostringstream msg;
    msg << "expected " << expected << " bytes for " << rows << "x" << cols << ", found "
        << bytes.size() << " (payload at offset 21)";
    fail(path, msg.str());
  }
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i)
    data[i] = std::bit_cast<double>(get_u64_le(bytes.data() + 21 + 8 * i));
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

void write_csv(const std::filesystem::path& path, const Matrix& m) {
  std::string text;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j != 0) text.push_back(',');
      text += format_double(m(i, j));
    }
    text.push_back('\n');
  }
  write_file(path, text);
}

Matrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open for reading");
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t line_cols = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc()) {
        std::ostringstream msg;
        msg << "bad value on line " << rows + 1 << " near column offset " << (p - line.data());
        fail(path, msg.str());
      }
      data.push_back(v);
      ++line_cols;
      p = next;
      if (p == end) break;
      if (*p != ',') {
        std::ostringstream msg;
        msg << "expected ',' on line " << rows + 1 << " at offset " << (p - line.data());
        fail(path, msg.str());
      }
      ++p;
    }
    if (rows == 0) {
      cols = line_cols;
    } else if (line_cols != cols) {
      std::ostringstream msg;
      msg << "line " << rows + 1 << " has " << line_cols << " values, expected " << cols;
      fail(path, msg.str());
    }
    ++rows;
  }
  if (rows == 0) fail(path, "empty CSV");
  try {
    return Matrix(rows, cols, std::move(data));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

}  // namespace

MatrixFormat format_from_string(const std::string& s) {
  if (s == "ufmx") return MatrixFormat::ufmx;
  if (s == "csv") return MatrixFormat::csv;
  throw ConfigError("unknown matrix format '" + s + "' (expected ufmx or csv)");
}

std::string to_string(MatrixFormat format) {
  return format == MatrixFormat::ufmx ? "ufmx" : "csv";
}

void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  if (format == MatrixFormat::ufmx)
    write_ufmx(path, m);
  else
    write_csv(path, m);
}

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format) {
  return format == MatrixFormat::ufmx ? read_ufmx(path) : read_csv(path);
}

Matrix read_matrix_auto(const std::filesystem::path& path) {
  // A .ufmx extension promises the binary layout, so a bad header there is
  // an error rather than a reason to fall back to CSV.
  if (path.extension() == ".ufmx") return read_ufmx(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  char head[4] = {0, 0, 0, 0};
  in.read(head, 4);
  in.close();
  if (std::memcmp(head, kMagic, 4) == 0) return read_ufmx(path);
  return read_csv(path);
}

}  // namespace semsub
