#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "semsub/errors.hpp"
#include "semsub/matrix_io.hpp"
#include "semsub/rng.hpp"

using namespace semsub;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("semsub_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

Matrix tricky_values() {
  // denormals, negative zero, huge/small magnitudes
  return Matrix(2, 3, {0.0, -0.0, 5e-324, -1.7976931348623157e308, 1e-300, 3.14159});
}

}  // namespace

TEST_CASE("ufmx round-trip is bit exact") {
  TempDir tmp;
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = rng.gaussian(1 + trial % 7, 1 + (trial * 3) % 5);
    const fs::path file = tmp.path / "m.ufmx";
    write_matrix(file, m, MatrixFormat::ufmx);
    Matrix back = read_matrix(file, MatrixFormat::ufmx);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(back.data()[i] == m.data()[i]);
  }

  Matrix special = tricky_values();
  const fs::path file = tmp.path / "special.ufmx";
  write_matrix(file, special, MatrixFormat::ufmx);
  Matrix back = read_matrix(file, MatrixFormat::ufmx);
  for (std::size_t i = 0; i < special.size(); ++i) {
    // compare representations, so -0.0 and 0.0 stay distinct
    CHECK(std::memcmp(&back.data()[i], &special.data()[i], sizeof(double)) == 0);
  }
}

TEST_CASE("csv round-trip reproduces every double exactly") {
  TempDir tmp;
  Rng rng(2);
  Matrix m = rng.gaussian(6, 4);
  const fs::path file = tmp.path / "m.csv";
  write_matrix(file, m, MatrixFormat::csv);
  Matrix back = read_matrix(file, MatrixFormat::csv);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(back.data()[i] == m.data()[i]);
}

TEST_CASE("format sniffing picks the right reader") {
  TempDir tmp;
  Rng rng(3);
  Matrix m = rng.gaussian(3, 3);
  write_matrix(tmp.path / "a.bin", m, MatrixFormat::ufmx);
  write_matrix(tmp.path / "a.txt", m, MatrixFormat::csv);
  Matrix from_bin = read_matrix_auto(tmp.path / "a.bin");
  Matrix from_csv = read_matrix_auto(tmp.path / "a.txt");
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(from_bin.data()[i] == m.data()[i]);
    CHECK(from_csv.data()[i] == m.data()[i]);
  }
}

TEST_CASE("malformed magic names the file and offset") {
  TempDir tmp;
  const fs::path file = tmp.path / "bad.ufmx";
  std::ofstream(file) << "XXXX garbage";
  CHECK_THROWS_WITH_AS(read_matrix(file, MatrixFormat::ufmx), doctest::Contains("offset 0"),
                       IoError);
  CHECK_THROWS_WITH_AS(read_matrix(file, MatrixFormat::ufmx), doctest::Contains("bad.ufmx"),
                       IoError);
}

TEST_CASE("truncated payload is rejected with the expected size") {
  TempDir tmp;
  Rng rng(4);
  Matrix m = rng.gaussian(4, 4);
  const fs::path file = tmp.path / "trunc.ufmx";
  write_matrix(file, m, MatrixFormat::ufmx);
  fs::resize_file(file, fs::file_size(file) - 9);
  CHECK_THROWS_AS(read_matrix(file, MatrixFormat::ufmx), IoError);
}

TEST_CASE("csv reader rejects ragged and malformed rows") {
  TempDir tmp;
  const fs::path ragged = tmp.path / "ragged.csv";
  std::ofstream(ragged) << "1,2,3\n4,5\n";
  CHECK_THROWS_AS(read_matrix(ragged, MatrixFormat::csv), IoError);

  const fs::path junk = tmp.path / "junk.csv";
  std::ofstream(junk) << "1,two,3\n";
  CHECK_THROWS_WITH_AS(read_matrix(junk, MatrixFormat::csv), doctest::Contains("line 1"),
                       IoError);

  const fs::path empty = tmp.path / "empty.csv";
  std::ofstream(empty) << "";
  CHECK_THROWS_AS(read_matrix(empty, MatrixFormat::csv), IoError);
}

TEST_CASE("non-finite values cannot enter through files") {
  TempDir tmp;
  const fs::path file = tmp.path / "inf.csv";
  std::ofstream(file) << "1,inf\n2,3\n";
  CHECK_THROWS_AS(read_matrix(file, MatrixFormat::csv), Error);
}

TEST_CASE("missing file raises IoError") {
  CHECK_THROWS_AS(read_matrix("/nonexistent/nowhere.ufmx", MatrixFormat::ufmx), IoError);
}
