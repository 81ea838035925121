#pragma once

#include <filesystem>
#include <string>

#include "semsub/matrix.hpp"

namespace semsub {

enum class MatrixFormat { ufmx, csv };

MatrixFormat format_from_string(const std::string& s);
std::string to_string(MatrixFormat format);

// UFMX binary layout: magic "UFMX", version byte 0x01, rows and cols as
// 64-bit little-endian unsigned integers, then rows*cols IEEE-754 binary64
// little-endian values in row-major order. Round-trips bit-exactly.
//
// CSV: comma-separated rows, '.' decimal point, newline-terminated rows,
// no header. Values are written with the shortest representation that
// parses back to the identical double.
void write_matrix(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format);

// Reads with format sniffing: a leading "UFMX" magic selects binary,
// anything else parses as CSV.
Matrix read_matrix_auto(const std::filesystem::path& path);

}  // namespace semsub
