#pragma once

/** @file io.hpp
    @brief Plain-text formats: Matrix Market coordinate files, one-value-per-line
           vectors, round-trip decimal formatting and atomic file writes.
*/

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pcgbound/linalg.hpp"

namespace pcgb {

/// Parse failure carrying the 1-based line number of the offending input line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// 17 significant digits; reading the text back reproduces the double exactly.
std::string format_double(double v);

/// Reads "%%MatrixMarket matrix coordinate {real|integer} {general|symmetric}".
/// Symmetric files store the lower triangle; both triangles are materialized.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// With @p symmetric set, only the lower triangle is written.
void write_matrix_market(std::ostream& out, const SparseMatrix& A, bool symmetric = false);

Vector read_vector(std::istream& in);
void write_vector(std::ostream& out, std::span<const double> v);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace pcgb
