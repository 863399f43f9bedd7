#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "skewkrylov/operator.hpp"
#include "skewkrylov/types.hpp"

namespace skewkrylov {

using AnyMatrix = std::variant<DenseMatrix, SparseSkewMatrix>;

struct MatrixMarketData {
    AnyMatrix matrix;
    std::vector<std::string> comments;  ///< comment lines with the leading '%' removed
};

/// Reads coordinate or array Matrix Market data with real/integer field and
/// general or skew-symmetric symmetry.
///
/// skew-symmetric input becomes a SparseSkewMatrix; entries may sit in either strict
/// triangle but not both, and lower entries (i, j, a) are stored as (j, i, -a).
/// general input becomes a DenseMatrix, tagged skew only if it is exactly skew with
/// zero diagonal, has even dimension, and passes verify_skew.
/// Every rejection is a ParseError carrying the 1-based line number.
MatrixMarketData parse_matrix_market(std::istream& in);
MatrixMarketData read_matrix_market(const std::filesystem::path& path);

/// Coordinate format, skew-symmetric symmetry field, strict upper triangle, 1-based,
/// values with 17 significant digits. Reading the output back reproduces the triplets bit for bit.
void write_matrix_market(std::ostream& out, const SparseSkewMatrix& matrix,
                         const std::vector<std::string>& comments = {});
void write_matrix_market(const std::filesystem::path& path, const SparseSkewMatrix& matrix,
                         const std::vector<std::string>& comments = {});
/// Dense input must be exactly skew; it is written through its strict upper triangle.
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& matrix,
                         const std::vector<std::string>& comments = {});

/// n x 1 array (or n-entry coordinate general) real vector.
Vector parse_vector(std::istream& in);
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, const Vector& v);

/// Shortest-safe decimal rendering with the given number of significant digits.
std::string format_double(double value, int significant_digits = 17);

}  // namespace skewkrylov
