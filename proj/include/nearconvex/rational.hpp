// Exact scalars, dense vectors and matrices over Q.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace nearconvex {

/// Exact rational scalar. mpq_class keeps numerator/denominator canonical
/// (denominator > 0, gcd = 1, zero is 0/1).
using Rational = mpq_class;

/// Dense rational vector.
using Vec = std::vector<Rational>;

/// Parses "p/q", "p" or a finite decimal such as "-0.25".
Rational parse_rational(std::string_view text);
/// "p/q", or "p" when the denominator is 1.
std::string format_rational(const Rational& value);

Vec zeros(std::size_t n);
Vec unit_vector(std::size_t n, std::size_t i);
Vec make_vec(std::initializer_list<long> values);
Rational dot(const Vec& a, const Vec& b);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Rational& s);
Vec negate(const Vec& a);
Vec concat(const Vec& a, const Vec& b);
bool is_zero(const Vec& a);
/// Scales a nonzero vector by a positive factor so that its entries are
/// coprime integers. Zero vectors are returned unchanged.
Vec primitive(const Vec& a);
/// Same, but returns the positive factor used.
Rational primitive_factor(const Vec& a);
std::string format_vec(const Vec& v);
/// Parses "a,b,c" (rational entries).
Vec parse_vec(std::string_view text);

/// Dense row-major rational matrix with fixed dimensions.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<long>> rows);
  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;
  Vec apply(const Vec& x) const;
  Vec apply_transpose(const Vec& y) const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Block-diagonal matrix [a 0; 0 b].
Matrix block_diag(const Matrix& a, const Matrix& b);
/// [a b] side by side (same row count).
Matrix hstack(const Matrix& a, const Matrix& b);
/// Selects coordinates: result(i, coords[i]) = 1.
Matrix coordinate_selector(std::size_t dim, const std::vector<std::size_t>& coords);

}  // namespace nearconvex
