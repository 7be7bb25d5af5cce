#include "nearconvex/rational.hpp"

#include "nearconvex/error.hpp"

#include <algorithm>
#include <cctype>

namespace nearconvex {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw Error(ErrorKind::Parse, "bad rational '" + std::string(text) + "'");
    mpz_class d(std::string(den), 10);
    if (d == 0) throw Error(ErrorKind::Parse, "zero denominator in '" + std::string(text) + "'");
    value = Rational(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else if (auto dot_pos = body.find('.'); dot_pos != std::string_view::npos) {
    auto whole = body.substr(0, dot_pos);
    auto frac = body.substr(dot_pos + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) || (whole.empty() && frac.empty())) {
      throw Error(ErrorKind::Parse, "bad decimal '" + std::string(text) + "'");
    }
    mpz_class num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    value = Rational(num, den);
    value.canonicalize();
  } else {
    if (!all_digits(body)) throw Error(ErrorKind::Parse, "bad rational '" + std::string(text) + "'");
    value = Rational(mpz_class(std::string(body), 10));
  }
  return negative ? Rational(-value) : value;
}

std::string format_rational(const Rational& value) { return value.get_str(); }

Vec zeros(std::size_t n) { return Vec(n, Rational(0)); }

Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v = zeros(n);
  v[i] = 1;
  return v;
}

Vec make_vec(std::initializer_list<long> values) {
  Vec v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

Rational dot(const Vec& a, const Vec& b) {
  require_dim(b.size(), a.size(), "dot");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  require_dim(b.size(), a.size(), "add");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  require_dim(b.size(), a.size(), "sub");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec& a, const Rational& s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

Vec negate(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Vec concat(const Vec& a, const Vec& b) {
  Vec r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return sgn(x) == 0; });
}

Rational primitive_factor(const Vec& a) {
  mpz_class lcm_den = 1;
  mpz_class gcd_num = 0;
  for (const auto& x : a) {
    if (sgn(x) == 0) continue;
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
    mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), x.get_num_mpz_t());
  }
  if (gcd_num == 0) return 1;
  Rational f(lcm_den, gcd_num);
  f.canonicalize();
  return f;
}

Vec primitive(const Vec& a) {
  if (is_zero(a)) return a;
  return scale(a, primitive_factor(a));
}

std::string format_vec(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_rational(v[i]);
  }
  return s;
}

Vec parse_vec(std::string_view text) {
  Vec v;
  std::string_view s = trim(text);
  if (s.empty()) return v;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    v.push_back(parse_rational(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return v;
}

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    for (long x : r) data_.emplace_back(x);
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_dim(rows[r].size(), cols, "Matrix::from_rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Vec Matrix::row(std::size_t r) const { return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

Vec Matrix::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vec Matrix::apply(const Vec& x) const {
  require_dim(x.size(), cols_, "Matrix::apply");
  Vec y = zeros(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const auto& a = (*this)(r, c);
      if (sgn(a) != 0 && sgn(x[c]) != 0) y[r] += a * x[c];
    }
  }
  return y;
}

Vec Matrix::apply_transpose(const Vec& y) const {
  require_dim(y.size(), rows_, "Matrix::apply_transpose");
  Vec x = zeros(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (sgn(y[r]) == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c) x[c] += (*this)(r, c) * y[r];
  }
  return x;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  require_dim(other.rows_, cols_, "Matrix product");
  Matrix m(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const auto& a = (*this)(r, k);
      if (sgn(a) == 0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) m(r, c) += a * other(k, c);
    }
  return m;
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  return m;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require_dim(b.rows(), a.rows(), "hstack");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

Matrix coordinate_selector(std::size_t dim, const std::vector<std::size_t>& coords) {
  Matrix m(coords.size(), dim);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] >= dim) throw Error(ErrorKind::DimensionMismatch, "coordinate index out of range");
    m(i, coords[i]) = 1;
  }
  return m;
}

}  // namespace nearconvex
