#pragma once

#include "nearconvex/rational.hpp"

#include <compare>
#include <string>

namespace nearconvex {

/// Element of the extended real line [-inf, +inf] with exact finite part.
class ExtReal {
 public:
  enum class Kind { MinusInf, Finite, PlusInf };

  ExtReal() = default;
  ExtReal(const Rational& v) : kind_(Kind::Finite), value_(v) {}  // NOLINT: implicit by design of the numeric tower
  ExtReal(long v) : kind_(Kind::Finite), value_(v) {}             // NOLINT
  static ExtReal plus_inf() { return ExtReal(Kind::PlusInf); }
  static ExtReal minus_inf() { return ExtReal(Kind::MinusInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_plus_inf() const { return kind_ == Kind::PlusInf; }
  bool is_minus_inf() const { return kind_ == Kind::MinusInf; }
  /// Only meaningful when finite.
  const Rational& value() const { return value_; }

  /// "p/q", "inf" or "-inf".
  std::string str() const;
  static ExtReal parse(const std::string& s);

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (a.kind_ != Kind::Finite) return std::strong_ordering::equal;
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Addition with the inf-convolution convention +inf + (-inf) = +inf.
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator-(const ExtReal& a);
  friend ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

 private:
  explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Rational value_ = 0;
};

inline ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.is_plus_inf() || b.is_plus_inf()) return ExtReal::plus_inf();
  if (a.is_minus_inf() || b.is_minus_inf()) return ExtReal::minus_inf();
  return ExtReal(Rational(a.value_ + b.value_));
}

inline ExtReal operator-(const ExtReal& a) {
  if (a.is_plus_inf()) return ExtReal::minus_inf();
  if (a.is_minus_inf()) return ExtReal::plus_inf();
  return ExtReal(Rational(-a.value_));
}

inline std::string ExtReal::str() const {
  switch (kind_) {
    case Kind::PlusInf: return "inf";
    case Kind::MinusInf: return "-inf";
    case Kind::Finite: break;
  }
  return format_rational(value_);
}

inline ExtReal ExtReal::parse(const std::string& s) {
  if (s == "inf" || s == "+inf") return plus_inf();
  if (s == "-inf") return minus_inf();
  return ExtReal(parse_rational(s));
}

}  // namespace nearconvex
