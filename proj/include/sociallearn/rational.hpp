#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "sociallearn/error.hpp"

namespace sociallearn {

/// Exact rational number in lowest terms with a positive denominator.
///
/// A thin value wrapper over GMP's mpq_class: every probability, belief and
/// payoff in the library is one of these, so comparisons are exact and ties
/// are real ties.
class Rational {
 public:
  Rational() = default;
  Rational(int value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long numerator, long denominator) {
    require(denominator != 0, ErrorCode::InvalidArgument, "zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }
  explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

  /// Accepts "p/q", "p" and an optional leading sign. Whitespace is not allowed.
  static Rational parse(std::string_view text) {
    auto valid_integer = [](std::string_view s, bool allow_sign) {
      if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s) {
        if (c < '0' || c > '9') return false;
      }
      return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!valid_integer(num, true) || !valid_integer(den, false)) {
      throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
    }
    std::string n(num);
    if (!n.empty() && n.front() == '+') n.erase(0, 1);
    mpz_class zn(n, 10);
    mpz_class zd(std::string(den), 10);
    if (zd == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    mpq_class q(zn, zd);
    q.canonicalize();
    return Rational(std::move(q));
  }

  /// Canonical text: "p/q" in lowest terms, or "p" for integers.
  std::string str() const { return value_.get_str(10); }

  double to_double() const { return value_.get_d(); }
  const mpq_class& raw() const noexcept { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  int sign() const { return sgn(value_); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    require(!o.is_zero(), ErrorCode::InvalidArgument, "division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  for (unsigned k = 0; k < exponent; ++k) result *= base;
  return result;
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational midpoint(const Rational& a, const Rational& b) { return (a + b) / Rational(2); }

}  // namespace sociallearn

template <>
struct std::hash<sociallearn::Rational> {
  std::size_t operator()(const sociallearn::Rational& r) const { return std::hash<std::string>{}(r.str()); }
};
