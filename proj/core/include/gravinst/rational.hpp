#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace gravinst {

/// Exact rational number p/q with q > 0 and gcd(p, q) = 1.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Parses "p", "p/q" or a finite decimal such as "0.125" or "-1.5e-1".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  Rational operator-() const { return {-num_, den_}; }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  /// "p/q", or "p" for integers.
  std::string str() const;

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Number of the form r + c * sqrt(n) with r, c rational and n a square-free
/// positive integer (n == 1 only when c == 0).
class QuadSurd {
public:
  QuadSurd() = default;
  explicit QuadSurd(Rational r) : rational_(r) {}
  QuadSurd(Rational r, Rational c, std::int64_t radicand);

  /// sqrt(q) for q >= 0, reduced to c * sqrt(n).
  static QuadSurd sqrt_of(const Rational& q);

  const Rational& rational_part() const { return rational_; }
  const Rational& surd_coefficient() const { return coef_; }
  std::int64_t radicand() const { return radicand_; }

  bool is_rational() const { return coef_.is_zero(); }
  bool is_integer() const { return is_rational() && rational_.is_integer(); }
  bool is_zero() const { return is_rational() && rational_.is_zero(); }
  double to_double() const;

  QuadSurd operator-() const;
  /// Sum/difference; throws std::domain_error if the radicands differ and both
  /// surd parts are nonzero (result not representable).
  friend QuadSurd operator+(const QuadSurd& a, const QuadSurd& b);
  friend QuadSurd operator-(const QuadSurd& a, const QuadSurd& b);
  friend QuadSurd operator*(const QuadSurd& a, const Rational& k);
  friend bool operator==(const QuadSurd& a, const QuadSurd& b) = default;

  /// Renders p/q, sqrt(n)/q, k*sqrt(n)/q or p+-sqrt(n)/q.
  std::string str() const;

private:
  Rational rational_{0};
  Rational coef_{0};
  std::int64_t radicand_ = 1;
};

}  // namespace gravinst
