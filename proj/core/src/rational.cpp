#include "gravinst/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gravinst {
namespace {

using wide = __int128;

std::int64_t narrow(wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

wide wide_gcd(wide a, wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(wide num, wide den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

// Largest s with s*s dividing n; returns n / (s*s) through `rest`.
std::int64_t square_part(std::int64_t n, std::int64_t& rest) {
  std::int64_t s = 1;
  rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    while (rest % (p * p) == 0) {
      rest /= p * p;
      s *= p;
    }
  }
  return s;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  auto trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
  if (trimmed.empty()) throw std::invalid_argument("empty rational literal");

  if (auto slash = trimmed.find('/'); slash != std::string_view::npos) {
    Rational p = parse(trimmed.substr(0, slash));
    Rational q = parse(trimmed.substr(slash + 1));
    if (q.is_zero()) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return p / q;
  }

  std::size_t i = 0;
  bool negative = false;
  if (trimmed[i] == '+' || trimmed[i] == '-') {
    negative = trimmed[i] == '-';
    ++i;
  }
  wide mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false;
  bool in_fraction = false;
  for (; i < trimmed.size(); ++i) {
    char c = trimmed[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      seen_digit = true;
      mantissa = mantissa * 10 + (c - '0');
      if (mantissa > (wide(1) << 100)) throw std::invalid_argument("literal too long: '" + std::string(text) + "'");
      if (in_fraction) ++frac_digits;
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  int exponent = 0;
  if (i < trimmed.size()) {
    if (trimmed[i] != 'e' && trimmed[i] != 'E') throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    std::string rest(trimmed.substr(i + 1));
    std::size_t used = 0;
    try {
      exponent = std::stoi(rest, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
    }
    if (used != rest.size()) throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  int shift = exponent - frac_digits;
  if (shift > 18 || shift < -18) throw std::invalid_argument("exponent out of range in '" + std::string(text) + "'");
  wide num = negative ? -mantissa : mantissa;
  wide den = 1;
  for (int k = 0; k < std::abs(shift); ++k) (shift > 0 ? num : den) *= 10;
  return make_reduced(num, den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(wide(a.num_) * b.den_ + wide(b.num_) * a.den_, wide(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make_reduced(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  wide lhs = wide(a.num_) * b.den_;
  wide rhs = wide(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

QuadSurd::QuadSurd(Rational r, Rational c, std::int64_t radicand) : rational_(r), coef_(c), radicand_(radicand) {
  if (radicand <= 0) throw std::domain_error("surd radicand must be positive");
  std::int64_t rest = 0;
  std::int64_t s = square_part(radicand, rest);
  coef_ = coef_ * Rational(s);
  radicand_ = rest;
  if (radicand_ == 1) {
    rational_ += coef_;
    coef_ = Rational(0);
  }
  if (coef_.is_zero()) radicand_ = 1;
}

QuadSurd QuadSurd::sqrt_of(const Rational& q) {
  if (q < Rational(0)) throw std::domain_error("sqrt of negative rational " + q.str());
  if (q.is_zero()) return QuadSurd(Rational(0));
  // sqrt(p/q) = sqrt(p*q)/q
  wide pq = wide(q.num()) * q.den();
  return QuadSurd(Rational(0), Rational(1, q.den()), narrow(pq));
}

double QuadSurd::to_double() const {
  return rational_.to_double() + coef_.to_double() * std::sqrt(static_cast<double>(radicand_));
}

QuadSurd QuadSurd::operator-() const {
  QuadSurd out = *this;
  out.rational_ = -rational_;
  out.coef_ = -coef_;
  return out;
}

QuadSurd operator+(const QuadSurd& a, const QuadSurd& b) {
  if (a.is_rational()) return QuadSurd(a.rational_ + b.rational_, b.coef_, b.radicand_);
  if (b.is_rational()) return QuadSurd(a.rational_ + b.rational_, a.coef_, a.radicand_);
  if (a.radicand_ != b.radicand_)
    throw std::domain_error("sum of unlike surds is not a quadratic surd");
  QuadSurd out(a.rational_ + b.rational_);
  Rational c = a.coef_ + b.coef_;
  if (!c.is_zero()) out = QuadSurd(out.rational_, c, a.radicand_);
  return out;
}

QuadSurd operator-(const QuadSurd& a, const QuadSurd& b) { return a + (-b); }

QuadSurd operator*(const QuadSurd& a, const Rational& k) {
  if (a.is_rational() || k.is_zero()) return QuadSurd(a.rational_ * k);
  return QuadSurd(a.rational_ * k, a.coef_ * k, a.radicand_);
}

std::string QuadSurd::str() const {
  if (is_rational()) return rational_.str();
  Rational c = coef_;
  bool negative = c < Rational(0);
  if (negative) c = -c;
  std::string surd;
  if (c.num() != 1) surd = std::to_string(c.num()) + "*";
  surd += "sqrt(" + std::to_string(radicand_) + ")";
  if (c.den() != 1) surd += "/" + std::to_string(c.den());
  if (rational_.is_zero()) return negative ? "-" + surd : surd;
  return rational_.str() + (negative ? "-" : "+") + surd;
}

}  // namespace gravinst
