#include "gravinst/mb_engine.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace gravinst {
namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr double kLocTol = 1e-9;

std::string fmt(cplx z) {
  std::ostringstream os;
  os.precision(12);
  if (z.imag() == 0)
    os << z.real();
  else
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// z == -n for some integer n >= 0 (within the location tolerance).
bool nonpositive_integer(cplx z, int& n) {
  if (std::abs(z.imag()) > kLocTol) return false;
  const double r = std::round(z.real());
  if (r > 0 || std::abs(z.real() - r) > kLocTol * std::max(1.0, std::abs(r))) return false;
  n = static_cast<int>(-r);
  return true;
}

bool same_point(cplx a, cplx b) { return std::abs(a - b) <= kLocTol * std::max(1.0, std::abs(a)); }

// a - b is an integer.
bool congruent(cplx a, cplx b) {
  const cplx d = a - b;
  return std::abs(d.imag()) <= kLocTol && std::abs(d.real() - std::round(d.real())) <= kLocTol * std::max(1.0, std::abs(d.real()));
}

struct Contribution {
  int left = 0;   // singular left-pole sources
  int right = 0;  // singular right-pole sources
  int order = 0;
};

Contribution classify(const MBIntegrand& ib, cplx s) {
  Contribution c;
  int n = 0;
  for (const auto& f : ib.numerator) {
    if (!nonpositive_integer(static_cast<double>(f.slope) * s + f.offset, n)) continue;
    ++c.order;
    (f.slope > 0 ? c.left : c.right) += 1;
  }
  for (const auto& f : ib.denominator)
    if (nonpositive_integer(static_cast<double>(f.slope) * s + f.offset, n)) --c.order;
  for (const auto& r : ib.rational) {
    if (!same_point(s, r.root)) continue;
    c.order -= r.power;
    if (r.power < 0) (r.side == Direction::Left ? c.left : c.right) += 1;
  }
  return c;
}

ld lgamma_real(ld x, int& sign) {
  sign = 1;
  if (x < 0) {
    const ld fl = std::floor(x);
    if ((static_cast<long long>(fl) % 2) != 0) sign = -1;
  }
  return std::lgamma(x);
}

cld log_gamma_at(cplx z) {
  if (z.imag() == 0) {
    int sign = 1;
    const ld v = lgamma_real(static_cast<ld>(z.real()), sign);
    return {v, sign < 0 ? std::numbers::pi_v<ld> : 0.0L};
  }
  const cplx v = specfun::lgamma(z);
  return {v.real(), v.imag()};
}

cld polygamma_at(int n, cplx z) {
  if (z.imag() == 0) return specfun::polygamma_l(n, static_cast<ld>(z.real()));
  const cplx v = specfun::polygamma(n, z);
  return {v.real(), v.imag()};
}

ld factorial_l(int n) {
  ld f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Residue at s0 of the integrand as a polynomial in L = ln x + i rotation:
// returns coefficients of L^q, q = 0..order-1.
std::vector<cld> residue_at(const MBIntegrand& ib, cplx s0, int order, cld L) {
  const int k = order;
  cld log_v = std::log(cld(ib.scale.real(), ib.scale.imag()));
  std::vector<cld> c(static_cast<std::size_t>(k), cld(0));  // c[j] for j = 1..k-1

  auto add_gamma = [&](const GammaFactor& f, int e) {
    const cplx z0 = static_cast<double>(f.slope) * s0 + f.offset;
    const ld sigma = f.slope;
    int n = 0;
    if (nonpositive_integer(z0, n)) {
      // Gamma(-n + u) = u^{-1} (-1)^n / n! * Gamma(1 + u) / prod_{m<=n} (1 - u/m), u = sigma eps
      const ld log_h = -std::lgamma(static_cast<ld>(n) + 1);
      const bool negative = ((n % 2) != 0) != (f.slope < 0);
      log_v += static_cast<ld>(e) * cld(log_h, negative ? std::numbers::pi_v<ld> : 0.0L);
      for (int j = 1; j < k; ++j) {
        ld harmonic = 0;
        for (int m = 1; m <= n; ++m) harmonic += std::pow(static_cast<ld>(m), -j);
        const ld coeff = specfun::polygamma_l(j - 1, 1.0L) + factorial_l(j - 1) * harmonic;
        c[static_cast<std::size_t>(j)] += static_cast<ld>(e) * std::pow(sigma, static_cast<ld>(j)) * coeff;
      }
      return;
    }
    log_v += static_cast<ld>(e) * log_gamma_at(z0);
    for (int j = 1; j < k; ++j)
      c[static_cast<std::size_t>(j)] += static_cast<ld>(e) * std::pow(sigma, static_cast<ld>(j)) * polygamma_at(j - 1, z0);
  };
  for (const auto& f : ib.numerator) add_gamma(f, 1);
  for (const auto& f : ib.denominator) add_gamma(f, -1);
  for (const auto& r : ib.rational) {
    if (same_point(s0, r.root)) continue;  // exact power of eps
    const cld d = cld(s0.real(), s0.imag()) - cld(r.root.real(), r.root.imag());
    log_v += static_cast<ld>(r.power) * std::log(d);
    for (int j = 1; j < k; ++j) {
      const ld sgn = (j % 2 == 1) ? 1.0L : -1.0L;
      c[static_cast<std::size_t>(j)] += static_cast<ld>(r.power) * sgn * factorial_l(j - 1) / std::pow(d, static_cast<ld>(j));
    }
  }

  // exp(sum_j c_j eps^j / j!) = sum_m e_m eps^m
  std::vector<cld> g(static_cast<std::size_t>(k), cld(0));
  for (int j = 1; j < k; ++j) g[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)] / factorial_l(j);
  std::vector<cld> e(static_cast<std::size_t>(k), cld(0));
  e[0] = 1;
  for (int m = 1; m < k; ++m) {
    cld acc = 0;
    for (int j = 1; j <= m; ++j) acc += static_cast<ld>(j) * g[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(m - j)];
    e[static_cast<std::size_t>(m)] = acc / static_cast<ld>(m);
  }

  const cld base = std::exp(log_v - cld(s0.real(), s0.imag()) * L);
  std::vector<cld> out(static_cast<std::size_t>(k));
  for (int q = 0; q < k; ++q) {
    const ld sgn = (q % 2 == 0) ? 1.0L : -1.0L;
    out[static_cast<std::size_t>(q)] = base * e[static_cast<std::size_t>(k - 1 - q)] * sgn / factorial_l(q);
  }
  return out;
}

// One merged chain of poles on one side.
struct Chain {
  cplx head;          // first location (largest Re for left chains)
  int span = 1;       // levels beyond which the order no longer changes
  int eventual = 0;   // order far down the chain
};

std::vector<Chain> build_chains(const MBIntegrand& ib, Direction dir) {
  const int dir_slope = dir == Direction::Left ? 1 : -1;
  // Gamma(slope s + d) is singular from s = -d / slope onwards.
  std::vector<cplx> bases;
  for (const auto& f : ib.numerator)
    if (f.slope == dir_slope) bases.push_back(-f.offset / static_cast<double>(f.slope));
  for (const auto& r : ib.rational)
    if (r.power < 0 && r.side == dir) bases.push_back(r.root);

  // a comes before b when walking the chain away from its head
  auto precedes = [&](cplx a, cplx b) { return dir == Direction::Left ? a.real() > b.real() : a.real() < b.real(); };

  std::vector<Chain> chains;
  std::vector<std::vector<cplx>> members;
  for (cplx b : bases) {
    bool placed = false;
    for (std::size_t i = 0; i < chains.size(); ++i) {
      if (!congruent(b, chains[i].head)) continue;
      if (precedes(b, chains[i].head)) chains[i].head = b;
      members[i].push_back(b);
      placed = true;
      break;
    }
    if (!placed) {
      chains.push_back({b, 1, 0});
      members.push_back({b});
    }
  }
  for (std::size_t i = 0; i < chains.size(); ++i) {
    Chain& ch = chains[i];
    auto level = [&](cplx p) { return static_cast<int>(std::lround(std::abs((ch.head - p).real()))); };
    int span = 1;
    for (cplx b : members[i]) span = std::max(span, level(b) + 1);
    int eventual = 0;
    for (const auto& f : ib.numerator) {
      const cplx b = -f.offset / static_cast<double>(f.slope);
      if (f.slope == dir_slope && congruent(b, ch.head)) ++eventual;
    }
    for (const auto& f : ib.denominator) {
      const cplx b = -f.offset / static_cast<double>(f.slope);
      if (!congruent(b, ch.head)) continue;
      if (f.slope == dir_slope) {
        --eventual;
        if (!precedes(b, ch.head)) span = std::max(span, level(b) + 1);
      } else if (!precedes(b, ch.head)) {
        // zeros extending the other way meet this chain only near its head
        span = std::max(span, level(b) + 1);
      }
    }
    for (const auto& r : ib.rational)
      if (congruent(r.root, ch.head) && !precedes(r.root, ch.head)) span = std::max(span, level(r.root) + 1);
    ch.span = span;
    ch.eventual = eventual;
  }
  return chains;
}

cplx chain_point(const Chain& ch, Direction dir, int n) {
  return dir == Direction::Left ? ch.head - static_cast<double>(n) : ch.head + static_cast<double>(n);
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }

std::string to_string(IntegrandKind kind) {
  switch (kind) {
    case IntegrandKind::G_2_4_1_2: return "G_2_4_1_2";
    case IntegrandKind::G_2_4_2_1: return "G_2_4_2_1";
    case IntegrandKind::G_2_4_3_2: return "G_2_4_3_2";
    case IntegrandKind::G_2_4_4_1: return "G_2_4_4_1";
    case IntegrandKind::G_2_4_4_0: return "G_2_4_4_0";
  }
  return "?";
}

cplx MBIntegrand::log_eval(cplx s, double x) const {
  if (!(x > 0)) throw std::invalid_argument("integrand: x must be positive");
  cplx acc = std::log(scale);
  for (const auto& f : numerator) acc += specfun::lgamma(static_cast<double>(f.slope) * s + f.offset);
  for (const auto& f : denominator) acc -= specfun::lgamma(static_cast<double>(f.slope) * s + f.offset);
  for (const auto& r : rational) acc += static_cast<double>(r.power) * std::log(s - r.root);
  return acc - s * cplx(std::log(x), rotation);
}

cplx MBIntegrand::eval(cplx s, double x) const {
  for (const auto& f : denominator)
    if (specfun::is_nonpositive_integer(static_cast<double>(f.slope) * s + f.offset)) return 0;
  for (const auto& r : rational)
    if (r.power > 0 && s == r.root) return 0;
  return std::exp(log_eval(s, x));
}

int MBIntegrand::left_degree() const {
  int deg = 0;
  for (const auto& f : numerator) deg += f.slope;
  for (const auto& f : denominator) deg -= f.slope;
  return deg;
}

MBIntegrand meijer_integrand(int m, int n, const std::vector<cplx>& a, const std::vector<cplx>& b, double rotation) {
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(b.size());
  if (m < 0 || m > q || n < 0 || n > p) throw std::invalid_argument("meijer_integrand: need 0 <= m <= q and 0 <= n <= p");
  MBIntegrand ib;
  ib.rotation = rotation;
  for (int j = 0; j < q; ++j) {
    if (j < m)
      ib.numerator.push_back({1, b[static_cast<std::size_t>(j)]});
    else
      ib.denominator.push_back({-1, 1.0 - b[static_cast<std::size_t>(j)]});
  }
  for (int j = 0; j < p; ++j) {
    if (j < n)
      ib.numerator.push_back({-1, 1.0 - a[static_cast<std::size_t>(j)]});
    else
      ib.denominator.push_back({1, a[static_cast<std::size_t>(j)]});
  }
  std::ostringstream os;
  os << "G^{" << m << "," << n << "}_{" << p << "," << q << "}";
  if (rotation != 0) os << (rotation > 0 ? "(x e^{+i pi})" : "(x e^{-i pi})");
  ib.label = os.str();
  return ib;
}

MBIntegrand build_integrand(IntegrandKind kind, const DerivedParams& dp, std::array<int, 4> b_order, double rotation,
                            bool swap_a) {
  if (dp.alpha1_zero) throw std::domain_error("build_integrand: alpha_1 = 0 has no Meijer-G basis; use the power-law roots");
  std::array<int, 4> check = b_order;
  std::sort(check.begin(), check.end());
  if (check != std::array<int, 4>{0, 1, 2, 3}) throw std::invalid_argument("build_integrand: b_order must be a permutation of 0..3");
  std::vector<cplx> a{1.0 + dp.a_star[0], 1.0 + dp.a_star[1]};
  if (swap_a) std::swap(a[0], a[1]);
  std::vector<cplx> b;
  for (int i : b_order) b.emplace_back(dp.b_star[static_cast<std::size_t>(i)]);
  int m = 1, n = 2;
  switch (kind) {
    case IntegrandKind::G_2_4_1_2: m = 1; n = 2; break;
    case IntegrandKind::G_2_4_2_1: m = 2; n = 1; break;
    case IntegrandKind::G_2_4_3_2: m = 3; n = 2; break;
    case IntegrandKind::G_2_4_4_1: m = 4; n = 1; break;
    case IntegrandKind::G_2_4_4_0: m = 4; n = 0; break;
  }
  MBIntegrand ib = meijer_integrand(m, n, a, b, rotation);
  std::ostringstream os;
  os << ib.label << " b-order " << b_order[0] + 1 << b_order[1] + 1 << b_order[2] + 1 << b_order[3] + 1
     << (swap_a ? " a swapped" : "");
  ib.label = os.str();
  return ib;
}

MBIntegrand remove_cancellations(const MBIntegrand& ib) {
  MBIntegrand out = ib;
  std::vector<bool> used(out.denominator.size(), false);
  for (auto& num : out.numerator) {
    if (num.slope != 1) continue;
    for (std::size_t j = 0; j < out.denominator.size(); ++j) {
      auto& den = out.denominator[j];
      if (used[j] || den.slope != -1) continue;
      int k = 0;
      // -(d1 + d2) = K >= 0  <=>  d1 + d2 = -K
      if (!nonpositive_integer(num.offset + den.offset, k)) continue;
      num.offset += static_cast<double>(k + 1);
      den.offset += static_cast<double>(k + 1);
      if (k % 2 == 0) out.scale = -out.scale;
      used[j] = true;
      break;
    }
  }
  if (out.scale != ib.scale || out.numerator.size() != ib.numerator.size()) out.label = ib.label + " (rewritten)";
  return out;
}

int pole_order_at(const MBIntegrand& ib, cplx s) {
  const Contribution c = classify(ib, s);
  if (c.left > 0 && c.right > 0)
    throw std::domain_error("integrand " + ib.label + ": left and right pole chains collide at s = " + fmt(s));
  return std::max(0, c.order);
}

std::vector<PoleInfo> enumerate_poles(const MBIntegrand& ib, Direction direction, int max_chain) {
  if (max_chain < 1) throw std::invalid_argument("enumerate_poles: max_chain must be >= 1");
  std::vector<PoleInfo> out;
  const auto chains = build_chains(ib, direction);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    for (int n = 0; n < max_chain; ++n) {
      const cplx s = chain_point(chains[i], direction, n);
      const int order = pole_order_at(ib, s);
      if (order > 0) out.push_back({s, order, static_cast<int>(i)});
    }
  }
  return out;
}

ResidueSum residue_sum(const MBIntegrand& ib, Direction direction, double x, const SeriesOptions& opts) {
  if (!(x > 0) || !std::isfinite(x)) throw std::invalid_argument("residue_sum: x must be positive and finite");
  const int deg = ib.left_degree();
  const int side_deg = direction == Direction::Left ? deg : -deg;
  bool asymptotic = false;
  if (side_deg == 0) {
    if (direction == Direction::Left && x >= 1)
      throw std::domain_error("residue_sum: left series of " + ib.label + " diverges for x >= 1; use the right expansion");
    if (direction == Direction::Right && x <= 1)
      throw std::domain_error("residue_sum: right series of " + ib.label + " diverges for x <= 1; use the left expansion");
  } else if (side_deg < 0) {
    asymptotic = true;
    if (direction == Direction::Right && x < kRightSumMinX)
      throw std::domain_error("residue_sum: right (near-infinity) series of " + ib.label +
                              " is only asymptotic and needs x >= 1; use the left expansion");
    if (direction == Direction::Left && x > 1.0 / kRightSumMinX)
      throw std::domain_error("residue_sum: left series of " + ib.label + " is only asymptotic here; use the right expansion");
  }

  const cld L(std::log(static_cast<ld>(x)), ib.rotation);
  ResidueSum out;
  std::vector<cld> parts;
  ld abs_sum = 0;
  ld loc_sum = 0;  // pole positions are doubles: x^{-s0} inherits |s0 L| eps
  ld tail = 0;
  bool all_stopped = true;
  int terms = 0;

  for (const Chain& ch : build_chains(ib, direction)) {
    cld partial = 0;
    int small = 0;
    ld last_abs = -1;
    bool stopped = false;
    for (int n = 0; n < opts.max_terms; ++n) {
      const cplx s0 = chain_point(ch, direction, n);
      const int order = pole_order_at(ib, s0);
      cld level = 0;
      std::vector<cld> res;
      if (order > 0) {
        res = residue_at(ib, s0, order, L);
        cld lq = 1;
        for (std::size_t q = 0; q < res.size(); ++q, lq *= L) level += res[q] * lq;
      }
      const ld mag = std::abs(level);
      if (asymptotic && n >= ch.span && last_abs >= 0 && mag > last_abs) {
        // smallest term passed: optimal truncation
        tail += last_abs;
        all_stopped = false;
        stopped = true;
        break;
      }
      if (order > 0) {
        if (parts.size() < res.size()) parts.resize(res.size(), cld(0));
        for (std::size_t q = 0; q < res.size(); ++q) parts[q] += res[q];
        out.max_order = std::max(out.max_order, order);
        ++out.poles_used;
        partial += level;
        abs_sum += mag;
        loc_sum += mag * (1 + static_cast<ld>(std::abs(s0)) * std::abs(L));
      }
      ++terms;
      if (n + 1 < ch.span) continue;
      if (ch.eventual <= 0) {
        stopped = true;
        break;
      }
      if (order > 0) last_abs = mag;
      if (mag <= opts.stop_eps * std::abs(partial)) {
        if (++small == 3) {
          tail += mag;
          stopped = true;
          break;
        }
      } else {
        small = 0;
      }
    }
    if (!stopped) {
      all_stopped = false;
      tail += last_abs > 0 ? last_abs : 0;
    }
    const ld sg = direction == Direction::Left ? 1.0L : -1.0L;
    out.chain_sums.emplace_back(ch.head, cplx(static_cast<double>(sg * partial.real()), static_cast<double>(sg * partial.imag())));
  }

  cld total = 0;
  cld lq = 1;
  for (std::size_t q = 0; q < parts.size(); ++q, lq *= L) total += parts[q] * lq;
  const ld sign = direction == Direction::Left ? 1.0L : -1.0L;
  out.value = cplx(static_cast<double>(sign * total.real()), static_cast<double>(sign * total.imag()));
  out.log_parts.reserve(parts.size());
  for (const auto& p : parts) out.log_parts.emplace_back(static_cast<double>(sign * p.real()), static_cast<double>(sign * p.imag()));
  out.terms_used = terms;
  out.abs_error_estimate = static_cast<double>(64 * LDBL_EPSILON * abs_sum + DBL_EPSILON * loc_sum + tail) +
                           4 * DBL_EPSILON * std::abs(out.value);
  out.converged = all_stopped && out.abs_error_estimate <= opts.tol * std::max(1.0, std::abs(out.value));
  return out;
}

}  // namespace gravinst
