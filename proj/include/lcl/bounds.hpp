#ifndef LCL_BOUNDS_HPP
#define LCL_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcl/common.hpp"

namespace lcl {

// ---------------------------------------------------------------------------
// Zero-round optimum
// ---------------------------------------------------------------------------

struct ZeroRoundOptimum {
  double value = 1;                  // min_D sum_i D(i)^(delta+1)
  std::vector<double> distribution;  // argmin
  int iterations = 0;
};

/// Euclidean projection onto the probability simplex.
inline std::vector<double> project_to_simplex(std::vector<double> y) {
  std::vector<double> u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0, theta = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double cand = (cum - 1) / static_cast<double>(j + 1);
    if (u[j] - cand > 0) theta = cand;
  }
  for (auto& x : y) x = std::max(x - theta, 0.0);
  return y;
}

/// Failure probability of a 0-round algorithm that picks color i with
/// probability D(i): all delta neighbors agree with v.
inline double zero_round_failure(const std::vector<double>& D, int delta) {
  double s = 0;
  for (double x : D) s += std::pow(x, delta + 1);
  return s;
}

/// Minimizes the convex objective by projected gradient descent with
/// Armijo backtracking, from a deliberately skewed start.
inline ZeroRoundOptimum zero_round_optimum(int c, int delta, double tol = 1e-15, int max_iter = 100000) {
  require(c >= 1, "palette must be nonempty");
  require(delta >= 1, "delta must be positive");
  ZeroRoundOptimum out;
  if (c == 1) {
    out.distribution = {1.0};
    return out;
  }
  std::vector<double> D(static_cast<std::size_t>(c));
  const double norm = c * (c + 1) / 2.0;
  for (int i = 0; i < c; ++i) D[i] = (i + 1) / norm;
  double f = zero_round_failure(D, delta);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    std::vector<double> grad(D.size());
    for (std::size_t i = 0; i < D.size(); ++i) grad[i] = (delta + 1) * std::pow(D[i], delta);
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<double> y(D.size());
      for (std::size_t i = 0; i < D.size(); ++i) y[i] = D[i] - step * grad[i];
      auto cand = project_to_simplex(std::move(y));
      double decrease = 0;
      for (std::size_t i = 0; i < D.size(); ++i) decrease += grad[i] * (D[i] - cand[i]);
      const double fc = zero_round_failure(cand, delta);
      if (fc <= f - 1e-4 * decrease) {
        double change = 0;
        for (std::size_t i = 0; i < D.size(); ++i) change = std::max(change, std::abs(cand[i] - D[i]));
        D = std::move(cand);
        f = fc;
        moved = change > tol;
        step *= 2;
        break;
      }
      step /= 2;
    }
    out.iterations = it + 1;
    if (!moved) break;
  }
  out.value = f;
  out.distribution = std::move(D);
  return out;
}

// ---------------------------------------------------------------------------
// Probability recurrence
// ---------------------------------------------------------------------------

inline Rational rational_pow(const Rational& x, unsigned long e) {
  return Rational(boost::multiprecision::pow(numerator(x), e), boost::multiprecision::pow(denominator(x), e));
}

inline BigInt recurrence_exponent(int delta, int t) {
  return boost::multiprecision::pow(BigInt(delta + 1), static_cast<unsigned>(2 * t + 1));
}

/// (p0 / ((delta+1) c0))^((delta+1)^(2t+1)), exact.
inline Rational recurrence_bound(std::uint64_t c0, const Rational& p0, int t, int delta = 4) {
  require(c0 >= 1 && t >= 0 && delta >= 1, "invalid recurrence parameters");
  require(p0 >= 0 && p0 <= 1, "p0 must be a probability");
  const Rational base = p0 / Rational(BigInt(delta + 1) * BigInt(c0));
  return rational_pow(base, recurrence_exponent(delta, t).convert_to<unsigned long>());
}

/// The same value reached by 2t+1 steps x <- x^(delta+1) from p0/((delta+1)c0).
inline Rational recurrence_bound_iterated(std::uint64_t c0, const Rational& p0, int t, int delta = 4) {
  Rational x = p0 / Rational(BigInt(delta + 1) * BigInt(c0));
  for (int i = 0; i < 2 * t + 1; ++i) x = rational_pow(x, static_cast<unsigned long>(delta + 1));
  return x;
}

/// Relaxed sequence r_1 = p0, r_{i+1} = (r_i / ((delta+1) c0))^(delta+1),
/// evaluated at i = 2t+1. It dominates the closed form.
inline Rational recurrence_relaxed(std::uint64_t c0, const Rational& p0, int t, int delta = 4) {
  const Rational scale(BigInt(delta + 1) * BigInt(c0));
  Rational r = p0;
  for (int i = 1; i < 2 * t + 1; ++i) r = rational_pow(r / scale, static_cast<unsigned long>(delta + 1));
  return r;
}

/// Intermediate bound of the induction: p0^((delta+1)^(i+1)) / ((delta+1)c0)^(sum_{j=1}^{i} (delta+1)^j)
/// at i = 2t.
inline Rational recurrence_induction_bound(std::uint64_t c0, const Rational& p0, int t, int delta = 4) {
  const BigInt k = delta + 1;
  BigInt sum = 0;
  for (int j = 1; j <= 2 * t; ++j) sum += boost::multiprecision::pow(k, static_cast<unsigned>(j));
  const Rational num = rational_pow(p0, recurrence_exponent(delta, t).convert_to<unsigned long>());
  const Rational den = rational_pow(Rational(k * BigInt(c0)), sum.convert_to<unsigned long>());
  return num / den;
}

/// One step of the unrelaxed recurrence: from p_{t-1} and the palettes
/// c_t, c_hat_t, returns {p_hat_{t-1}, p_t} with
/// p_hat = (p_{t-1}/delta)^delta / c_hat^(delta-1) and
/// p_t = (p_hat/(delta+1))^(delta+1) / c_t^delta.
inline std::pair<Rational, Rational> recurrence_step(const Rational& p_prev, const BigInt& c_t, const BigInt& c_hat,
                                                     int delta = 4) {
  const auto d = static_cast<unsigned long>(delta);
  const Rational p_hat = rational_pow(p_prev / Rational(delta), d) / Rational(boost::multiprecision::pow(c_hat, delta - 1));
  const Rational p_t = rational_pow(p_hat / Rational(delta + 1), d + 1) / Rational(boost::multiprecision::pow(c_t, delta));
  return {p_hat, p_t};
}

// ---------------------------------------------------------------------------
// Global bounds
// ---------------------------------------------------------------------------

/// log^(i) applied to n = 2^log2n, base 2. Throws when an argument inside
/// the tower is <= 1.
inline BigFloat iterated_log2_from_log2n(const BigFloat& log2n, int i) {
  require(i >= 1, "iteration count must be positive");
  BigFloat x = log2n;
  for (int k = 1; k < i; ++k) {
    if (x <= 1) throw DomainError("iterated logarithm undefined: argument <= 1 inside the tower");
    x = boost::multiprecision::log2(x);
  }
  return x;
}

/// log* with base-2 logarithms for n = 2^log2n.
inline int log_star_from_log2n(const BigFloat& log2n) {
  if (log2n <= 0) return 0;
  int k = 1;
  BigFloat x = log2n;
  while (x > 1) {
    x = boost::multiprecision::log2(x);
    ++k;
  }
  return k;
}

struct GlobalBound {
  BigFloat value;       // (1 - 1/log^(2b) n)^(n^(1/(3(2t+1)))) + 1/(2 n^(1/3))
  BigFloat relaxed;     // e^(-n^(1/(3(2t+1))) / log log n) + 1/(2 n^(1/3))
  BigFloat additive;    // 1/(2 n^(1/3))
  BigFloat condition;   // n^(1/(3(2t+1))) / log log n

  nlohmann::ordered_json to_json() const {
    return {{"value", value.convert_to<double>()},
            {"relaxed", relaxed.convert_to<double>()},
            {"additive", additive.convert_to<double>()},
            {"condition", condition.convert_to<double>()},
            {"precision_bits", kBigFloatBits}};
  }
};

inline GlobalBound global_success_upper_bound(const BigFloat& log2n, const BigFloat& t, int b) {
  require(b >= 1, "b must be at least 1");
  require(t >= 0, "t must be non-negative");
  const BigFloat L = iterated_log2_from_log2n(log2n, 2 * b);
  if (L <= 1) throw DomainError("log^(2b) n must exceed 1");
  const BigFloat loglog = iterated_log2_from_log2n(log2n, 2);
  if (loglog <= 0) throw DomainError("log log n must be positive");
  GlobalBound g;
  const BigFloat expo = boost::multiprecision::exp2(log2n / (3 * (2 * t + 1)));
  g.additive = boost::multiprecision::exp2(-log2n / 3 - 1);
  g.value = boost::multiprecision::exp(expo * boost::multiprecision::log1p(-1 / L)) + g.additive;
  g.relaxed = boost::multiprecision::exp(-expo / loglog) + g.additive;
  g.condition = expo / loglog;
  return g;
}

inline GlobalBound global_success_upper_bound(std::uint64_t n, const BigFloat& t, int b) {
  require(n >= 2, "n must be at least 2");
  return global_success_upper_bound(BigFloat(boost::multiprecision::log2(BigFloat(n))), t, b);
}

struct CollisionBound {
  BigFloat value;   // C(n^(1/3), 2) / n
  BigFloat limit;   // 1 / (2 n^(1/3))
  bool holds = false;
};

inline CollisionBound id_collision_bound(std::uint64_t n) {
  require(n >= 8, "n must be at least 8");
  const BigFloat nn(n);
  const BigFloat x = boost::multiprecision::cbrt(nn);
  CollisionBound c;
  c.value = x * (x - 1) / 2 / nn;
  c.limit = 1 / (2 * x);
  c.holds = c.value < c.limit;
  return c;
}

/// Palette c_0 reached from c_t after `steps` speedup rounds, each mapping
/// c to 2^(delta * 2^(2c)). Throws DomainError once an exponent passes max_bits.
inline BigInt palette_tower(const BigInt& c_t, int steps, int delta = 4, unsigned max_bits = 1u << 20) {
  require(steps >= 0, "steps must be non-negative");
  BigInt c = c_t;
  for (int i = 0; i < steps; ++i) {
    auto bits = [max_bits](const BigInt& e) {
      if (e > max_bits) throw DomainError("palette size exceeds 2^" + std::to_string(max_bits));
      BigInt out = 1;
      out <<= e.convert_to<unsigned>();
      return out;
    };
    c = bits(delta * bits(2 * c));
  }
  return c;
}

inline std::string format_float(const BigFloat& x, int digits = 20) {
  return x.str(digits, std::ios_base::scientific);
}

/// {inputs, value, precision_bits}; exact values report precision_bits = 0.
inline nlohmann::ordered_json bound_json(nlohmann::ordered_json inputs, const Rational& value) {
  return {{"inputs", std::move(inputs)},
          {"value", value.str()},
          {"value_approx", BigFloat(value).convert_to<double>()},
          {"precision_bits", 0}};
}

inline nlohmann::ordered_json bound_json(nlohmann::ordered_json inputs, const BigFloat& value) {
  return {{"inputs", std::move(inputs)}, {"value", format_float(value)}, {"precision_bits", kBigFloatBits}};
}

}  // namespace lcl

#endif  // LCL_BOUNDS_HPP
