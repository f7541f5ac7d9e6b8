#ifndef LCL_COMMON_HPP
#define LCL_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace lcl {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Port = std::uint32_t;
using Label = std::uint64_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

/// Exact probabilities. Enumeration results are dyadic, but the inequality
/// checks multiply them by arbitrary thresholds, so a full rational is used.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// 256-bit binary float for the analytic bound calculators.
using BigFloat = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;
inline constexpr int kBigFloatBits = 256;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InvalidLabeling : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Raised when a rule is asked about a view it does not cover.
class TotalRuleViolation : public Error {
 public:
  TotalRuleViolation(const std::string& what, std::string view_encoding)
      : Error(what), view_(std::move(view_encoding)) {}
  const std::string& view() const { return view_; }

 private:
  std::string view_;
};

/// Exact enumeration is allowed iff b * m <= this many bits.
inline constexpr int kEnumerationBudgetBits = 24;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidParameter(msg);
}

/// log* x with base-2 logarithms: applications of log2 until the value is <= 1.
inline int log_star(double x) {
  int k = 0;
  while (x > 1.0) {
    x = std::log2(x);
    ++k;
  }
  return k;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational& q) { return q.str(); }

}  // namespace lcl

#endif  // LCL_COMMON_HPP
