#ifndef CROSM_SCALAR_HPP
#define CROSM_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace crosm {

/// Arbitrary-precision rational; the default scalar of the library.
/// Every structure constant and every orthogonal-family coefficient is
/// rational, so computations in this mode are exact end to end.
/// Expression templates are off so arithmetic results are plain values
/// usable inside generic code.
using Rational =
    boost::multiprecision::number<boost::multiprecision::backends::gmp_rational,
                                  boost::multiprecision::et_off>;
using Integer =
    boost::multiprecision::number<boost::multiprecision::backends::gmp_int,
                                  boost::multiprecision::et_off>;

/// Error raised by malformed user input (bad dimensions, non-positive
/// metric blocks, parameters outside a family's admissible range, ...).
struct input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Error raised when two routes that must agree by construction disagree
/// (e.g. the two exterior-derivative computations). Always a bug.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Raised in exact mode when a family coefficient is irrational for the
/// given parameters (e.g. sqrt(q_eps) in Type BI). Callers may rerun the
/// instance in float mode.
struct irrational_value : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// scalar_traits: the scalar type selects the arithmetic mode. Rational runs
// exact (zero-tolerance comparisons); double runs with explicit tolerances.
// ---------------------------------------------------------------------------

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "exact";

  static Rational from_ratio(long long num, long long den) {
    if (den == 0) throw input_error("rational with zero denominator");
    return Rational(num, den);
  }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static std::string str(const Rational& x) {
    return numerator(x).str() + "/" + denominator(x).str();
  }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "float";

  static double from_ratio(long long num, long long den) {
    if (den == 0) throw input_error("rational with zero denominator");
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double x) { return x; }
  static std::string str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
  }
};

/// The fraction num/den as a scalar of type T.
template <typename T>
T frac(long long num, long long den = 1) {
  return scalar_traits<T>::from_ratio(num, den);
}

template <typename T>
T abs_value(const T& x) {
  using std::abs;
  return abs(x);
}

/// Residual acceptance: exact scalars must vanish identically, floats up
/// to the given tolerance.
template <typename T>
bool within_tolerance(const T& x, double tol) {
  if constexpr (scalar_traits<T>::exact) {
    (void)tol;
    return x == 0;
  } else {
    return std::abs(x) <= tol;
  }
}

/// Pivot test used by the elimination routines. Exact mode: nonzero.
/// Float mode: fixed 1e-12 threshold so pivot choice is deterministic.
template <typename T>
bool usable_pivot(const T& x) {
  if constexpr (scalar_traits<T>::exact) {
    return x != 0;
  } else {
    return std::abs(x) > 1e-12;
  }
}

/// Exact square root of a rational if it exists.
inline std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  if (x == 0) return Rational(0);
  const Integer num = numerator(x);
  const Integer den = denominator(x);
  const Integer sn = sqrt(num);
  const Integer sd = sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rational(sn, sd);
}

/// Square root in the scalar's own mode: exact roots only for Rational
/// (nullopt marks an irrational value, the caller decides whether to
/// switch the computation to float), plain std::sqrt for double.
template <typename T>
std::optional<T> scalar_sqrt(const T& x);

template <>
inline std::optional<Rational> scalar_sqrt<Rational>(const Rational& x) {
  return exact_sqrt(x);
}

template <>
inline std::optional<double> scalar_sqrt<double>(const double& x) {
  if (x < 0) return std::nullopt;
  return std::sqrt(x);
}

}  // namespace crosm

#endif
