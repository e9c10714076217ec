#pragma once

#include "error.hpp"

#include <cmath>
#include <concepts>
#include <numbers>

namespace tkcopula {

//! An increasing map from the real line onto (0,1), with its inverse and
//! derivative. Boundary limits (u = 0 or 1) are the caller's concern.
template<typename T>
concept Transformation = requires(double x) {
  { T::forward(x) } -> std::convertible_to<double>;
  { T::inverse(x) } -> std::convertible_to<double>;
  { T::derivative(x) } -> std::convertible_to<double>;
};

//! Standard normal distribution function.
inline double
probit_cdf(double x)
{
  detail::require(std::isfinite(x), "probit_cdf: non-finite argument");
  // Saturate outside the range where anything but extreme
  // pseudo-observations land; the mass there is below 1e-15.
  if (x < -8.0)
    return 0.0;
  if (x > 8.0)
    return 1.0;
  if (x > 0.0)
    return 1.0 - std::erfc(x * std::numbers::sqrt2 / 2.0) / 2.0;
  return std::erfc(-x * std::numbers::sqrt2 / 2.0) / 2.0;
}

//! Standard normal density.
inline double
probit_density(double x)
{
  detail::require(std::isfinite(x), "probit_density: non-finite argument");
  return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi /
         std::numbers::sqrt2;
}

namespace detail {

// Acklam's rational approximation (relative error ~1.15e-9), refined below.
inline double
acklam_quantile(double p)
{
  constexpr double a[] = { -3.969683028665376e+01, 2.209460984245205e+02,
                           -2.759285104469687e+02, 1.383577518672690e+02,
                           -3.066479806614716e+01, 2.506628277459239e+00 };
  constexpr double b[] = { -5.447609879822406e+01, 1.615858368580409e+02,
                           -1.556989798598866e+02, 6.680131188771972e+01,
                           -1.328068155288572e+01 };
  constexpr double c[] = { -7.784894002430293e-03, -3.223964580411365e-01,
                           -2.400758277161838e+00, -2.549732539343734e+00,
                           4.374664141464968e+00,  2.938163982698783e+00 };
  constexpr double d[] = { 7.784695709041462e-03, 3.224671290700398e-01,
                           2.445134137142996e+00, 3.754408661907416e+00 };
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace detail

//! Standard normal quantile function on the open interval (0,1).
inline double
probit_quantile(double u)
{
  if (!(u > 0.0 && u < 1.0))
    throw DomainError("probit_quantile: argument must lie in (0,1)");

  double x = detail::acklam_quantile(u);
  // One Halley step. The residual is taken in the lower tail so that it
  // does not cancel for u close to 1.
  const double residual =
    u <= 0.5 ? std::erfc(-x * std::numbers::sqrt2 / 2.0) / 2.0 - u
             : (1.0 - u) - std::erfc(x * std::numbers::sqrt2 / 2.0) / 2.0;
  const double step = residual / probit_density(x);
  x -= step / (1.0 + 0.5 * x * step);
  return x;
}

//! Gaussian (Probit) transformation.
struct Probit
{
  static double forward(double x) { return probit_cdf(x); }
  static double inverse(double u) { return probit_quantile(u); }
  static double derivative(double x) { return probit_density(x); }
};

static_assert(Transformation<Probit>);

} // namespace tkcopula
