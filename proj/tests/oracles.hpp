#pragma once

// Reference computations used only by the tests. Nothing here calls into
// the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double
normal_density(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace detail {

inline double
simpson(const std::function<double(double)>& f, double a, double b, double fa,
        double fm, double fb, double whole, double tol, int depth)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
      std::abs(delta) <= 1e-15 * std::abs(left + right))
    return left + right + delta / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

//! Adaptive Simpson quadrature.
inline double
quadrature(const std::function<double(double)>& f, double a, double b,
           double tol = 1e-15)
{
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

//! Phi(x) for x <= 0 as int_{-40}^x density, with a tolerance scaled to
//! the tail mass so small probabilities keep their relative accuracy.
inline double
normal_lower_tail(double x)
{
  const double scale = std::min(1.0, normal_density(x) / (1.0 + std::abs(x)));
  return quadrature(normal_density, -40.0, x, 1e-17 * scale);
}

inline double
normal_cdf(double x)
{
  return x <= 0.0 ? normal_lower_tail(x) : 1.0 - normal_lower_tail(-x);
}

//! Newton's method on the quadrature CDF, solved in the lower tail.
inline double
normal_quantile(double u)
{
  if (u > 0.5)
    return -normal_quantile(1.0 - u);
  double x = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double step = (normal_lower_tail(x) - u) / normal_density(x);
    x -= step;
    if (std::abs(step) < 1e-14)
      break;
  }
  return x;
}

inline double
epanechnikov_cdf(double x)
{
  if (x <= -1.0)
    return 0.0;
  if (x >= 1.0)
    return 1.0;
  return quadrature([](double s) { return 0.75 * (1.0 - s * s); }, -1.0, x);
}

struct Point
{
  double u;
  double v;
};

//! rank(x_i) / (n + 1) by direct counting (ties via <=).
inline std::vector<double>
pseudo(const std::vector<double>& xs)
{
  std::vector<double> out;
  for (double x : xs) {
    const auto count = std::count_if(xs.begin(), xs.end(),
                                     [x](double y) { return y <= x; });
    out.push_back(static_cast<double>(count) / (xs.size() + 1.0));
  }
  return out;
}

//! C_n(u,v) by brute force: x-quantile is the ceil(n u)-th smallest.
inline double
empirical_copula(const std::vector<double>& xs, const std::vector<double>& ys,
                 double u, double v)
{
  if (u == 0.0 || v == 0.0)
    return 0.0;
  const std::size_t n = xs.size();
  auto sx = xs;
  auto sy = ys;
  std::sort(sx.begin(), sx.end());
  std::sort(sy.begin(), sy.end());
  const auto kx = static_cast<std::size_t>(std::ceil(n * u - 1e-9));
  const auto ky = static_cast<std::size_t>(std::ceil(n * v - 1e-9));
  const double qx = sx[std::min(n, std::max<std::size_t>(kx, 1)) - 1];
  const double qy = sy[std::min(n, std::max<std::size_t>(ky, 1)) - 1];
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    count += (xs[i] <= qx && ys[i] <= qy);
  return static_cast<double>(count) / n;
}

//! Direct-sum transformation kernel estimator on already-transformed
//! coordinates, optionally skipping one index.
inline double
kernel_sum(const std::vector<double>& tx, const std::vector<double>& ty,
           double s, double t, double h, std::size_t skip = SIZE_MAX)
{
  double sum = 0.0;
  std::size_t terms = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    if (i == skip)
      continue;
    sum += epanechnikov_cdf((s - tx[i]) / h) * epanechnikov_cdf((t - ty[i]) / h);
    ++terms;
  }
  return sum / terms;
}

//! Frank copula straight from the closed form (no expm1/log1p).
inline double
frank_cdf(double theta, double u, double v)
{
  return -std::log(1.0 + (std::exp(-theta * u) - 1.0) *
                           (std::exp(-theta * v) - 1.0) /
                           (std::exp(-theta) - 1.0)) /
         theta;
}

template<typename F>
double
central_difference(F&& f, double x, double step)
{
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

template<typename F>
double
second_difference(F&& f, double x, double step)
{
  return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
}

} // namespace oracle
