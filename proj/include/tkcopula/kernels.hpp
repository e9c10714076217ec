#pragma once

#include "error.hpp"

#include <array>
#include <cmath>
#include <concepts>

namespace tkcopula {

//! A symmetric kernel density supported on [-1,1] together with its
//! distribution function K(x) = int_{-inf}^x k(s) ds.
template<typename T>
concept IntegratedKernel = requires(const T& k, double x) {
  { k.density(x) } -> std::convertible_to<double>;
  { k.integral(x) } -> std::convertible_to<double>;
};

//! Epanechnikov kernel, k(t) = 0.75 (1 - t^2) on [-1,1].
struct Epanechnikov
{
  constexpr double density(double t) const
  {
    return (t >= -1.0 && t <= 1.0) ? 0.75 * (1.0 - t * t) : 0.0;
  }

  //! Closed-form antiderivative; accepts +-infinity.
  constexpr double integral(double x) const
  {
    if (x <= -1.0)
      return 0.0;
    if (x >= 1.0)
      return 1.0;
    return 0.5 + 0.75 * x - 0.25 * x * x * x;
  }
};

static_assert(IntegratedKernel<Epanechnikov>);

struct KernelMoments
{
  double m0;
  double m1;
  double m2;
};

namespace detail {

// 10-point Gauss-Legendre nodes and weights on [-1,1].
inline constexpr std::array<double, 5> gl10_nodes = {
  0.1488743389816312108848260, 0.4333953941292471907992659,
  0.6794095682990244062343274, 0.8650633666889845107320967,
  0.9739065285171717200779640
};
inline constexpr std::array<double, 5> gl10_weights = {
  0.2955242247147528701738930, 0.2692667193099963550912269,
  0.2190863625159820439955349, 0.1494513491505805931457763,
  0.0666713443086881375935688
};

template<typename F>
double
gauss_legendre10(F&& f, double a, double b)
{
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl10_nodes.size(); ++i) {
    const double dx = half * gl10_nodes[i];
    sum += gl10_weights[i] * (f(mid - dx) + f(mid + dx));
  }
  return sum * half;
}

template<typename F>
double
adaptive_quadrature(F&& f, double a, double b, double whole, double tol,
                    int depth)
{
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre10(f, a, mid);
  const double right = gauss_legendre10(f, mid, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= tol)
    return refined;
  if (depth == 0)
    throw NumericalError("adaptive_quadrature: no convergence");
  return adaptive_quadrature(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_quadrature(f, mid, b, right, 0.5 * tol, depth - 1);
}

} // namespace detail

//! Integrates f over [a,b] to absolute tolerance tol; throws
//! NumericalError when bisection depth is exhausted.
template<typename F>
double
integrate(F&& f, double a, double b, double tol = 1e-12, int max_depth = 40)
{
  const double whole = detail::gauss_legendre10(f, a, b);
  return detail::adaptive_quadrature(f, a, b, whole, tol, max_depth);
}

//! Zeroth, first and second moments of the kernel density over [-1,1].
template<IntegratedKernel Kernel>
KernelMoments
kernel_moments(const Kernel& kernel)
{
  // Split at the origin so densities with a kink there still converge fast.
  auto moment = [&](int power) {
    auto f = [&](double s) { return std::pow(s, power) * kernel.density(s); };
    return integrate(f, -1.0, 0.0, 1e-13) + integrate(f, 0.0, 1.0, 1e-13);
  };
  return { moment(0), moment(1), moment(2) };
}

} // namespace tkcopula
