#pragma once

#include "empirical.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "rng.hpp"
#include "transforms.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

namespace tkcopula {

//! First and second partial derivatives of a copula at an interior point.
struct CopulaPartials
{
  double cu;
  double cv;
  double cuu;
  double cvv;
  double cuv;
};

template<typename T>
concept CopulaModel = requires(const T& m, double u, double v,
                               std::size_t n, std::uint64_t seed) {
  { m.cdf(u, v) } -> std::convertible_to<double>;
  { m.partials(u, v) } -> std::same_as<CopulaPartials>;
  { m.sample(n, seed) } -> std::same_as<PseudoSample>;
};

namespace detail {

inline void
require_unit_square(double u, double v, const char* what)
{
  require(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0, what);
}

inline void
require_interior(double u, double v, const char* what)
{
  require(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0, what);
}

} // namespace detail

//! Independence copula C(u,v) = uv.
struct IndependenceCopula
{
  double cdf(double u, double v) const
  {
    detail::require_unit_square(u, v,
                                "independence_cdf: (u,v) outside [0,1]^2");
    return u * v;
  }

  CopulaPartials partials(double u, double v) const
  {
    detail::require_interior(u, v, "independence partials: boundary point");
    return { v, u, 0.0, 0.0, 1.0 };
  }

  PseudoSample sample(std::size_t n, std::uint64_t seed) const
  {
    detail::require(n >= 1, "independence sample: n must be positive");
    auto engine = make_engine(seed);
    PseudoSample out(n);
    for (auto& p : out) {
      p.x = uniform_open01(engine);
      p.y = uniform_open01(engine);
    }
    return out;
  }
};

inline double
independence_cdf(double u, double v)
{
  return IndependenceCopula{}.cdf(u, v);
}

//! Frank copula
//!   C(u,v) = -1/theta log[1 + (e^{-theta u} - 1)(e^{-theta v} - 1)/(e^{-theta} - 1)].
//! With a = e^{-theta u} - 1, b = e^{-theta v} - 1, d = e^{-theta} - 1 and
//! D = d + ab the derivatives are
//!   C_u  = (a+1) b / D,              C_v  = (b+1) a / D,
//!   C_uu = -theta (a+1) b (d-b) / D^2, C_vv = -theta (b+1) a (d-a) / D^2,
//!   C_uv = -theta (a+1)(b+1) d / D^2.
class FrankCopula
{
public:
  explicit FrankCopula(double theta)
    : theta_(theta)
  {
    detail::require(std::isfinite(theta) && theta != 0.0,
                    "FrankCopula: theta must be finite and nonzero");
    d_ = std::expm1(-theta_);
  }

  double theta() const { return theta_; }

  double cdf(double u, double v) const
  {
    detail::require_unit_square(u, v, "frank_cdf: (u,v) outside [0,1]^2");
    if (u == 0.0 || v == 0.0)
      return 0.0;
    if (u == 1.0)
      return v;
    if (v == 1.0)
      return u;
    const double a = std::expm1(-theta_ * u);
    const double b = std::expm1(-theta_ * v);
    return -std::log1p(a * b / d_) / theta_;
  }

  CopulaPartials partials(double u, double v) const
  {
    detail::require_interior(u, v, "frank_partials: boundary point");
    const double a = std::expm1(-theta_ * u);
    const double b = std::expm1(-theta_ * v);
    const double denom = d_ + a * b;
    const double denom2 = denom * denom;
    return {
      (a + 1.0) * b / denom,
      (b + 1.0) * a / denom,
      -theta_ * (a + 1.0) * b * (d_ - b) / denom2,
      -theta_ * (b + 1.0) * a * (d_ - a) / denom2,
      -theta_ * (a + 1.0) * (b + 1.0) * d_ / denom2,
    };
  }

  //! Conditional sampling: U uniform, then V solves C_u(U, V) = W for an
  //! independent uniform W, i.e. e^{-theta V} - 1 = W d / (1 + a (1 - W)).
  PseudoSample sample(std::size_t n, std::uint64_t seed) const
  {
    detail::require(n >= 1, "frank_sample: n must be positive");
    auto engine = make_engine(seed);
    PseudoSample out(n);
    for (auto& p : out) {
      const double u = uniform_open01(engine);
      const double w = uniform_open01(engine);
      const double a = std::expm1(-theta_ * u);
      const double b = w * d_ / (1.0 + a * (1.0 - w));
      const double v = -std::log1p(b) / theta_;
      if (!std::isfinite(v))
        throw NumericalError("frank_sample: conditional inversion failed");
      p = { u, std::clamp(v, 0x1.0p-60, 1.0 - 0x1.0p-53) };
    }
    return out;
  }

private:
  double theta_;
  double d_;
};

static_assert(CopulaModel<FrankCopula>);
static_assert(CopulaModel<IndependenceCopula>);

inline double
frank_cdf(double theta, double u, double v)
{
  return FrankCopula(theta).cdf(u, v);
}

inline CopulaPartials
frank_partials(double theta, double u, double v)
{
  return FrankCopula(theta).partials(u, v);
}

inline PseudoSample
frank_sample(double theta, std::size_t n, std::uint64_t seed)
{
  return FrankCopula(theta).sample(n, seed);
}

//! Leading smoothing bias of the transformation kernel estimator,
//!   h^2/2 [phi'(phi^-1(u))^2 C_uu + phi'(phi^-1(v))^2 C_vv] int s^2 k(s) ds.
template<CopulaModel Model, Transformation Transform = Probit,
         IntegratedKernel Kernel = Epanechnikov>
double
bias_formula(const Model& model, const Kernel& kernel, double h, double u,
             double v)
{
  detail::require_interior(u, v, "bias_formula: boundary point");
  detail::require(h > 0.0 && h < 1.0, "bias_formula: h must lie in (0,1)");
  const auto c = model.partials(u, v);
  const double du = Transform::derivative(Transform::inverse(u));
  const double dv = Transform::derivative(Transform::inverse(v));
  const double m2 = kernel_moments(kernel).m2;
  return 0.5 * h * h * (du * du * c.cuu + dv * dv * c.cvv) * m2;
}

} // namespace tkcopula
