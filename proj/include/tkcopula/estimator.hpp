#pragma once

#include "empirical.hpp"
#include "error.hpp"
#include "kernels.hpp"
#include "transforms.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace tkcopula {

//! Bandwidth together with the kernel and transformation it applies to.
template<IntegratedKernel Kernel = Epanechnikov,
         Transformation Transform = Probit>
class SmoothingSpec
{
public:
  using kernel_type = Kernel;
  using transform_type = Transform;

  explicit SmoothingSpec(double bandwidth, Kernel kernel = {})
    : bandwidth_(bandwidth)
    , kernel_(kernel)
  {
    detail::require(bandwidth > 0.0 && bandwidth < 1.0,
                    "SmoothingSpec: bandwidth must lie in (0,1)");
  }

  double bandwidth() const { return bandwidth_; }
  const Kernel& kernel() const { return kernel_; }

private:
  double bandwidth_;
  Kernel kernel_;
};

//! Dense row-major matrix of estimator values.
class Matrix
{
public:
  Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows)
    , cols_(cols)
    , values_(rows * cols, 0.0)
  {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j)
  {
    return values_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const
  {
    return values_[i * cols_ + j];
  }
  std::span<const double> values() const { return values_; }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

//! Maps u in [0,1] through the inverse transformation, with u = 0 and
//! u = 1 sent to -inf and +inf so the integrated kernel saturates.
template<Transformation Transform>
double
to_transformed_scale(double u)
{
  if (!(u >= 0.0 && u <= 1.0))
    throw DomainError("estimator: evaluation point must lie in [0,1]^2");
  if (u == 0.0)
    return -std::numeric_limits<double>::infinity();
  if (u == 1.0)
    return std::numeric_limits<double>::infinity();
  return Transform::inverse(u);
}

//! Transformation kernel copula estimator
//!   C(u,v) = 1/n sum_i K((phi^-1(u) - phi^-1(U_i))/h) K((phi^-1(v) - phi^-1(V_i))/h)
//! fitted to a fixed set of pseudo-observations. Immutable once built.
template<IntegratedKernel Kernel = Epanechnikov,
         Transformation Transform = Probit>
class TransformationKernelCopula
{
public:
  using spec_type = SmoothingSpec<Kernel, Transform>;

  //! Fit from raw data via rank pseudo-observations.
  static TransformationKernelCopula fit(const Sample& sample,
                                        const spec_type& spec)
  {
    return TransformationKernelCopula(pseudo_observations(sample), spec);
  }

  //! Fit directly from points in (0,1)^2. Used with exact copula draws to
  //! isolate the smoothing bias from rank noise.
  static TransformationKernelCopula from_uniforms(PseudoSample points,
                                                  const spec_type& spec)
  {
    for (const auto& p : points)
      detail::require(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0,
                      "from_uniforms: points must lie in (0,1)^2");
    return TransformationKernelCopula(std::move(points), spec);
  }

  std::size_t size() const { return pseudo_.size(); }
  const spec_type& spec() const { return spec_; }
  const PseudoSample& pseudo() const { return pseudo_; }
  const std::vector<Pair>& transformed() const { return transformed_; }

  //! Same observations, different bandwidth; reuses the transformed values.
  TransformationKernelCopula with_bandwidth(double h) const
  {
    TransformationKernelCopula copy = *this;
    copy.spec_ = spec_type(h, spec_.kernel());
    return copy;
  }

  double operator()(double u, double v) const { return evaluate(u, v); }

  double evaluate(double u, double v) const
  {
    const double s = to_transformed_scale<Transform>(u);
    const double t = to_transformed_scale<Transform>(v);
    std::vector<double> wu(size());
    std::vector<double> wv(size());
    weights(s, &Pair::x, wu);
    weights(t, &Pair::y, wv);
    return dot(wu, wv) / static_cast<double>(size());
  }

  //! M(i,j) = evaluate(grid_u[i], grid_v[j]).
  Matrix evaluate_grid(std::span<const double> grid_u,
                       std::span<const double> grid_v) const
  {
    std::vector<std::vector<double>> wv(grid_v.size(),
                                        std::vector<double>(size()));
    for (std::size_t j = 0; j < grid_v.size(); ++j)
      weights(to_transformed_scale<Transform>(grid_v[j]), &Pair::y, wv[j]);

    Matrix out(grid_u.size(), grid_v.size());
    std::vector<double> wu(size());
    for (std::size_t i = 0; i < grid_u.size(); ++i) {
      weights(to_transformed_scale<Transform>(grid_u[i]), &Pair::x, wu);
      for (std::size_t j = 0; j < grid_v.size(); ++j)
        out(i, j) = dot(wu, wv[j]) / static_cast<double>(size());
    }
    return out;
  }

  //! Estimator without observation i, evaluated at that observation.
  double evaluate_leave_one_out(std::size_t i) const
  {
    if (size() < 2)
      throw DomainError("evaluate_leave_one_out: needs at least two points");
    if (i >= size())
      throw DomainError("evaluate_leave_one_out: index out of range");
    const double h = spec_.bandwidth();
    const auto& k = spec_.kernel();
    const Pair& at = transformed_[i];
    double sum = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
      if (j == i)
        continue;
      sum += k.integral((at.x - transformed_[j].x) / h) *
             k.integral((at.y - transformed_[j].y) / h);
    }
    return sum / static_cast<double>(size() - 1);
  }

private:
  TransformationKernelCopula(PseudoSample pseudo, const spec_type& spec)
    : pseudo_(std::move(pseudo))
    , spec_(spec)
  {
    detail::require(!pseudo_.empty(), "estimator: empty sample");
    transformed_.reserve(pseudo_.size());
    for (const auto& p : pseudo_)
      transformed_.push_back({ Transform::inverse(p.x),
                               Transform::inverse(p.y) });
  }

  void weights(double at, double Pair::*coord, std::span<double> out) const
  {
    const double h = spec_.bandwidth();
    const auto& k = spec_.kernel();
    for (std::size_t i = 0; i < transformed_.size(); ++i)
      out[i] = k.integral((at - transformed_[i].*coord) / h);
  }

  static double dot(std::span<const double> a, std::span<const double> b)
  {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      sum += a[i] * b[i];
    return sum;
  }

  PseudoSample pseudo_;
  std::vector<Pair> transformed_;
  spec_type spec_;
};

} // namespace tkcopula
