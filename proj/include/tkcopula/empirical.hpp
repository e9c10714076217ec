#pragma once

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace tkcopula {

struct Pair
{
  double x;
  double y;

  friend bool operator==(const Pair&, const Pair&) = default;
};

//! Bivariate sample (X_i, Y_i), n >= 1, all values finite.
class Sample
{
public:
  explicit Sample(std::vector<Pair> pairs)
    : pairs_(std::move(pairs))
  {
    detail::require(!pairs_.empty(), "Sample: at least one pair required");
    for (const auto& p : pairs_)
      detail::require(std::isfinite(p.x) && std::isfinite(p.y),
                      "Sample: values must be finite");
  }

  std::size_t size() const { return pairs_.size(); }
  const Pair& operator[](std::size_t i) const { return pairs_[i]; }
  std::span<const Pair> pairs() const { return pairs_; }

  std::vector<double> xs() const
  {
    std::vector<double> out(pairs_.size());
    std::ranges::transform(pairs_, out.begin(), &Pair::x);
    return out;
  }

  std::vector<double> ys() const
  {
    std::vector<double> out(pairs_.size());
    std::ranges::transform(pairs_, out.begin(), &Pair::y);
    return out;
  }

private:
  std::vector<Pair> pairs_;
};

//! Rank-rescaled pseudo-observations; every value lies in
//! [1/(n+1), n/(n+1)].
using PseudoSample = std::vector<Pair>;

//! Sorted copy of a univariate sample answering ECDF and quantile queries.
class Marginal
{
public:
  explicit Marginal(std::span<const double> values)
    : sorted_(values.begin(), values.end())
  {
    detail::require(!sorted_.empty(), "Marginal: empty sample");
    std::ranges::sort(sorted_);
  }

  std::size_t size() const { return sorted_.size(); }

  //! #{i : x_i <= x}
  std::size_t count_le(double x) const
  {
    return static_cast<std::size_t>(
      std::ranges::upper_bound(sorted_, x) - sorted_.begin());
  }

  double ecdf(double x) const
  {
    return static_cast<double>(count_le(x)) /
           static_cast<double>(sorted_.size());
  }

  //! inf{x : F_n(x) >= u}, the order statistic x_(ceil(n u)).
  double quantile(double u) const
  {
    if (!(u > 0.0 && u <= 1.0))
      throw DomainError("empirical_quantile: u must lie in (0,1]");
    const double n = static_cast<double>(sorted_.size());
    // Tolerate n*u landing a few ulps above an integer (u = k/n in decimal).
    auto k = static_cast<std::size_t>(std::ceil(n * u - 1e-9));
    k = std::clamp<std::size_t>(k, 1, sorted_.size());
    return sorted_[k - 1];
  }

private:
  std::vector<double> sorted_;
};

inline double
ecdf(std::span<const double> values, double x)
{
  detail::require(!values.empty(), "ecdf: empty sample");
  const auto count = std::ranges::count_if(values, [x](double v) {
    return v <= x;
  });
  return static_cast<double>(count) / static_cast<double>(values.size());
}

inline double
empirical_quantile(std::span<const double> values, double u)
{
  return Marginal(values).quantile(u);
}

//! (n/(n+1)) F_n(X_i) and (n/(n+1)) G_n(Y_i) for every observation.
inline PseudoSample
pseudo_observations(const Sample& sample)
{
  const auto xs = sample.xs();
  const auto ys = sample.ys();
  const Marginal fx(xs);
  const Marginal gy(ys);
  const double denom = static_cast<double>(sample.size()) + 1.0;

  PseudoSample out(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i)
    out[i] = { static_cast<double>(fx.count_le(xs[i])) / denom,
               static_cast<double>(gy.count_le(ys[i])) / denom };
  return out;
}

//! Rank-based empirical copula C_n(u,v) = H_n(F_n^{-1}(u), G_n^{-1}(v)).
class EmpiricalCopula
{
public:
  explicit EmpiricalCopula(const Sample& sample)
    : pairs_(sample.pairs().begin(), sample.pairs().end())
    , fx_(sample.xs())
    , gy_(sample.ys())
  {}

  std::size_t size() const { return pairs_.size(); }

  double operator()(double u, double v) const
  {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
      throw DomainError("empirical_copula: (u,v) must lie in [0,1]^2");
    if (u == 0.0 || v == 0.0)
      return 0.0;
    const double qx = fx_.quantile(u);
    const double qy = gy_.quantile(v);
    const auto count = std::ranges::count_if(pairs_, [&](const Pair& p) {
      return p.x <= qx && p.y <= qy;
    });
    return static_cast<double>(count) / static_cast<double>(pairs_.size());
  }

private:
  std::vector<Pair> pairs_;
  Marginal fx_;
  Marginal gy_;
};

inline double
empirical_copula(const Sample& sample, double u, double v)
{
  return EmpiricalCopula(sample)(u, v);
}

} // namespace tkcopula
