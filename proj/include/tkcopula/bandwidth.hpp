#pragma once

#include "empirical.hpp"
#include "error.hpp"
#include "csv.hpp"
#include "estimator.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace tkcopula {

//! Admissible bandwidths [a_n, b_n] scanned on a regular grid.
class BandwidthInterval
{
public:
  BandwidthInterval(double lower, double upper, double step = 0.001)
    : lower_(lower)
    , upper_(upper)
    , step_(step)
  {
    detail::require(lower > 0.0 && lower <= upper && upper < 1.0,
                    "BandwidthInterval: need 0 < a_n <= b_n < 1");
    detail::require(step > 0.0, "BandwidthInterval: step must be positive");
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double step() const { return step_; }

  //! a_n + k * step for k = 0, 1, ... while not exceeding b_n. Grid points
  //! within 1e-9 step of b_n count as inside.
  std::vector<double> grid() const
  {
    const double span = (upper_ - lower_) / step_;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
      out[k] = lower_ + static_cast<double>(k) * step_;
    return out;
  }

private:
  double lower_;
  double upper_;
  double step_;
};

//! a_n = log n / n and b_n = (log log n / n^2)^{1/4}.
inline BandwidthInterval
admissible_interval(std::size_t n, double step = 0.001)
{
  if (n < 16)
    throw DomainError("admissible_interval: requires n >= 16");
  const double nd = static_cast<double>(n);
  const double lower = std::log(nd) / nd;
  const double upper = std::pow(std::log(std::log(nd)) / (nd * nd), 0.25);
  return { lower, upper, step };
}

struct CvEntry
{
  double h;
  double cv;
};

//! Cross-validation scores over a bandwidth grid, sorted by h.
struct CvCurve
{
  std::vector<CvEntry> entries;
  double argmin = 0.0;
};

using WeightFunction = std::function<double(double, double)>;

inline double
unit_weight(double, double)
{
  return 1.0;
}

//! Pieces of CV(h) that do not depend on h: the pseudo-observations, their
//! transforms and C_n at each pseudo-observation.
template<IntegratedKernel Kernel = Epanechnikov,
         Transformation Transform = Probit>
class CvProblem
{
public:
  CvProblem(const Sample& sample, Kernel kernel = {},
            WeightFunction weight = unit_weight)
    : estimator_(estimator_type::fit(
        check_size(sample), typename estimator_type::spec_type(0.5, kernel)))
    , weight_(std::move(weight))
  {
    const EmpiricalCopula copula(sample);
    const auto& pseudo = estimator_.pseudo();
    empirical_.reserve(pseudo.size());
    weights_.reserve(pseudo.size());
    for (const auto& p : pseudo) {
      empirical_.push_back(copula(p.x, p.y));
      weights_.push_back(weight_(p.x, p.y));
    }
  }

  std::size_t size() const { return empirical_.size(); }

  //! CV(h) = 1/n sum_i [C_{-i}(U_i,V_i) - C_n(U_i,V_i)]^2 w(U_i,V_i).
  double score(double h) const
  {
    const auto fitted = estimator_.with_bandwidth(h);
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (weights_[i] == 0.0)
        continue;
      const double diff = fitted.evaluate_leave_one_out(i) - empirical_[i];
      sum += diff * diff * weights_[i];
    }
    return sum / static_cast<double>(size());
  }

  const std::vector<double>& empirical_at_pseudo() const { return empirical_; }

private:
  using estimator_type = TransformationKernelCopula<Kernel, Transform>;

  static const Sample& check_size(const Sample& sample)
  {
    if (sample.size() < 2)
      throw DomainError("cv_score: needs at least two observations");
    return sample;
  }

  estimator_type estimator_;
  WeightFunction weight_;
  std::vector<double> empirical_;
  std::vector<double> weights_;
};

template<IntegratedKernel Kernel = Epanechnikov,
         Transformation Transform = Probit>
double
cv_score(const Sample& sample, double h, Kernel kernel = {},
         WeightFunction weight = unit_weight)
{
  detail::require(h > 0.0 && h < 1.0, "cv_score: h must lie in (0,1)");
  return CvProblem<Kernel, Transform>(sample, kernel, std::move(weight))
    .score(h);
}

//! Index of the smallest cv, ties going to the smallest h.
inline std::size_t
argmin_index(std::span<const CvEntry> entries)
{
  detail::require(!entries.empty(), "select_bandwidth: empty grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].cv < entries[best].cv)
      best = i;
  return best;
}

template<IntegratedKernel Kernel = Epanechnikov,
         Transformation Transform = Probit>
CvCurve
cv_curve(const CvProblem<Kernel, Transform>& problem,
         const BandwidthInterval& interval)
{
  CvCurve curve;
  for (double h : interval.grid())
    curve.entries.push_back({ h, problem.score(h) });
  curve.argmin = curve.entries[argmin_index(curve.entries)].h;
  return curve;
}

struct BandwidthSelection
{
  double h_opt;
  CvCurve curve;
};

//! Grid scan of CV(h) over the interval.
template<IntegratedKernel Kernel = Epanechnikov,
         Transformation Transform = Probit>
BandwidthSelection
select_bandwidth(const Sample& sample, const BandwidthInterval& interval,
                 Kernel kernel = {}, WeightFunction weight = unit_weight)
{
  const CvProblem<Kernel, Transform> problem(sample, kernel,
                                             std::move(weight));
  auto curve = cv_curve(problem, interval);
  const double h_opt = curve.argmin;
  return { h_opt, std::move(curve) };
}

inline void
write_csv(std::ostream& out, const CvCurve& curve)
{
  out << "h,cv\n";
  for (const auto& e : curve.entries)
    out << format_real(e.h) << ',' << format_real(e.cv) << '\n';
}

inline CvCurve
read_cv_csv(std::istream& in)
{
  const auto table = read_csv(in, { "h", "cv" });
  CvCurve curve;
  for (const auto& row : table)
    curve.entries.push_back({ row[0], row[1] });
  if (!curve.entries.empty())
    curve.argmin = curve.entries[argmin_index(curve.entries)].h;
  return curve;
}

} // namespace tkcopula
