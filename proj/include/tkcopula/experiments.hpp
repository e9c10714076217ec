#pragma once

#include "bandwidth.hpp"
#include "csv.hpp"
#include "empirical.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tkcopula {

using Estimator = TransformationKernelCopula<Epanechnikov, Probit>;
using Spec = SmoothingSpec<Epanechnikov, Probit>;

//! Raw Frank draws for replicate `index` of a study seeded with `master`.
inline Sample
frank_replicate(const FrankCopula& model, std::size_t n, std::uint64_t master,
                std::uint64_t index)
{
  return Sample(model.sample(n, stream_seed(master, index)));
}

//! Fits the estimator at h, or at the CV-selected bandwidth over the
//! admissible interval when h is empty.
inline Estimator
fit_with_rule(const Sample& sample, std::optional<double> h)
{
  if (h)
    return Estimator::fit(sample, Spec(*h));
  const auto chosen = select_bandwidth(sample, admissible_interval(sample.size()));
  return Estimator::fit(sample, Spec(chosen.h_opt));
}

// ---------------------------------------------------------------------------
// Bias / MSE table

struct McConfig
{
  double theta = 1.0;
  std::size_t n = 100;
  std::size_t replicates = 1000;
  //! Fixed bandwidth; empty selects h by cross-validation per replicate.
  std::optional<double> bandwidth = 0.085;
  std::vector<Pair> points;
  std::uint64_t master_seed = 0;
  //! Replicates use streams first_replicate, first_replicate + 1, ...
  std::uint64_t first_replicate = 0;
  std::size_t workers = 1;
};

struct PointStats
{
  Pair point;
  double truth;
  double bias;
  double mse;
};

struct McReport
{
  McConfig config;
  std::vector<PointStats> points;
  double runtime_seconds = 0.0;
};

inline void
validate(const McConfig& config)
{
  detail::require(config.replicates >= 1, "mc_bias_mse: B must be >= 1");
  detail::require(config.n >= 1, "mc_bias_mse: n must be >= 1");
  if (config.bandwidth)
    detail::require(*config.bandwidth > 0.0 && *config.bandwidth < 1.0,
                    "mc_bias_mse: h must lie in (0,1)");
  else
    detail::require(config.n >= 16, "mc_bias_mse: CV bandwidth needs n >= 16");
  for (const auto& p : config.points)
    detail::require(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0,
                    "mc_bias_mse: points must lie in (0,1)^2");
}

//! Monte Carlo bias and mean squared error of the estimator at each point.
//! Per-replicate errors are stored and reduced in replicate order, so the
//! result does not depend on the worker count.
inline McReport
mc_bias_mse(const McConfig& config)
{
  validate(config);
  const FrankCopula model(config.theta);
  const auto start = std::chrono::steady_clock::now();

  const std::size_t points = config.points.size();
  std::vector<double> truth(points);
  for (std::size_t k = 0; k < points; ++k)
    truth[k] = model.cdf(config.points[k].x, config.points[k].y);

  std::vector<double> errors(config.replicates * points);
  parallel_for(config.replicates, config.workers, [&](std::size_t b) {
    const auto sample = frank_replicate(model, config.n, config.master_seed,
                                        config.first_replicate + b);
    const auto fitted = fit_with_rule(sample, config.bandwidth);
    for (std::size_t k = 0; k < points; ++k)
      errors[b * points + k] =
        fitted(config.points[k].x, config.points[k].y) - truth[k];
  });

  McReport report{ config, {}, 0.0 };
  const double count = static_cast<double>(config.replicates);
  for (std::size_t k = 0; k < points; ++k) {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t b = 0; b < config.replicates; ++b) {
      const double e = errors[b * points + k];
      sum += e;
      sum_sq += e * e;
    }
    report.points.push_back(
      { config.points[k], truth[k], sum / count, sum_sq / count });
  }
  report.runtime_seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
  return report;
}

//! Combines reports over disjoint replicate ranges of the same study.
inline McReport
pool_reports(const std::vector<McReport>& parts)
{
  detail::require(!parts.empty(), "pool_reports: nothing to pool");
  McReport pooled = parts.front();
  std::size_t total = 0;
  for (const auto& part : parts) {
    detail::require(part.points.size() == pooled.points.size(),
                    "pool_reports: point sets differ");
    total += part.config.replicates;
  }
  for (std::size_t k = 0; k < pooled.points.size(); ++k) {
    double bias = 0.0;
    double mse = 0.0;
    for (const auto& part : parts) {
      const double w = static_cast<double>(part.config.replicates);
      bias += w * part.points[k].bias;
      mse += w * part.points[k].mse;
    }
    pooled.points[k].bias = bias / static_cast<double>(total);
    pooled.points[k].mse = mse / static_cast<double>(total);
  }
  pooled.config.replicates = total;
  pooled.runtime_seconds = 0.0;
  for (const auto& part : parts)
    pooled.runtime_seconds += part.runtime_seconds;
  return pooled;
}

//! Diagonal evaluation points (0.1,0.1), (0.2,0.2), (0.5,0.5), (0.8,0.8),
//! (0.9,0.9).
inline std::vector<Pair>
default_table_points()
{
  return { { 0.1, 0.1 }, { 0.2, 0.2 }, { 0.5, 0.5 }, { 0.8, 0.8 },
           { 0.9, 0.9 } };
}

enum class TableFormat
{
  csv,
  markdown
};

//! Renders one or more reports (typically one per theta). CSV has columns
//! u,v,theta,bias,mse ordered by point then theta. Markdown lays out one
//! row pair (bias, mse) per point and one column per theta.
inline std::string
table_emit(const std::vector<McReport>& reports, TableFormat format)
{
  std::ostringstream out;
  const std::size_t points = reports.empty() ? 0 : reports.front().points.size();
  for (const auto& r : reports)
    detail::require(r.points.size() == points,
                    "table_emit: reports must share evaluation points");

  if (format == TableFormat::csv) {
    out << "u,v,theta,bias,mse\n";
    for (std::size_t k = 0; k < points; ++k)
      for (const auto& r : reports) {
        const auto& p = r.points[k];
        out << format_real(p.point.x) << ',' << format_real(p.point.y) << ','
            << format_real(r.config.theta) << ',' << format_real(p.bias) << ','
            << format_real(p.mse) << '\n';
      }
    return out.str();
  }

  out << "| (u,v) | |";
  for (const auto& r : reports)
    out << " theta=" << format_real(r.config.theta) << " |";
  out << "\n|---|---|";
  for (std::size_t i = 0; i < reports.size(); ++i)
    out << "---|";
  out << '\n';
  auto fixed = [](double value, int digits) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << value;
    return s.str();
  };
  for (std::size_t k = 0; k < points; ++k) {
    const auto& at = reports.front().points[k].point;
    out << "| (" << format_real(at.x) << ',' << format_real(at.y)
        << ") | bias |";
    for (const auto& r : reports)
      out << ' ' << fixed(r.points[k].bias, 4) << " |";
    out << "\n| | mse |";
    for (const auto& r : reports)
      out << ' ' << fixed(r.points[k].mse, 5) << " |";
    out << '\n';
  }
  return out.str();
}

struct TableRow
{
  double u;
  double v;
  double theta;
  double bias;
  double mse;
};

inline std::vector<TableRow>
parse_table_csv(const std::string& text)
{
  std::istringstream in(text);
  std::vector<TableRow> rows;
  for (const auto& r : read_csv(in, { "u", "v", "theta", "bias", "mse" }))
    rows.push_back({ r[0], r[1], r[2], r[3], r[4] });
  return rows;
}

// ---------------------------------------------------------------------------
// Cross-validation curve

//! CV curve for one Frank sample of size n. The interval defaults to the
//! admissible interval for n.
inline CvCurve
cv_curve_experiment(double theta, std::size_t n, std::uint64_t master_seed,
                    std::optional<BandwidthInterval> interval = std::nullopt)
{
  const auto sample = frank_replicate(FrankCopula(theta), n, master_seed, 0);
  const auto grid = interval ? *interval : admissible_interval(n);
  return select_bandwidth(sample, grid).curve;
}

// ---------------------------------------------------------------------------
// Smoothing bias versus its second-order expansion

struct BiasCheckEntry
{
  double h;
  double formula;
  //! Mean of (estimate - indicator ECDF of the same draws) at (u,v).
  double empirical;
  double std_error;
  //! Mean of (estimate - C(u,v)); unbiased but noisier.
  double raw;
  double raw_std_error;
};

struct BiasCheckReport
{
  Pair point;
  std::size_t n_oracle;
  std::size_t replicates;
  std::vector<BiasCheckEntry> entries;

  //! empirical bias at entries[i] over empirical bias at entries[j].
  double ratio(std::size_t i, std::size_t j) const
  {
    return entries.at(i).empirical / entries.at(j).empirical;
  }
};

namespace detail {

struct MeanSe
{
  double mean;
  double se;
};

inline MeanSe
mean_and_se(const std::vector<double>& values)
{
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values)
    sum += v;
  const double mean = sum / n;
  if (values.size() < 2)
    return { mean, 0.0 };
  double ss = 0.0;
  for (double v : values)
    ss += (v - mean) * (v - mean);
  return { mean, std::sqrt(ss / (n - 1.0) / n) };
}

inline double
median(std::vector<double> values)
{
  require(!values.empty(), "median: empty input");
  std::ranges::sort(values);
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

} // namespace detail

//! Estimates the smoothing bias of the estimator fitted directly to exact
//! copula draws (no ranks), for each bandwidth. The indicator ECDF
//! 1/n sum 1{U_i <= u, V_i <= v} is unbiased for C(u,v) and is subtracted
//! replicate by replicate as a control variate.
template<CopulaModel Model>
BiasCheckReport
bias_expansion_check(const Model& model, const std::vector<double>& h_list,
                     double u, double v, std::size_t n_oracle,
                     std::size_t replicates, std::uint64_t seed,
                     std::size_t workers = 1)
{
  detail::require(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0,
                  "bias_expansion_check: point must be interior");
  detail::require(!h_list.empty(), "bias_expansion_check: empty h list");
  for (double h : h_list)
    detail::require(h > 0.0 && h < 1.0, "bias_expansion_check: h in (0,1)");
  detail::require(n_oracle >= 1 && replicates >= 1,
                  "bias_expansion_check: need n_oracle, B >= 1");

  const double truth = model.cdf(u, v);
  const std::size_t hs = h_list.size();
  std::vector<double> smoothed(replicates * hs);
  std::vector<double> indicator(replicates);

  parallel_for(replicates, workers, [&](std::size_t b) {
    auto draws = model.sample(n_oracle, stream_seed(seed, b));
    const auto below = std::ranges::count_if(draws, [&](const Pair& p) {
      return p.x <= u && p.y <= v;
    });
    indicator[b] = static_cast<double>(below) / static_cast<double>(n_oracle);
    const auto fitted = Estimator::from_uniforms(std::move(draws), Spec(h_list[0]));
    for (std::size_t j = 0; j < hs; ++j)
      smoothed[b * hs + j] = fitted.with_bandwidth(h_list[j])(u, v);
  });

  BiasCheckReport report{ { u, v }, n_oracle, replicates, {} };
  const Epanechnikov kernel;
  for (std::size_t j = 0; j < hs; ++j) {
    std::vector<double> controlled(replicates);
    std::vector<double> raw(replicates);
    for (std::size_t b = 0; b < replicates; ++b) {
      controlled[b] = smoothed[b * hs + j] - indicator[b];
      raw[b] = smoothed[b * hs + j] - truth;
    }
    const auto c = detail::mean_and_se(controlled);
    const auto r = detail::mean_and_se(raw);
    report.entries.push_back({ h_list[j],
                               bias_formula(model, kernel, h_list[j], u, v),
                               c.mean, c.se, r.mean, r.se });
  }
  return report;
}

// ---------------------------------------------------------------------------
// Uniform consistency and deviation rate

//! R_n = (n / (2 log log n))^{1/2}.
inline double
lil_rate(std::size_t n)
{
  detail::require(n >= 3, "lil_rate: requires n >= 3");
  const double nd = static_cast<double>(n);
  return std::sqrt(nd / (2.0 * std::log(std::log(nd))));
}

//! How bandwidths are chosen at each sample size of a rate scan.
struct BandwidthRule
{
  enum class Kind
  {
    span,
    cv,
    fixed
  };

  Kind kind = Kind::span;
  //! Used when kind == fixed.
  double h = 0.0;
  //! Used when kind == span.
  std::size_t count = 5;

  static BandwidthRule span(std::size_t count = 5) { return { Kind::span, 0.0, count }; }
  static BandwidthRule cross_validated() { return { Kind::cv, 0.0, 0 }; }
  static BandwidthRule fixed(double h) { return { Kind::fixed, h, 0 }; }
};

struct RateEntry
{
  std::size_t n;
  double lower;
  double upper;
  //! Median over replicates of sup |C_hat - C| over grid and bandwidths.
  double sup_error;
  double rate;
  //! Median over replicates of sup |C_hat - mean replicate C_hat|.
  double sup_deviation;
  //! rate * sup_deviation.
  double scaled;
};

struct RateScan
{
  std::vector<RateEntry> entries;
};

//! Interior evaluation grid {1/20, ..., 19/20}.
inline std::vector<double>
interior_grid(std::size_t points = 19)
{
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = static_cast<double>(i + 1) / static_cast<double>(points + 1);
  return out;
}

inline RateScan
consistency_scan(double theta, const std::vector<std::size_t>& n_list,
                 BandwidthRule rule, std::size_t replicates,
                 std::uint64_t seed, std::size_t workers = 1)
{
  detail::require(!n_list.empty(), "consistency_scan: empty n list");
  detail::require(std::ranges::is_sorted(n_list) &&
                    std::ranges::adjacent_find(n_list) == n_list.end(),
                  "consistency_scan: n list must be strictly increasing");
  detail::require(replicates >= 10, "consistency_scan: B must be >= 10");
  if (rule.kind == BandwidthRule::Kind::span)
    detail::require(rule.count >= 1, "consistency_scan: span count >= 1");

  const FrankCopula model(theta);
  const auto grid = interior_grid();
  const std::size_t cells = grid.size() * grid.size();
  std::vector<double> truth(cells);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j)
      truth[i * grid.size() + j] = model.cdf(grid[i], grid[j]);

  RateScan scan;
  for (std::size_t n : n_list) {
    const auto interval = admissible_interval(n);
    std::vector<double> bandwidths;
    switch (rule.kind) {
      case BandwidthRule::Kind::span:
        for (std::size_t k = 0; k < rule.count; ++k)
          bandwidths.push_back(
            rule.count == 1
              ? interval.lower()
              : interval.lower() + (interval.upper() - interval.lower()) *
                                     static_cast<double>(k) /
                                     static_cast<double>(rule.count - 1));
        break;
      case BandwidthRule::Kind::fixed:
        bandwidths.push_back(rule.h);
        break;
      case BandwidthRule::Kind::cv:
        bandwidths.push_back(0.0); // placeholder, chosen per replicate
        break;
    }
    const std::size_t slots = bandwidths.size() * cells;
    std::vector<double> values(replicates * slots);
    const std::uint64_t size_seed = stream_seed(seed, n);

    parallel_for(replicates, workers, [&](std::size_t b) {
      const auto sample = frank_replicate(model, n, size_seed, b);
      for (std::size_t k = 0; k < bandwidths.size(); ++k) {
        const auto fitted =
          rule.kind == BandwidthRule::Kind::cv
            ? fit_with_rule(sample, std::nullopt)
            : Estimator::fit(sample, Spec(bandwidths[k]));
        const auto m = fitted.evaluate_grid(grid, grid);
        std::ranges::copy(m.values(), values.begin() + b * slots + k * cells);
      }
    });

    std::vector<double> mean(slots, 0.0);
    for (std::size_t b = 0; b < replicates; ++b)
      for (std::size_t s = 0; s < slots; ++s)
        mean[s] += values[b * slots + s];
    for (auto& m : mean)
      m /= static_cast<double>(replicates);

    std::vector<double> errors(replicates);
    std::vector<double> deviations(replicates);
    for (std::size_t b = 0; b < replicates; ++b) {
      double err = 0.0;
      double dev = 0.0;
      for (std::size_t s = 0; s < slots; ++s) {
        const double value = values[b * slots + s];
        err = std::max(err, std::abs(value - truth[s % cells]));
        dev = std::max(dev, std::abs(value - mean[s]));
      }
      errors[b] = err;
      deviations[b] = dev;
    }

    const double rate = lil_rate(n);
    const double deviation = detail::median(deviations);
    scan.entries.push_back({ n, interval.lower(), interval.upper(),
                             detail::median(errors), rate, deviation,
                             rate * deviation });
  }
  return scan;
}

} // namespace tkcopula
