#include "tkcopula/estimator.hpp"
#include "tkcopula/models.hpp"

#include "../oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tkcopula;

namespace {

using Est = TransformationKernelCopula<>;
using Spec = SmoothingSpec<>;

Sample
frank_data(std::size_t n, std::uint64_t seed, double theta = 2.0)
{
  return Sample(FrankCopula(theta).sample(n, seed));
}

std::vector<double>
probit_all(const std::vector<double>& us)
{
  std::vector<double> out;
  for (double u : us)
    out.push_back(oracle::normal_quantile(u));
  return out;
}

} // namespace

TEST(SmoothingSpec, RejectsDegenerateBandwidths)
{
  EXPECT_THROW(Spec(0.0), DomainError);
  EXPECT_THROW(Spec(1.0), DomainError);
  EXPECT_THROW(Spec(-0.1), DomainError);
  EXPECT_NO_THROW(Spec(0.5));
}

TEST(Fit, SinglePoint)
{
  const auto fitted = Est::fit(Sample({ { 3.0, 4.0 } }), Spec(0.5));
  ASSERT_EQ(fitted.transformed().size(), 1u);
  EXPECT_EQ(fitted.transformed()[0].x, 0.0);
  EXPECT_EQ(fitted.transformed()[0].y, 0.0);
  EXPECT_EQ(fitted.evaluate(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(fitted.evaluate(0.5, 0.5), 0.25);
}

TEST(Fit, TransformedPseudoObservations)
{
  const Sample s({ { 10, 40 }, { 20, 30 }, { 30, 20 }, { 40, 10 } });
  const auto fitted = Est::fit(s, Spec(0.3));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(fitted.transformed()[i].x, oracle::normal_quantile((i + 1) / 5.0), 1e-9);
    EXPECT_NEAR(fitted.transformed()[i].y, oracle::normal_quantile((4 - i) / 5.0), 1e-9);
  }
}

TEST(Evaluate, BoundaryConventions)
{
  const auto fitted = Est::fit(frank_data(50, 1), Spec(0.2));
  for (double t = 0.0; t <= 1.0; t += 0.1) {
    EXPECT_EQ(fitted.evaluate(0.0, t), 0.0);
    EXPECT_EQ(fitted.evaluate(t, 0.0), 0.0);
  }
  EXPECT_EQ(fitted.evaluate(1.0, 1.0), 1.0);
  EXPECT_THROW(fitted.evaluate(1.1, 0.5), DomainError);
  EXPECT_THROW(fitted.evaluate(0.5, -0.01), DomainError);
}

TEST(Evaluate, MatchesDirectSum)
{
  const auto sample = frank_data(30, 2);
  const auto fitted = Est::fit(sample, Spec(0.15));
  const auto tx = probit_all(oracle::pseudo(sample.xs()));
  const auto ty = probit_all(oracle::pseudo(sample.ys()));
  for (double u = 0.05; u < 1.0; u += 0.1)
    for (double v = 0.05; v < 1.0; v += 0.1)
      EXPECT_NEAR(fitted(u, v),
                  oracle::kernel_sum(tx, ty, oracle::normal_quantile(u),
                                     oracle::normal_quantile(v), 0.15),
                  1e-9);
}

TEST(Evaluate, RangeAndSymmetry)
{
  const auto sample = frank_data(40, 3, -3.0);
  std::vector<Pair> swapped;
  for (const auto& p : sample.pairs())
    swapped.push_back({ p.y, p.x });
  const auto a = Est::fit(sample, Spec(0.1));
  const auto b = Est::fit(Sample(swapped), Spec(0.1));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double u = unit(rng);
    const double v = unit(rng);
    const double value = a(u, v);
    EXPECT_GE(value, 0.0);
    EXPECT_LE(value, 1.0);
    EXPECT_NEAR(value, b(v, u), 1e-15);
  }
}

TEST(EvaluateGrid, IdenticalToPointwise)
{
  const auto fitted = Est::fit(frank_data(60, 4), Spec(0.08));
  const std::vector<double> gu{ 0.0, 0.13, 0.5, 0.77, 1.0 };
  const std::vector<double> gv{ 0.0, 0.2, 0.9, 1.0 };
  const auto m = fitted.evaluate_grid(gu, gv);
  ASSERT_EQ(m.rows(), gu.size());
  ASSERT_EQ(m.cols(), gv.size());
  for (std::size_t i = 0; i < gu.size(); ++i)
    for (std::size_t j = 0; j < gv.size(); ++j) {
      EXPECT_EQ(m(i, j), fitted(gu[i], gv[j]));
      EXPECT_GE(m(i, j), 0.0);
      EXPECT_LE(m(i, j), 1.0);
    }

  const std::vector<double> corners{ 0.0, 1.0 };
  const auto c = fitted.evaluate_grid(corners, corners);
  EXPECT_EQ(c(0, 0), 0.0);
  EXPECT_EQ(c(0, 1), 0.0);
  EXPECT_EQ(c(1, 0), 0.0);
  EXPECT_EQ(c(1, 1), 1.0);

  const std::vector<double> one{ 0.4 };
  EXPECT_EQ(fitted.evaluate_grid(one, one)(0, 0), fitted(0.4, 0.4));
}

TEST(LeaveOneOut, MatchesDirectSum)
{
  // Hand-built pseudo sample: ranks (1,2), (2,3), (3,1).
  const Sample s({ { 1.0, 2.0 }, { 2.0, 3.0 }, { 3.0, 1.0 } });
  const double h = 0.5;
  const auto fitted = Est::fit(s, Spec(h));
  const auto tx = probit_all({ 0.25, 0.5, 0.75 });
  const auto ty = probit_all({ 0.5, 0.75, 0.25 });
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_NEAR(fitted.evaluate_leave_one_out(i),
                oracle::kernel_sum(tx, ty, tx[i], ty[i], h, i), 1e-9);
}

TEST(LeaveOneOut, TwoSymmetricPoints)
{
  const auto fitted = Est::fit(Sample({ { 0.0, 0.0 }, { 1.0, 1.0 } }), Spec(0.9));
  const double first = fitted.evaluate_leave_one_out(0);
  const double second = fitted.evaluate_leave_one_out(1);
  EXPECT_GE(first, 0.0);
  EXPECT_LE(second, 1.0);
  // Pseudo pairs (1/3,1/3), (2/3,2/3): the leave-one-out values are
  // K(-d/h)^2 and K(d/h)^2, which are exchanged by reflection.
  const Epanechnikov k;
  const double d = 2.0 * probit_quantile(2.0 / 3.0);
  EXPECT_NEAR(first, std::pow(k.integral(-d / 0.9), 2), 1e-15);
  EXPECT_NEAR(second, std::pow(k.integral(d / 0.9), 2), 1e-15);
}

TEST(LeaveOneOut, AlgebraicIdentity)
{
  const auto sample = frank_data(80, 6);
  const auto fitted = Est::fit(sample, Spec(0.2));
  const Epanechnikov k;
  const auto& t = fitted.transformed();
  const double n = static_cast<double>(fitted.size());
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    double full = 0.0;
    for (const auto& q : t)
      full += k.integral((t[i].x - q.x) / 0.2) * k.integral((t[i].y - q.y) / 0.2);
    full /= n;
    const double own = 0.25; // K(0)^2
    const double identity = (full - own / n) * n / (n - 1.0);
    EXPECT_NEAR(identity, fitted.evaluate_leave_one_out(i), 1e-12);
    EXPECT_GE(fitted.evaluate_leave_one_out(i), 0.0);
    EXPECT_LE(fitted.evaluate_leave_one_out(i), 1.0);
  }
}

TEST(LeaveOneOut, Errors)
{
  const auto single = Est::fit(Sample({ { 1.0, 1.0 } }), Spec(0.5));
  EXPECT_THROW(single.evaluate_leave_one_out(0), DomainError);
  const auto pair = Est::fit(Sample({ { 1.0, 1.0 }, { 2.0, 0.0 } }), Spec(0.5));
  EXPECT_THROW(pair.evaluate_leave_one_out(2), DomainError);
}

TEST(Degeneracy, TinyBandwidthRecoversIndicatorAverage)
{
  for (std::size_t n = 2; n <= 20; ++n) {
    const auto fitted = Est::fit(frank_data(n, 40 + n), Spec(1e-6));
    const auto& pseudo = fitted.pseudo();
    // Midpoints between consecutive rank levels are far from every
    // transformed pseudo-observation relative to h.
    for (std::size_t r = 0; r <= n; ++r)
      for (std::size_t q = 0; q <= n; ++q) {
        const double u = (r + 0.5) / (n + 1.0);
        const double v = (q + 0.5) / (n + 1.0);
        std::size_t count = 0;
        for (const auto& p : pseudo)
          count += p.x <= u && p.y <= v;
        EXPECT_LE(std::abs(fitted(u, v) - static_cast<double>(count) / n), 1.0 / n);
        EXPECT_NEAR(fitted(u, v), static_cast<double>(count) / n, 1e-12);
      }
  }
}

TEST(FromUniforms, ValidatesAndEvaluates)
{
  EXPECT_THROW(Est::from_uniforms({ { 0.0, 0.5 } }, Spec(0.1)), DomainError);
  const auto fitted = Est::from_uniforms({ { 0.5, 0.5 } }, Spec(0.5));
  EXPECT_DOUBLE_EQ(fitted(0.5, 0.5), 0.25);
}

TEST(WithBandwidth, KeepsObservations)
{
  const auto a = Est::fit(frank_data(30, 8), Spec(0.1));
  const auto b = a.with_bandwidth(0.3);
  EXPECT_EQ(b.spec().bandwidth(), 0.3);
  EXPECT_EQ(a.transformed().size(), b.transformed().size());
  EXPECT_EQ(b(0.4, 0.6), Est::fit(frank_data(30, 8), Spec(0.3))(0.4, 0.6));
  EXPECT_THROW(a.with_bandwidth(1.0), DomainError);
}
