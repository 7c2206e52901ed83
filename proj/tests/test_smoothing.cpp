#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "logcave/active_set.hpp"
#include "logcave/rng.hpp"
#include "logcave/smoothing.hpp"
#include "oracle.hpp"

using namespace logcave;

namespace {

double convolution_oracle(const PiecewiseLogLinear& base, double var, double x) {
  const double sigma = std::sqrt(var);
  const double c = 1.0 / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
  std::vector<double> breaks = base.knots();
  return oracle::integrate_cells(
      [&](double t) {
        const double u = (x - t) / sigma;
        return base.evaluate(t) * c * std::exp(-0.5 * u * u);
      },
      breaks, 1e-13);
}

}  // namespace

TEST_CASE("log of a normal CDF difference is stable in the far tails") {
  // moderate arguments against erf directly
  auto direct = [](double a, double b) {
    return std::log(0.5 * (std::erf(b / std::sqrt(2.0)) - std::erf(a / std::sqrt(2.0))));
  };
  CHECK(log_normal_cdf_diff(-1.0, 2.0) == doctest::Approx(direct(-1.0, 2.0)).epsilon(1e-12));
  CHECK(log_normal_cdf_diff(0.5, 1.5) == doctest::Approx(direct(0.5, 1.5)).epsilon(1e-12));
  CHECK(log_normal_cdf_diff(-3.0, -1.0) == doctest::Approx(direct(-3.0, -1.0)).epsilon(1e-11));
  // far tail: finite and ordered, where erf differences underflow
  const double t1 = log_normal_cdf_diff(40.0, 41.0);
  const double t2 = log_normal_cdf_diff(41.0, 42.0);
  CHECK(std::isfinite(t1));
  CHECK(t1 < -700.0);
  CHECK(t2 < t1);
}

TEST_CASE("zero-deficit smoothing degenerates to the base density") {
  // fine uniform discretization: the moment gap vanishes as the grid refines
  const std::size_t m = 10001;
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<double>(i) / (m - 1);
  const WeightedSample ws = WeightedSample::from_raw(x);
  const FitReport rep = fit(ws);
  const SmoothedDensity sm = smooth(rep, ws);
  CHECK(sm.bandwidth_var() < 2e-5);
  CHECK(sm.evaluate(0.5) == doctest::Approx(rep.density.evaluate(0.5)).epsilon(1e-2));

  const SmoothedDensity zero(rep.density, 0.0);
  CHECK(zero.evaluate(0.5) == rep.density.evaluate(0.5));
  CHECK(zero.evaluate(2.0) == 0.0);
}

TEST_CASE("two-point sample: bandwidth is the documented moment gap") {
  const WeightedSample ws({0.0, 1.0}, {0.5, 0.5});
  const SmoothedDensity sm = smooth(fit(ws), ws);
  // sample variance 1/4 minus uniform variance 1/12
  CHECK(sm.bandwidth_var() == doctest::Approx(1.0 / 6).epsilon(1e-9));
}

TEST_CASE("smoothing matches the first two sample moments") {
  Rng rng(61);
  std::vector<double> x(200);
  for (double& v : x) v = rng.normal();
  const WeightedSample ws = WeightedSample::from_raw(x);
  const SmoothedDensity sm = smooth(fit(ws), ws);
  const Moments m = sm.moments();
  CHECK(std::abs(m.mean - ws.mean()) <= 1e-8);
  CHECK(std::abs(m.variance - ws.variance()) <= 1e-8);
  CHECK(sm.bandwidth_var() > 0.0);
}

TEST_CASE("smoothed evaluator equals the convolution quadrature") {
  const PiecewiseLogLinear uniform({0.0, 1.0}, {0.0, 0.0});
  const SmoothedDensity sm(uniform, 1.0 / 6);
  Rng rng(62);
  for (int k = 0; k < 100; ++k) {
    const double x = rng.uniform(-2.0, 3.0);
    const double q = convolution_oracle(uniform, 1.0 / 6, x);
    CHECK(sm.evaluate(x) == doctest::Approx(q).epsilon(1e-8));
  }
  // strictly positive far beyond the base support
  CHECK(sm.evaluate(8.0) > 0.0);
  CHECK(sm.evaluate(-8.0) > 0.0);
}

TEST_CASE("smoothed density integrates to one and is log-concave") {
  Rng rng(63);
  std::vector<double> x(150);
  for (double& v : x) v = rng.exponential(1.0);
  const WeightedSample ws = WeightedSample::from_raw(x);
  const SmoothedDensity sm = smooth(fit(ws), ws);
  const double sigma = std::sqrt(sm.bandwidth_var());

  const double lo = sm.base().support_min() - 6 * sigma;
  const double hi = sm.base().support_max() + 6 * sigma;
  std::vector<double> breaks = sm.base().knots();
  breaks.push_back(lo);
  breaks.push_back(hi);
  const double mass = oracle::integrate_cells(
      [&](double t) { return sm.evaluate(t); }, breaks, 1e-10);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

  // log-concavity: discrete second differences on a dense grid
  const std::size_t g = 10000;
  double prev2 = 0, prev1 = 0;
  for (std::size_t i = 0; i < g; ++i) {
    const double t = lo + (hi - lo) * i / (g - 1);
    const double l = sm.log_evaluate(t);
    if (i >= 2) CHECK(l - 2 * prev1 + prev2 <= 1e-9);
    prev2 = prev1;
    prev1 = l;
  }
}

TEST_CASE("smoothing removes the kinks of the base log-density") {
  Rng rng(64);
  std::vector<double> x(120);
  for (double& v : x) v = rng.normal();
  const WeightedSample ws = WeightedSample::from_raw(x);
  const FitReport rep = fit(ws);
  const SmoothedDensity sm = smooth(rep, ws);

  // at each interior knot, compare one-sided second differences of the
  // smoothed log-density; the base has a slope jump there, the smoothed
  // curve does not
  const double h = 1e-3;
  for (std::size_t k = 1; k + 1 < rep.density.knots().size(); ++k) {
    const double t = rep.density.knots()[k];
    auto d2 = [&](double c) {
      return (sm.log_evaluate(c - h) - 2 * sm.log_evaluate(c) + sm.log_evaluate(c + h)) /
             (h * h);
    };
    const double left = d2(t - 5 * h);
    const double right = d2(t + 5 * h);
    CHECK(std::abs(left - right) < 0.15 * (1.0 + std::abs(left) + std::abs(right)));
  }
}

TEST_CASE("negative moment gap clamps to zero") {
  // hand-made report whose density variance exceeds the sample variance
  const WeightedSample tight({-0.1, 0.1}, {0.5, 0.5});
  FitReport rep = fit(WeightedSample({-2.0, 2.0}, {0.5, 0.5}));
  const SmoothedDensity sm = smooth(rep, tight);
  CHECK(sm.bandwidth_var() == 0.0);
  CHECK(sm.deficit_clamped());
}
