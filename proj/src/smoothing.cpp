#include "logcave/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace logcave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// log Phi(-x) for x >= 0 (upper-tail log-probability at -x)
double log_normal_tail(double x) {
  const double z = x * 0.7071067811865475244;  // x / sqrt(2)
  if (z < 25.0) return std::log(0.5 * std::erfc(z));
  // asymptotic erfc(z) ~ e^{-z^2}/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4))
  const double z2 = z * z;
  return -z2 - std::log(z) - 0.5723649429247001 /* log sqrt(pi) */ -
         0.6931471805599453 /* log 2 */ + std::log1p(-0.5 / z2 + 0.75 / (z2 * z2));
}

}  // namespace

double log_normal_cdf_diff(double a, double b) {
  if (!(a < b)) return -kInf;
  if (a >= 0.0) {
    // both tails on the right: Phi(b)-Phi(a) = Phi(-a) - Phi(-b)
    const double la = log_normal_tail(a);
    const double lb = log_normal_tail(b);
    return la + std::log1p(-std::exp(lb - la));
  }
  if (b <= 0.0) return log_normal_cdf_diff(-b, -a);
  // straddles zero; no cancellation danger
  const double lo = 0.5 * std::erfc(-a * 0.7071067811865475244);
  const double hi = 0.5 * std::erfc(-b * 0.7071067811865475244);
  return std::log(hi - lo);
}

SmoothedDensity::SmoothedDensity(PiecewiseLogLinear base, double bandwidth_var)
    : base_(std::move(base)), bandwidth_var_(bandwidth_var) {
  if (!(bandwidth_var >= 0.0))
    throw std::invalid_argument("SmoothedDensity: bandwidth variance must be >= 0");
}

double SmoothedDensity::log_evaluate(double x) const {
  if (bandwidth_var_ == 0.0) return base_.log_evaluate(x);
  const double sigma = std::sqrt(bandwidth_var_);
  const auto& knots = base_.knots();
  const auto& logv = base_.log_values();
  const auto& slope = base_.slopes();

  // per-segment exponents, combined by log-sum-exp
  double best = -kInf;
  std::vector<double> terms(knots.size() - 1, -kInf);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double b = slope[k];
    const double mu = x + b * bandwidth_var_;
    const double e = logv[k] + b * (x - knots[k]) + 0.5 * b * b * bandwidth_var_;
    const double phi = log_normal_cdf_diff((knots[k] - mu) / sigma,
                                           (knots[k + 1] - mu) / sigma);
    terms[k] = e + phi;
    best = std::max(best, terms[k]);
  }
  if (best == -kInf) return -kInf;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - best);
  return best + std::log(acc);
}

double SmoothedDensity::evaluate(double x) const {
  const double l = log_evaluate(x);
  return l == -kInf ? 0.0 : std::exp(l);
}

Moments SmoothedDensity::moments() const {
  const Moments m = base_.moments();
  return {m.mean, m.variance + bandwidth_var_};
}

SmoothedDensity smooth(const FitReport& fitted, const WeightedSample& sample) {
  const double deficit = sample.variance() - fitted.density.moments().variance;
  SmoothedDensity s(fitted.density, std::max(deficit, 0.0));
  s.clamped_ = deficit < 0.0;
  return s;
}

}  // namespace logcave
