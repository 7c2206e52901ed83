#ifndef LOGCAVE_SMOOTHING_HPP
#define LOGCAVE_SMOOTHING_HPP

#include "logcave/active_set.hpp"
#include "logcave/density.hpp"

namespace logcave {

// The fitted density convolved with a centered Gaussian whose variance is
// the moment deficit of the fit (sample variance minus fitted variance).
// Log-concave, real-analytic, supported on all of R, and matching the
// first two sample moments exactly.
class SmoothedDensity {
public:
  SmoothedDensity(PiecewiseLogLinear base, double bandwidth_var);

  const PiecewiseLogLinear& base() const { return base_; }
  double bandwidth_var() const { return bandwidth_var_; }
  bool deficit_clamped() const { return clamped_; }

  // closed-form convolution: per segment an exponential shift times a
  // Gaussian CDF difference, summed in log space
  double evaluate(double x) const;
  double log_evaluate(double x) const;

  Moments moments() const;  // (base mean, base variance + bandwidth)

private:
  PiecewiseLogLinear base_;
  double bandwidth_var_;
  bool clamped_ = false;

  friend SmoothedDensity smooth(const FitReport&, const WeightedSample&);
};

// Bandwidth selection is the moment-matching rule: the Gaussian variance
// is the (non-negative) gap between the sample variance and the fitted
// variance. A negative gap can only arise from rounding and clamps to 0.
SmoothedDensity smooth(const FitReport& fitted, const WeightedSample& sample);

// log(Phi(b) - Phi(a)) for a < b, stable in both far tails.
double log_normal_cdf_diff(double a, double b);

}  // namespace logcave

#endif
