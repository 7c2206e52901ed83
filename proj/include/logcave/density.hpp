#ifndef LOGCAVE_DENSITY_HPP
#define LOGCAVE_DENSITY_HPP

#include <cstdint>
#include <vector>

namespace logcave {

struct Moments {
  double mean;
  double variance;
};

// Sorted distinct support points with positive weights summing to one.
// Raw data enters through from_raw(), which collapses tied values into
// weights, so discrete laws and tied samples share one representation.
class WeightedSample {
public:
  WeightedSample(std::vector<double> points, std::vector<double> weights);

  static WeightedSample from_raw(std::vector<double> values);
  static WeightedSample from_raw_weighted(const std::vector<double>& values,
                                          const std::vector<double>& weights);

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

  double mean() const;
  double variance() const;  // weighted second central moment

private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

// Right-continuous distribution function of a WeightedSample, with the
// exact integrated CDF needed by the characterization verifier.
class StepCdf {
public:
  explicit StepCdf(const WeightedSample& sample);

  double value(double x) const;
  double integral(double x) const;  // int_{-inf}^x F(t) dt
  double mean() const { return mean_; }

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& cumulative() const { return cum_; }

private:
  std::vector<double> points_;
  std::vector<double> cum_;       // cum_[i] = F(points_[i])
  std::vector<double> cum_xw_;    // prefix sums of w_i * z_i
  double mean_;
};

// A log-concave density on the real line whose log is piecewise linear:
// knots x_1 < ... < x_m, log-values phi(x_k), value -inf outside
// [x_1, x_m]. Slopes are non-increasing (within 1e-9). Construction does
// not force unit mass -- oracle constructions carry documented mass
// deficits -- but every fitted density integrates to one; see
// total_mass().
//
// Immutable after construction; all methods are const and thread-safe.
class PiecewiseLogLinear {
public:
  PiecewiseLogLinear(std::vector<double> knots, std::vector<double> logvals);

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& log_values() const { return logvals_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double support_min() const { return knots_.front(); }
  double support_max() const { return knots_.back(); }
  double total_mass() const { return total_mass_; }

  // log f(x); -inf outside the support
  double log_evaluate(double x) const;
  // f(x) = exp(interpolated log-value) on the support, 0 outside
  double evaluate(double x) const;

  // exact cumulative mass int_{-inf}^x f
  double cdf(double x) const;
  // int_{-inf}^x F(t) dt, exact per segment
  double cdf_integral(double x) const;
  // inverse of cdf; p in [0,1] (throws std::domain_error otherwise)
  double quantile(double p) const;
  // n i.i.d. draws by inversion; deterministic given seed
  std::vector<double> draw(std::size_t n, std::uint64_t seed) const;
  // exact first and second central moments
  Moments moments() const;

private:
  std::size_t segment_of(double x) const;

  std::vector<double> knots_;
  std::vector<double> logvals_;
  std::vector<double> slopes_;
  std::vector<double> cum_mass_;  // cum_mass_[k] = mass of segments before k
  std::vector<double> cum_intF_;  // int F over segments before k
  double total_mass_;
};

// Distances between densities. All three are exact: integrands are
// resolved on the union of the knot grids, where each cell is a pure
// exponential (or zero) and sign changes have closed-form roots.
double tv_distance(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b);
double l1_distance(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b);
double hellinger_sq(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b);
// +inf when support(a) is not contained in support(b)
double kl_div(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b);

}  // namespace logcave

#endif
