#include "logcave/radial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "logcave/active_set.hpp"
#include "logcave/errors.hpp"
#include "logcave/parallel.hpp"

namespace logcave {

double RadialDensity::c_d() const { return std::exp(log_surface); }

double RadialDensity::evaluate_radius(double r) const {
  if (r <= 0.0) return 0.0;
  const double lh = h.log_evaluate(r);
  if (lh == -std::numeric_limits<double>::infinity()) return 0.0;
  return std::exp(lh - log_surface - (dim - 1) * std::log(r));
}

double RadialDensity::evaluate(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("RadialDensity: dimension mismatch");
  double s = 0.0;
  for (double v : x) s += v * v;
  return evaluate_radius(std::sqrt(s));
}

std::vector<double> row_norms_serial(const Matrix& points) {
  std::vector<double> z(points.rows);
  serial_for(points.rows, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < points.cols; ++j) s += points(i, j) * points(i, j);
    z[i] = std::sqrt(s);
  });
  return z;
}

std::vector<double> row_norms(const Matrix& points) {
  std::vector<double> z(points.rows);
  parallel_for(points.rows, [&](std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < points.cols; ++j) s += points(i, j) * points(i, j);
    z[i] = std::sqrt(s);
  });
  return z;
}

RadialDensity radial_fit(const Matrix& points) {
  if (points.cols < 1) throw std::domain_error("radial_fit: dimension must be >= 1");
  if (points.rows < 2) throw std::invalid_argument("radial_fit: need at least two points");
  const int d = static_cast<int>(points.cols);
  std::vector<double> z = row_norms(points);
  WeightedSample sample = WeightedSample::from_raw(std::move(z));
  if (sample.size() < 2)
    throw ExistenceError(ExistenceError::Kind::DegenerateSupport,
                         "all points have the same norm: the norm sample is "
                         "degenerate and no maximum-likelihood density exists");
  FitReport rep = fit(sample);
  const double half = 0.5 * d;
  const double log_c = std::log(2.0) + half * std::log(3.14159265358979323846) -
                       std::lgamma(half);
  return RadialDensity{d, std::move(rep.density), log_c};
}

}  // namespace logcave
