#ifndef LOGCAVE_RADIAL_HPP
#define LOGCAVE_RADIAL_HPP

#include <span>

#include "logcave/density.hpp"
#include "logcave/linalg.hpp"

namespace logcave {

// Spherically symmetric estimator in d dimensions built from the 1-D
// log-concave MLE of the Euclidean norms Z_i = |X_i|:
//
//   f(x) = h(|x|) / (c_d |x|^{d-1})   for x != 0,   f(0) = 0,
//
// with c_d = 2 pi^{d/2} / Gamma(d/2) the surface area factor. Only the
// norms enter the solver, so memory and fit cost are independent of d.
struct RadialDensity {
  int dim = 1;
  PiecewiseLogLinear h;       // fitted density of the norms, support in [0, inf)
  double log_surface = 0.0;   // log c_d

  double c_d() const;
  double evaluate_radius(double r) const;  // 0 at r = 0 and outside supp(h)
  double evaluate(std::span<const double> x) const;
};

// Fit from an n x d data matrix: norms are computed (in parallel for large
// inputs), ties collapse into weights, and the 1-D solver runs on the
// result. Throws ExistenceError when all norms coincide.
RadialDensity radial_fit(const Matrix& points);

// Serial reference for the norm kernel; the parallel path must match it
// bit for bit.
std::vector<double> row_norms_serial(const Matrix& points);
std::vector<double> row_norms(const Matrix& points);

}  // namespace logcave

#endif
