#ifndef LOGCAVE_JFUN_HPP
#define LOGCAVE_JFUN_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace logcave {

// J(r,s) = integral over t in [0,1] of exp((1-t)r + t s) dt, the exact mass
// of one unit-length log-linear segment. Every segment integral in the
// library (masses, moments, CDFs) reduces to J and its partials, so the
// small-gap Taylor guards here are the single place where the
// exp-difference cancellation is handled.
//
// Arguments above 700 would overflow exp; j_value saturates to +inf there
// and callers treat a non-finite value as an infeasible iterate.

struct JParts {
  double dr, ds;        // first partials
  double drr, drs, dss; // second partials
};

inline double j_value(double r, double s) {
  if (std::max(r, s) > 700.0) return std::numeric_limits<double>::infinity();
  const double d = std::abs(s - r);
  if (d < 1e-5) {
    const double d2 = d * d;
    return std::exp(0.5 * (r + s)) * (1.0 + d2 / 24.0 * (1.0 + d2 / 80.0));
  }
  const double lo = std::min(r, s);
  if (d > 690.0) return std::exp(std::max(r, s) - std::log(d));
  return std::exp(lo) * std::expm1(d) / d;
}

inline JParts j_partials(double r, double s) {
  const double inf = std::numeric_limits<double>::infinity();
  if (std::max(r, s) > 700.0) return {inf, inf, inf, inf, inf};
  const double d = s - r;
  if (std::abs(d) <= 0.5) {
    // factorial series in d, factored by e^r. The closed forms lose up to
    // six digits to cancellation when |d| is small (their numerators are
    // O(d^2) and O(d^3) differences of O(1) terms), so the series carries
    // the whole moderate range; 17 terms reach full precision at |d|=0.5.
    double term = 1.0;  // d^k / k!
    double jr = 0, js = 0, jrr = 0, jrs = 0, jss = 0;
    for (int k = 0; k <= 16; ++k) {
      jr += term / ((k + 1.0) * (k + 2.0));
      js += term / (k + 2.0);
      jrr += term * 2.0 / ((k + 1.0) * (k + 2.0) * (k + 3.0));
      jrs += term / ((k + 2.0) * (k + 3.0));
      jss += term / (k + 3.0);
      term *= d / (k + 1);
    }
    const double er = std::exp(r);
    return {er * jr, er * js, er * jrr, er * jrs, er * jss};
  }
  if (d > 690.0) {
    // e^d dominates every bracket
    const double es = std::exp(s), d2 = d * d, d3 = d2 * d;
    return {es / d2, es * (d - 1) / d2, 2 * es / d3, es * (d - 2) / d3,
            es * (d * d - 2 * d + 2) / d3};
  }
  if (d < -690.0) {
    // e^d vanishes
    const double er = std::exp(r), d2 = d * d, d3 = d2 * d;
    return {er * (-1 - d) / d2, er / d2, -er * (d2 + 2 * d + 2) / d3,
            er * (d + 2) / d3, -2 * er / d3};
  }
  const double er = std::exp(r);
  const double ed = std::exp(d);
  const double em = std::expm1(d);
  const double d2 = d * d, d3 = d2 * d;
  return {er * (em - d) / d2, er * (ed * (d - 1) + 1) / d2,
          er * (2 * em - 2 * d - d2) / d3, er * (ed * (d - 2) + d + 2) / d3,
          er * (ed * (d2 - 2 * d + 2) - 2) / d3};
}

}  // namespace logcave

#endif
