// Test-side numerical oracles, independent of the library's closed-form
// integration paths: adaptive quadrature, fixed-order Gauss-Legendre,
// central finite differences, and a Sturm-sequence eigenvalue bound for
// symmetric tridiagonal matrices.

#ifndef LOGCAVE_TESTS_ORACLE_HPP
#define LOGCAVE_TESTS_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Adaptive Simpson with absolute tolerance.
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fm, double fb, double whole,
                           double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integration split at the given breakpoints so each cell is smooth.
inline double integrate_cells(const std::function<double(double)>& f,
                              std::vector<double> breaks, double tol = 1e-10) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    total += integrate(f, breaks[i], breaks[i + 1], tol);
  return total;
}

// Composite midpoint rule per cell. Slower than the adaptive rule but not
// fooled by interior kinks (e.g. |f - g| at a crossing), where adaptive
// error estimators can terminate early.
inline double integrate_cells_midpoint(const std::function<double(double)>& f,
                                       std::vector<double> breaks,
                                       long points_per_cell = 50000) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double h = (breaks[i + 1] - breaks[i]) / points_per_cell;
    double s = 0.0;
    for (long k = 0; k < points_per_cell; ++k)
      s += f(breaks[i] + (k + 0.5) * h);
    total += s * h;
  }
  return total;
}

// 64-point Gauss-Legendre on [0,1] (for the segment-mass oracle).
inline double gauss_legendre_01(const std::function<double(double)>& f) {
  static std::vector<double> x, w;
  if (x.empty()) {
    // nodes/weights for n=64 computed by Newton on the Legendre recurrence
    const int n = 64;
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
      double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-16) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x[i] = 0.5 * (1.0 + t);
      w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
  }
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(x[i]);
  return s;
}

// Central finite-difference gradient.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Largest eigenvalue of a symmetric tridiagonal matrix by bisection on the
// Sturm sequence count.
inline double tridiag_max_eigenvalue(const std::vector<double>& diag,
                                     const std::vector<double>& off) {
  const std::size_t n = diag.size();
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  auto count_below = [&](double lambda) {
    // number of eigenvalues < lambda via the Sturm sequence
    int count = 0;
    double d = diag[0] - lambda;
    if (d < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
      const double o = off[i - 1];
      d = diag[i] - lambda - (d == 0.0 ? std::abs(o) / 1e-300 : o * o / d);
      if (d < 0.0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) == static_cast<int>(n))
      hi = mid;  // all eigenvalues below mid
    else
      lo = mid;
    if (hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) break;
  }
  return hi;
}

// Kolmogorov-Smirnov statistic of draws against a CDF.
inline double ks_statistic(std::vector<double> draws,
                           const std::function<double(double)>& cdf) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = cdf(draws[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

}  // namespace oracle

#endif
