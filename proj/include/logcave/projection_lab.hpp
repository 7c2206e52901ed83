#ifndef LOGCAVE_PROJECTION_LAB_HPP
#define LOGCAVE_PROJECTION_LAB_HPP

#include <cstdint>
#include <vector>

#include "logcave/density.hpp"

namespace logcave {

// rho(x) = (2e^x(x-1) - x^2 + 2) / (2e^x - 2 - 2x - x^2), continuously
// extended by rho(0) = 2. Continuous and strictly increasing; the factor
// in the Marshall-type CDF inequality. Both numerator and denominator
// vanish cubically at 0, so mid-range arguments are summed by series and
// |x| < 1e-4 uses the expansion of the ratio itself.
double rho(double x);

// Outcome of the integrated-CDF optimality check: a fitted density d is
// the log-concave projection of the law behind F exactly when
// H(x) = int_{-inf}^x (F_d - F) stays <= 0 everywhere and vanishes where
// the log-density genuinely changes slope, and at +inf. Support endpoints
// are not slope changes; for fits on data the endpoint equalities hold
// automatically, and truncated oracle representations carry documented
// tail mass where the equality is not meaningful.
struct CharacterizationReport {
  double max_excess = 0.0;    // global max of H (positive part)
  double max_knot_abs = 0.0;  // worst |H| at slope-change knots and +inf
  double tol = 0.0;
  bool pass = false;
};

// Symmetrised Pareto law: density alpha sigma^alpha / (2 (|x|+sigma)^{alpha+1}).
// Heavy-tailed, log-convex in |x|; its log-concave projection is Laplace.
class SymmetrizedPareto {
public:
  SymmetrizedPareto(double alpha, double sigma);

  double alpha() const { return alpha_; }
  double sigma() const { return sigma_; }
  double pdf(double x) const;
  double cdf(double x) const;
  double cdf_integral(double x) const;  // int_{-inf}^x F, closed form
  double mean() const { return 0.0; }   // symmetric, finite for alpha > 1

private:
  double alpha_, sigma_;
};

CharacterizationReport verify_characterization(const PiecewiseLogLinear& d,
                                               const StepCdf& F, double tol = 1e-6);
CharacterizationReport verify_characterization(const PiecewiseLogLinear& d,
                                               const PiecewiseLogLinear& F,
                                               double tol = 1e-6);
CharacterizationReport verify_characterization(const PiecewiseLogLinear& d,
                                               const SymmetrizedPareto& F,
                                               double tol = 1e-5);

// Log-concave projection of SymmetrizedPareto(alpha, sigma): the Laplace
// density with rate (alpha-1)/sigma, represented on a truncated grid with
// mass deficit below 1e-12. Throws ExistenceError for alpha <= 1 (no
// finite first moment, so no projection exists).
PiecewiseLogLinear pareto_projection(double alpha, double sigma);

// One-affine-piece law f_{alpha,s1,s2}: uniform on [s1,s2] when alpha = 0,
// otherwise the exponential tilt e^{alpha x} restricted to [s1,s2].
// Unbounded supports are allowed when the tilt decays: s1 = -inf requires
// alpha > 0, s2 = +inf requires alpha < 0.
class KAffineLaw {
public:
  KAffineLaw(double alpha, double s1, double s2);

  double alpha() const { return alpha_; }
  double s1() const { return s1_; }
  double s2() const { return s2_; }
  double kappa_star() const;  // alpha (s2 - s1)

  double log_pdf(double x) const;
  double cdf(double x) const;
  double quantile(double p) const;
  std::vector<double> draw(std::size_t n, std::uint64_t seed) const;

  // truncated representation (mass deficit <= 1e-12 on unbounded sides)
  PiecewiseLogLinear density() const;

private:
  double alpha_, s1_, s2_;
};

// Members of the k-affine classes for k >= 2 from explicit knot and
// log-value lists, rescaled to unit mass.
PiecewiseLogLinear k_affine_from_knots(std::vector<double> knots,
                                       std::vector<double> logvals);

struct MarshallCheck {
  double lhs = 0.0;    // sup_x |F_hat(x) - F0(x)|
  double rhs = 0.0;    // rho(|kappa|) * sup_x |F_n(x) - F0(x)|
  double kappa = 0.0;  // alpha (X_(n) - X_(1))
  bool pass = false;
};

// Exact evaluation of both sides of the Marshall-type inequality for one
// dataset drawn from `truth`, with `fitted` the log-concave MLE of the
// draws. Both suprema are attained on breakpoint/stationary candidates
// and are computed there exactly.
MarshallCheck marshall_check(const KAffineLaw& truth, const std::vector<double>& draws,
                             const PiecewiseLogLinear& fitted);

// L1 distance between the projection of
// P_n = (1 - 1/n) U{-1,1} + (1/n) U{-(n+1), n+1} and the uniform density
// on [-1,1]. Converges to 4/(sqrt 5 + 1) although P_n converges weakly to
// U{-1,1}, whose projection is the uniform itself.
double mallows_counterexample(long n);

}  // namespace logcave

#endif
