#include "logcave/projection_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "logcave/active_set.hpp"
#include "logcave/errors.hpp"
#include "logcave/rng.hpp"

namespace logcave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassDeficit = 1e-12;
}  // namespace

// ---------------------------------------------------------------------------
// rho

double rho(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    // expansion of the ratio at the removable singularity
    return 2.0 + x * (0.25 + x * (3.0 / 80.0));
  }
  if (ax <= 0.5) {
    // numerator 2 sum_{j>=3} (j-1) x^j / j!, denominator 2 sum_{j>=3} x^j / j!
    double term = x * x * x / 6.0;
    double num = 0.0, den = 0.0;
    for (int j = 3; j < 60; ++j) {
      num += (j - 1) * term;
      den += term;
      term *= x / (j + 1);
      if (std::abs(term) < 1e-22 * std::abs(den)) break;
    }
    return num / den;
  }
  const double ex = std::exp(x);
  return (2.0 * ex * (x - 1.0) - x * x + 2.0) / (2.0 * ex - 2.0 - 2.0 * x - x * x);
}

// ---------------------------------------------------------------------------
// SymmetrizedPareto

SymmetrizedPareto::SymmetrizedPareto(double alpha, double sigma)
    : alpha_(alpha), sigma_(sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("SymmetrizedPareto: sigma must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("SymmetrizedPareto: alpha must be positive");
}

double SymmetrizedPareto::pdf(double x) const {
  return alpha_ * std::pow(sigma_, alpha_) /
         (2.0 * std::pow(std::abs(x) + sigma_, alpha_ + 1.0));
}

double SymmetrizedPareto::cdf(double x) const {
  if (x < 0.0) return 0.5 * std::pow(sigma_ / (sigma_ - x), alpha_);
  return 1.0 - 0.5 * std::pow(sigma_ / (sigma_ + x), alpha_);
}

double SymmetrizedPareto::cdf_integral(double x) const {
  // int_{-inf}^x F with F as above; needs alpha > 1 for convergence
  if (!(alpha_ > 1.0))
    throw std::domain_error("SymmetrizedPareto: integrated CDF needs alpha > 1");
  const double a = alpha_, s = sigma_;
  const double c = 0.5 * std::pow(s, a) / (a - 1.0);
  if (x <= 0.0) return c * std::pow(s - x, 1.0 - a);
  // value at 0 plus int_0^x (1 - 0.5 (s/(s+t))^a) dt
  return c * std::pow(s, 1.0 - a) + x + c * (std::pow(s + x, 1.0 - a) - std::pow(s, 1.0 - a));
}

// ---------------------------------------------------------------------------
// Characterization verifier

namespace {

// What the generic engine needs from the reference law.
struct RefLaw {
  std::vector<double> breaks;                  // where F stops being smooth
  double (*cdf)(const void*, double);
  double (*integral)(const void*, double);
  bool smooth;                                 // has a density (interior stationary points possible)
  double mean;
  const void* self;
};

CharacterizationReport verify_engine(const PiecewiseLogLinear& d, const RefLaw& ref,
                                     double tol) {
  auto H = [&](double x) { return d.cdf_integral(x) - ref.integral(ref.self, x); };

  std::vector<double> cand = d.knots();
  cand.insert(cand.end(), ref.breaks.begin(), ref.breaks.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  CharacterizationReport rep;
  rep.tol = tol;

  double max_h = -kInf;
  for (double x : cand) max_h = std::max(max_h, H(x));

  if (ref.smooth) {
    // interior maxima of H where F_d = F; bracket sign changes of
    // H' = F_d - F on a subgrid, then bisect
    auto hprime = [&](double x) { return d.cdf(x) - ref.cdf(ref.self, x); };
    for (std::size_t c = 0; c + 1 < cand.size(); ++c) {
      const double lo = cand[c], hi = cand[c + 1];
      const int sub = 32;
      double prev_x = lo, prev_s = hprime(lo);
      for (int s = 1; s <= sub; ++s) {
        const double x = lo + (hi - lo) * s / sub;
        const double cur = hprime(x);
        if ((prev_s > 0.0) != (cur > 0.0)) {
          double a = prev_x, b = x;
          for (int it = 0; it < 80; ++it) {
            const double m = 0.5 * (a + b);
            if ((hprime(m) > 0.0) == (prev_s > 0.0))
              a = m;
            else
              b = m;
          }
          max_h = std::max(max_h, H(0.5 * (a + b)));
        }
        prev_x = x;
        prev_s = cur;
      }
    }
  }

  // x -> +inf: H tends to mean(F) - mean(d), monotonically beyond the last
  // breakpoint, so it is a candidate for both checks
  const double h_inf = ref.mean - d.moments().mean;
  max_h = std::max(max_h, h_inf);
  rep.max_excess = std::max(0.0, max_h);

  // equality where the log-density changes slope (interior knots only)
  double knot_abs = std::abs(h_inf);
  const auto& slopes = d.slopes();
  for (std::size_t k = 1; k + 1 < d.knots().size(); ++k)
    if (slopes[k] < slopes[k - 1] - 1e-9)
      knot_abs = std::max(knot_abs, std::abs(H(d.knots()[k])));
  rep.max_knot_abs = knot_abs;

  rep.pass = rep.max_excess <= tol && rep.max_knot_abs <= tol;
  return rep;
}

}  // namespace

CharacterizationReport verify_characterization(const PiecewiseLogLinear& d,
                                               const StepCdf& F, double tol) {
  RefLaw ref;
  ref.breaks = F.points();
  ref.cdf = [](const void* s, double x) { return static_cast<const StepCdf*>(s)->value(x); };
  ref.integral = [](const void* s, double x) {
    return static_cast<const StepCdf*>(s)->integral(x);
  };
  ref.smooth = false;
  ref.mean = F.mean();
  ref.self = &F;
  return verify_engine(d, ref, tol);
}

CharacterizationReport verify_characterization(const PiecewiseLogLinear& d,
                                               const PiecewiseLogLinear& F, double tol) {
  RefLaw ref;
  ref.breaks = F.knots();
  ref.cdf = [](const void* s, double x) {
    return static_cast<const PiecewiseLogLinear*>(s)->cdf(x);
  };
  ref.integral = [](const void* s, double x) {
    return static_cast<const PiecewiseLogLinear*>(s)->cdf_integral(x);
  };
  ref.smooth = true;
  ref.mean = F.moments().mean;
  ref.self = &F;
  return verify_engine(d, ref, tol);
}

CharacterizationReport verify_characterization(const PiecewiseLogLinear& d,
                                               const SymmetrizedPareto& F, double tol) {
  RefLaw ref;
  ref.breaks = {0.0};
  ref.cdf = [](const void* s, double x) {
    return static_cast<const SymmetrizedPareto*>(s)->cdf(x);
  };
  ref.integral = [](const void* s, double x) {
    return static_cast<const SymmetrizedPareto*>(s)->cdf_integral(x);
  };
  ref.smooth = true;
  ref.mean = F.mean();
  ref.self = &F;
  return verify_engine(d, ref, tol);
}

// ---------------------------------------------------------------------------
// Closed-form projections and one-piece laws

PiecewiseLogLinear pareto_projection(double alpha, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("pareto_projection: sigma must be positive");
  if (!(alpha > 1.0))
    throw ExistenceError(ExistenceError::Kind::InfiniteFirstMoment,
                         "the law has no finite first absolute moment, so no "
                         "log-concave projection exists");
  const double rate = (alpha - 1.0) / sigma;
  const double t = -std::log(kMassDeficit) / rate;  // e^{-rate t} = deficit
  const double peak = std::log(0.5 * rate);
  return PiecewiseLogLinear({-t, 0.0, t}, {peak - rate * t, peak, peak - rate * t});
}

KAffineLaw::KAffineLaw(double alpha, double s1, double s2)
    : alpha_(alpha), s1_(s1), s2_(s2) {
  const bool finite = std::isfinite(s1) && std::isfinite(s2) && s1 < s2;
  const bool left_tail = !std::isfinite(s1) && s1 < 0 && std::isfinite(s2) && alpha > 0.0;
  const bool right_tail = std::isfinite(s1) && !std::isfinite(s2) && s2 > 0 && alpha < 0.0;
  if (!(finite || left_tail || right_tail))
    throw std::domain_error(
        "KAffineLaw: need a bounded interval, or an unbounded side with a "
        "decaying exponential tilt");
}

double KAffineLaw::kappa_star() const {
  if (alpha_ == 0.0) return 0.0;
  return alpha_ * (s2_ - s1_);
}

double KAffineLaw::log_pdf(double x) const {
  if (x < s1_ || x > s2_) return -kInf;
  if (alpha_ == 0.0) return -std::log(s2_ - s1_);
  double lognorm;  // log of int e^{alpha (x - anchor)} over the support
  double anchor;
  if (!std::isfinite(s2_)) {
    lognorm = -std::log(-alpha_);
    anchor = s1_;
  } else if (!std::isfinite(s1_)) {
    lognorm = -std::log(alpha_);
    anchor = s2_;
  } else {
    lognorm = std::log(std::expm1(alpha_ * (s2_ - s1_)) / alpha_);
    anchor = s1_;
  }
  return alpha_ * (x - anchor) - lognorm;
}

double KAffineLaw::cdf(double x) const {
  if (x <= s1_) return 0.0;
  if (x >= s2_) return 1.0;
  if (alpha_ == 0.0) return (x - s1_) / (s2_ - s1_);
  if (!std::isfinite(s2_)) return -std::expm1(alpha_ * (x - s1_));
  if (!std::isfinite(s1_)) return std::exp(alpha_ * (x - s2_));
  return std::expm1(alpha_ * (x - s1_)) / std::expm1(alpha_ * (s2_ - s1_));
}

double KAffineLaw::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("KAffineLaw: p outside [0,1]");
  if (alpha_ == 0.0) return s1_ + p * (s2_ - s1_);
  if (!std::isfinite(s2_)) return s1_ + std::log1p(-p) / alpha_;
  if (!std::isfinite(s1_)) return s2_ + std::log(p) / alpha_;
  return s1_ + std::log1p(p * std::expm1(alpha_ * (s2_ - s1_))) / alpha_;
}

std::vector<double> KAffineLaw::draw(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(rng.u01());
  return out;
}

PiecewiseLogLinear KAffineLaw::density() const {
  double a = s1_, b = s2_;
  if (!std::isfinite(b)) b = s1_ - std::log(kMassDeficit) / std::abs(alpha_);
  if (!std::isfinite(a)) a = s2_ + std::log(kMassDeficit) / alpha_;
  return PiecewiseLogLinear({a, b}, {log_pdf(a), log_pdf(b)});
}

PiecewiseLogLinear k_affine_from_knots(std::vector<double> knots,
                                       std::vector<double> logvals) {
  const PiecewiseLogLinear raw(knots, logvals);
  const double shift = std::log(raw.total_mass());
  for (double& v : logvals) v -= shift;
  return PiecewiseLogLinear(std::move(knots), std::move(logvals));
}

// ---------------------------------------------------------------------------
// Marshall inequality

MarshallCheck marshall_check(const KAffineLaw& truth, const std::vector<double>& draws,
                             const PiecewiseLogLinear& fitted) {
  MarshallCheck out;
  std::vector<double> x = draws;
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();

  // empirical side: sup |F_n - F0| at the jump points, both one-sided limits
  double sup_emp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f0 = truth.cdf(x[i]);
    sup_emp = std::max(sup_emp, std::abs(static_cast<double>(i + 1) / n - f0));
    sup_emp = std::max(sup_emp, std::abs(static_cast<double>(i) / n - f0));
  }

  out.kappa = truth.alpha() * (x.back() - x.front());

  // fitted side: |F_hat - F0| is piecewise smooth; its stationary points
  // solve f_hat = f0, a linear equation in x per cell
  std::vector<double> cand = fitted.knots();
  if (std::isfinite(truth.s1())) cand.push_back(truth.s1());
  if (std::isfinite(truth.s2())) cand.push_back(truth.s2());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  double sup_fit = 0.0;
  auto consider = [&](double t) {
    sup_fit = std::max(sup_fit, std::abs(fitted.cdf(t) - truth.cdf(t)));
  };
  for (std::size_t c = 0; c < cand.size(); ++c) {
    consider(cand[c]);
    if (c + 1 == cand.size()) break;
    const double lo = cand[c], hi = cand[c + 1];
    // density of the truth on the cell: log f0 = log c0 + alpha x (if inside)
    const bool truth_in = lo >= truth.s1() && hi <= truth.s2();
    const bool fit_in = lo >= fitted.support_min() && hi <= fitted.support_max();
    if (!truth_in || !fit_in) continue;
    const double lf0 = fitted.log_evaluate(lo);
    const double lf1 = fitted.log_evaluate(hi);
    const double bslope = (lf1 - lf0) / (hi - lo);
    const double aslope = truth.alpha();
    if (bslope != aslope) {
      const double root = lo + (truth.log_pdf(lo) - lf0) / (bslope - aslope);
      if (root > lo && root < hi) consider(root);
    }
  }
  out.lhs = sup_fit;
  out.rhs = rho(std::abs(out.kappa)) * sup_emp;
  out.pass = out.lhs <= out.rhs + 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Mallows counterexample

double mallows_counterexample(long n) {
  if (n < 2) throw std::invalid_argument("mallows_counterexample: n must be >= 2");
  const double nn = static_cast<double>(n);
  const WeightedSample p({-(nn + 1.0), -1.0, 1.0, nn + 1.0},
                         {1.0 / (2 * nn), (nn - 1.0) / (2 * nn),
                          (nn - 1.0) / (2 * nn), 1.0 / (2 * nn)});
  const FitReport rep = fit(p);
  const PiecewiseLogLinear uniform({-1.0, 1.0}, {std::log(0.5), std::log(0.5)});
  return l1_distance(rep.density, uniform);
}

}  // namespace logcave
