#include "logcave/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "logcave/jfun.hpp"
#include "logcave/rng.hpp"

namespace logcave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConcavityTol = 1e-9;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

// ---------------------------------------------------------------------------
// WeightedSample

WeightedSample::WeightedSample(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  require(!points_.empty(), "WeightedSample: empty support");
  require(points_.size() == weights_.size(), "WeightedSample: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require(std::isfinite(points_[i]), "WeightedSample: non-finite point");
    require(weights_[i] > 0.0 && std::isfinite(weights_[i]),
            "WeightedSample: weights must be positive");
    require(i == 0 || points_[i] > points_[i - 1],
            "WeightedSample: points must be strictly increasing");
    sum += weights_[i];
  }
  require(std::abs(sum - 1.0) <= 1e-12, "WeightedSample: weights must sum to 1");
}

WeightedSample WeightedSample::from_raw(std::vector<double> values) {
  std::vector<double> w(values.size(), 1.0);
  return from_raw_weighted(values, w);
}

WeightedSample WeightedSample::from_raw_weighted(const std::vector<double>& values,
                                                 const std::vector<double>& weights) {
  require(!values.empty(), "WeightedSample: no data");
  require(values.size() == weights.size(), "WeightedSample: size mismatch");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> pts, wts;
  double total = 0.0;
  for (std::size_t k : order) {
    require(std::isfinite(values[k]), "WeightedSample: non-finite value");
    require(weights[k] > 0.0 && std::isfinite(weights[k]),
            "WeightedSample: weights must be positive");
    if (!pts.empty() && values[k] == pts.back()) {
      wts.back() += weights[k];  // tie collapses into the weight
    } else {
      pts.push_back(values[k]);
      wts.push_back(weights[k]);
    }
    total += weights[k];
  }
  for (double& w : wts) w /= total;
  return WeightedSample(std::move(pts), std::move(wts));
}

double WeightedSample::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) m += weights_[i] * points_[i];
  return m;
}

double WeightedSample::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = points_[i] - m;
    v += weights_[i] * d * d;
  }
  return v;
}

// ---------------------------------------------------------------------------
// StepCdf

StepCdf::StepCdf(const WeightedSample& sample)
    : points_(sample.points()), cum_(sample.size()), cum_xw_(sample.size()) {
  double c = 0.0, cx = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    c += sample.weights()[i];
    cx += sample.weights()[i] * points_[i];
    cum_[i] = c;
    cum_xw_[i] = cx;
  }
  cum_.back() = 1.0;
  mean_ = cx;
}

double StepCdf::value(double x) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), x);
  if (it == points_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - points_.begin()) - 1];
}

double StepCdf::integral(double x) const {
  // int_{-inf}^x F = sum_{z_i <= x} w_i (x - z_i)
  auto it = std::upper_bound(points_.begin(), points_.end(), x);
  if (it == points_.begin()) return 0.0;
  const std::size_t i = static_cast<std::size_t>(it - points_.begin()) - 1;
  return cum_[i] * x - cum_xw_[i];
}

// ---------------------------------------------------------------------------
// PiecewiseLogLinear

PiecewiseLogLinear::PiecewiseLogLinear(std::vector<double> knots,
                                       std::vector<double> logvals)
    : knots_(std::move(knots)), logvals_(std::move(logvals)) {
  require(knots_.size() >= 2, "PiecewiseLogLinear: need at least two knots");
  require(knots_.size() == logvals_.size(), "PiecewiseLogLinear: size mismatch");
  const std::size_t m = knots_.size();
  slopes_.resize(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    require(std::isfinite(knots_[k]) && std::isfinite(logvals_[k]),
            "PiecewiseLogLinear: non-finite input");
    if (k + 1 < m) {
      require(knots_[k + 1] > knots_[k],
              "PiecewiseLogLinear: knots must be strictly increasing");
      slopes_[k] = (logvals_[k + 1] - logvals_[k]) / (knots_[k + 1] - knots_[k]);
    }
  }
  for (std::size_t k = 0; k + 1 < slopes_.size(); ++k)
    require(slopes_[k + 1] <= slopes_[k] + kConcavityTol,
            "PiecewiseLogLinear: log-values are not concave");

  cum_mass_.resize(m);
  cum_intF_.resize(m);
  cum_mass_[0] = 0.0;
  cum_intF_[0] = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double delta = knots_[k + 1] - knots_[k];
    const double seg = delta * j_value(logvals_[k], logvals_[k + 1]);
    cum_mass_[k + 1] = cum_mass_[k] + seg;
    // int over the segment of F(t) = cum + partial(t): the double integral
    // of the density is delta^2 Jr(phi_k, phi_{k+1})
    const double g = delta * delta * j_partials(logvals_[k], logvals_[k + 1]).dr;
    cum_intF_[k + 1] = cum_intF_[k] + cum_mass_[k] * delta + g;
  }
  total_mass_ = cum_mass_.back();
  require(std::isfinite(total_mass_) && total_mass_ > 0.0,
          "PiecewiseLogLinear: mass is not finite and positive");
}

std::size_t PiecewiseLogLinear::segment_of(double x) const {
  // largest k with knots_[k] <= x, clamped into [0, m-2]
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - knots_.begin());
  if (k == 0) return 0;
  if (k >= knots_.size()) return knots_.size() - 2;
  return k - 1;
}

double PiecewiseLogLinear::log_evaluate(double x) const {
  if (x < knots_.front() || x > knots_.back()) return -kInf;
  const std::size_t k = segment_of(x);
  return logvals_[k] + slopes_[k] * (x - knots_[k]);
}

double PiecewiseLogLinear::evaluate(double x) const {
  const double l = log_evaluate(x);
  return l == -kInf ? 0.0 : std::exp(l);
}

double PiecewiseLogLinear::cdf(double x) const {
  if (x <= knots_.front()) return 0.0;
  if (x >= knots_.back()) return total_mass_;
  const std::size_t k = segment_of(x);
  const double u = x - knots_[k];
  return cum_mass_[k] + u * j_value(logvals_[k], logvals_[k] + slopes_[k] * u);
}

double PiecewiseLogLinear::cdf_integral(double x) const {
  if (x <= knots_.front()) return 0.0;
  if (x >= knots_.back())
    return cum_intF_.back() + total_mass_ * (x - knots_.back());
  const std::size_t k = segment_of(x);
  const double u = x - knots_[k];
  const double g =
      u * u * j_partials(logvals_[k], logvals_[k] + slopes_[k] * u).dr;
  return cum_intF_[k] + cum_mass_[k] * u + g;
}

double PiecewiseLogLinear::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("quantile: p must lie in [0,1]");
  if (p == 0.0) return knots_.front();
  if (p == 1.0) return knots_.back();
  const double target = p * total_mass_;
  // segment with cum_mass_[k] <= target < cum_mass_[k+1]
  auto it = std::upper_bound(cum_mass_.begin(), cum_mass_.end(), target);
  std::size_t k = static_cast<std::size_t>(it - cum_mass_.begin());
  k = (k == 0) ? 0 : k - 1;
  if (k >= knots_.size() - 1) k = knots_.size() - 2;
  const double q = target - cum_mass_[k];
  if (q <= 0.0) return knots_[k];
  const double a = logvals_[k], b = slopes_[k];
  const double delta = knots_[k + 1] - knots_[k];
  double u;
  if (b == 0.0) {
    u = q * std::exp(-a);
    if (!std::isfinite(u)) u = std::exp(std::log(q) - a);
  } else {
    // u = log1p(q b e^{-a}) / b, with a log-space route when e^{-a} overflows
    const double lz = std::log(q * std::abs(b)) - a;
    if (b > 0.0 && lz > 33.0) {
      u = lz / b;
    } else {
      double z = (b > 0.0 ? 1.0 : -1.0) * std::exp(lz);
      if (z <= -1.0) z = std::nextafter(-1.0, 0.0);  // guard rounding at full segment mass
      u = std::log1p(z) / b;
    }
  }
  u = std::clamp(u, 0.0, delta);
  return knots_[k] + u;
}

std::vector<double> PiecewiseLogLinear::draw(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(rng.u01());
  return out;
}

Moments PiecewiseLogLinear::moments() const {
  // accumulate around the support midpoint to avoid cancellation
  const double ref = 0.5 * (knots_.front() + knots_.back());
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k + 1 < knots_.size(); ++k) {
    const double delta = knots_[k + 1] - knots_[k];
    const double x0 = knots_[k] - ref;
    const double jv = j_value(logvals_[k], logvals_[k + 1]);
    const JParts jp = j_partials(logvals_[k], logvals_[k + 1]);
    const double seg0 = delta * jv;
    const double seg1 = delta * delta * jp.ds;
    const double seg2 = delta * delta * delta * jp.dss;
    m0 += seg0;
    m1 += x0 * seg0 + seg1;
    m2 += x0 * x0 * seg0 + 2.0 * x0 * seg1 + seg2;
  }
  const double mean_c = m1 / m0;
  return {ref + mean_c, m2 / m0 - mean_c * mean_c};
}

// ---------------------------------------------------------------------------
// Distances

namespace {

// Union of knots of both densities, sorted and deduplicated.
std::vector<double> cell_grid(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b) {
  std::vector<double> g;
  g.reserve(a.knots().size() + b.knots().size());
  g.insert(g.end(), a.knots().begin(), a.knots().end());
  g.insert(g.end(), b.knots().begin(), b.knots().end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Cells come from the union grid, so each lies entirely inside or outside
// a density's support.
bool in_support(const PiecewiseLogLinear& d, double lo, double hi) {
  return lo >= d.support_min() && hi <= d.support_max();
}

}  // namespace

double l1_distance(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b) {
  const std::vector<double> grid = cell_grid(a, b);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double lo = grid[c], hi = grid[c + 1];
    const bool ina = in_support(a, lo, hi);
    const bool inb = in_support(b, lo, hi);
    if (!ina && !inb) continue;
    if (ina && inb) {
      // f_a - f_b changes sign at most once per cell: the root of the
      // linear equation log f_a = log f_b
      const double la0 = a.log_evaluate(lo), lb0 = b.log_evaluate(lo);
      const double la1 = a.log_evaluate(hi), lb1 = b.log_evaluate(hi);
      const double sa = (la1 - la0) / (hi - lo), sb = (lb1 - lb0) / (hi - lo);
      bool crossing = false;
      double root = 0.0;
      if (sa != sb) {
        const double x = lo + (lb0 - la0) / (sa - sb);
        if (x > lo && x < hi) {
          crossing = true;
          root = x;
        }
      }
      auto piece = [&](double u, double v) {
        return std::abs((a.cdf(v) - a.cdf(u)) - (b.cdf(v) - b.cdf(u)));
      };
      total += crossing ? piece(lo, root) + piece(root, hi) : piece(lo, hi);
    } else {
      const PiecewiseLogLinear& d = ina ? a : b;
      total += d.cdf(hi) - d.cdf(lo);
    }
  }
  return total;
}

double tv_distance(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b) {
  return std::min(1.0, 0.5 * l1_distance(a, b));
}

double hellinger_sq(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b) {
  // int (sqrt fa - sqrt fb)^2 = mass_a + mass_b - 2 int sqrt(fa fb);
  // sqrt(fa fb) is exp of the average of two linear functions, so each
  // cell is again a closed-form exponential integral.
  const std::vector<double> grid = cell_grid(a, b);
  double cross = 0.0;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double lo = grid[c], hi = grid[c + 1];
    if (!in_support(a, lo, hi) || !in_support(b, lo, hi)) continue;
    const double g0 = 0.5 * (a.log_evaluate(lo) + b.log_evaluate(lo));
    const double g1 = 0.5 * (a.log_evaluate(hi) + b.log_evaluate(hi));
    cross += (hi - lo) * j_value(g0, g1);
  }
  return std::max(0.0, a.total_mass() + b.total_mass() - 2.0 * cross);
}

double kl_div(const PiecewiseLogLinear& a, const PiecewiseLogLinear& b) {
  if (a.support_min() < b.support_min() - 1e-12 ||
      a.support_max() > b.support_max() + 1e-12)
    return std::numeric_limits<double>::infinity();
  const std::vector<double> grid = cell_grid(a, b);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < grid.size(); ++c) {
    const double lo = grid[c], hi = grid[c + 1];
    if (!in_support(a, lo, hi)) continue;
    if (!in_support(b, lo, hi)) {
      if (a.cdf(hi) - a.cdf(lo) > 0.0)
        return std::numeric_limits<double>::infinity();
      continue;
    }
    // int e^{la(x)} (la(x) - lb(x)) dx with both l linear on the cell
    const double h = hi - lo;
    const double p0 = a.log_evaluate(lo), p1 = (a.log_evaluate(hi) - p0) / h;
    const double q0 = b.log_evaluate(lo), q1 = (b.log_evaluate(hi) - q0) / h;
    const double jv = j_value(p0, p0 + p1 * h);
    const double jds = j_partials(p0, p0 + p1 * h).ds;
    total += (p0 - q0) * h * jv + (p1 - q1) * h * h * jds;
  }
  return total;
}

}  // namespace logcave
