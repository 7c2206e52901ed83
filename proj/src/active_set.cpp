#include "logcave/active_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logcave/errors.hpp"

namespace logcave {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}  // namespace

// ---------------------------------------------------------------------------
// ConstraintSystem

ConstraintSystem::ConstraintSystem(const ObjectiveContext& ctx)
    : z_(&ctx.sample().points()), gaps_(&ctx.gaps()) {}

double ConstraintSystem::v_dot(std::span<const double> psi, std::size_t j) const {
  return (psi[j + 1] - psi[j]) / (*gaps_)[j] - (psi[j] - psi[j - 1]) / (*gaps_)[j - 1];
}

std::vector<double> ConstraintSystem::basis_gradient_products(
    std::span<const double> g) const {
  // b_j' g = sum_{i<j} (z_i - z_j) g_i = S1_{j-1} - z_j S0_{j-1}
  const auto& z = *z_;
  const std::size_t n = z.size();
  std::vector<double> out(n, 0.0);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    s0 += g[j - 1];
    s1 += z[j - 1] * g[j - 1];
    out[j] = s1 - z[j] * s0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reduced parametrization over a fixed active set

namespace {

struct Reduction {
  std::vector<std::size_t> free_idx;  // indices of free points (incl. endpoints)
  // interpolation entry for every full index i: psi_i = w0*theta_{a0} + w1*theta_{a0+1}
  std::vector<std::size_t> a0;
  std::vector<double> w0, w1;

  Reduction(const std::vector<double>& z, const std::vector<std::uint8_t>& active) {
    const std::size_t n = z.size();
    for (std::size_t i = 0; i < n; ++i)
      if (i == 0 || i + 1 == n || !active[i]) free_idx.push_back(i);
    a0.resize(n);
    w0.assign(n, 1.0);
    w1.assign(n, 0.0);
    for (std::size_t a = 0; a + 1 < free_idx.size(); ++a) {
      const std::size_t i0 = free_idx[a], i1 = free_idx[a + 1];
      a0[i0] = a;
      for (std::size_t i = i0 + 1; i < i1; ++i) {
        const double lam = (z[i] - z[i0]) / (z[i1] - z[i0]);
        a0[i] = a;
        w0[i] = 1.0 - lam;
        w1[i] = lam;
      }
    }
    a0[free_idx.back()] = free_idx.size() - 1;
  }

  std::vector<double> expand(std::span<const double> theta) const {
    std::vector<double> psi(a0.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
      psi[i] = w0[i] * theta[a0[i]];
      if (w1[i] != 0.0) psi[i] += w1[i] * theta[a0[i] + 1];
    }
    return psi;
  }

  std::vector<double> reduce_gradient(std::span<const double> g) const {
    std::vector<double> rg(free_idx.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      rg[a0[i]] += w0[i] * g[i];
      if (w1[i] != 0.0) rg[a0[i] + 1] += w1[i] * g[i];
    }
    return rg;
  }

  Tridiag reduce_hessian(const Tridiag& h) const {
    const std::size_t m = free_idx.size();
    Tridiag r;
    r.diag.assign(m, 0.0);
    r.off.assign(m - 1, 0.0);
    auto add = [&](std::size_t a, std::size_t b, double val) {
      if (a == b)
        r.diag[a] += val;
      else
        r.off[std::min(a, b)] += val;
    };
    const std::size_t n = h.diag.size();
    for (std::size_t i = 0; i < n; ++i) {
      add(a0[i], a0[i], w0[i] * w0[i] * h.diag[i]);
      if (w1[i] != 0.0) {
        add(a0[i] + 1, a0[i] + 1, w1[i] * w1[i] * h.diag[i]);
        add(a0[i], a0[i] + 1, w0[i] * w1[i] * h.diag[i]);
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double hij = h.off[i];
      // entries(i) x entries(i+1)
      const std::size_t ia = a0[i];
      const std::size_t ja = a0[i + 1];
      const double iw[2] = {w0[i], w1[i]};
      const double jw[2] = {w0[i + 1], w1[i + 1]};
      for (int p = 0; p < 2; ++p) {
        if (iw[p] == 0.0) continue;
        for (int q = 0; q < 2; ++q) {
          if (jw[q] == 0.0) continue;
          const std::size_t aa = ia + static_cast<std::size_t>(p);
          const std::size_t bb = ja + static_cast<std::size_t>(q);
          if (aa == bb)
            r.diag[aa] += 2.0 * iw[p] * jw[q] * hij;  // (i,j) and (j,i)
          else
            r.off[std::min(aa, bb)] += iw[p] * jw[q] * hij;
        }
      }
    }
    return r;
  }
};

// Solve (-H) x = b for symmetric tridiagonal negative-definite H via LDL^T.
// Returns false if a pivot is not positive (H not negative definite to
// working precision).
bool solve_neg_tridiag(const Tridiag& h, std::vector<double> b, std::vector<double>& x,
                       double ridge) {
  const std::size_t m = h.diag.size();
  std::vector<double> d(m), l(m > 0 ? m - 1 : 0);
  for (std::size_t i = 0; i < m; ++i) {
    double di = -h.diag[i] + ridge;
    if (i > 0) di -= l[i - 1] * l[i - 1] * d[i - 1];
    if (!(di > 0.0) || !std::isfinite(di)) return false;
    d[i] = di;
    if (i + 1 < m) l[i] = -h.off[i] / di;
  }
  for (std::size_t i = 1; i < m; ++i) b[i] -= l[i - 1] * b[i - 1];
  for (std::size_t i = 0; i < m; ++i) b[i] /= d[i];
  for (std::size_t i = m - 1; i-- > 0;) b[i] -= l[i] * b[i + 1];
  x = std::move(b);
  return true;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> subspace_maximize(const ObjectiveContext& ctx,
                                      const std::vector<std::uint8_t>& active,
                                      std::span<const double> warm,
                                      const FitOptions& opts) {
  const Reduction red(ctx.sample().points(), active);
  const std::size_t m = red.free_idx.size();
  std::vector<double> theta(m);
  for (std::size_t a = 0; a < m; ++a) theta[a] = warm[red.free_idx[a]];

  double fval = objective(ctx, red.expand(theta));
  if (!std::isfinite(fval)) {
    // warm start outside the representable range; restart from the flat
    // log-density over the support
    const double range = ctx.sample().points().back() - ctx.sample().points().front();
    std::fill(theta.begin(), theta.end(), -std::log(range));
    fval = objective(ctx, red.expand(theta));
  }

  int polish = 0;
  for (int it = 0; it < opts.max_newton; ++it) {
    const std::vector<double> psi = red.expand(theta);
    const std::vector<double> rg = red.reduce_gradient(gradient(ctx, psi));
    const double sup = sup_norm(rg);
    if (sup < opts.tol_newton) return psi;

    const Tridiag rh = red.reduce_hessian(hessian(ctx, psi));
    std::vector<double> step;
    double ridge = 0.0;
    while (!solve_neg_tridiag(rh, rg, step, ridge)) {
      double scale = sup_norm(rh.diag);
      ridge = (ridge == 0.0) ? 1e-12 * std::max(1.0, scale) : ridge * 100.0;
      if (!std::isfinite(ridge) || ridge > 1e30)
        throw SolverFailure("subspace Newton: singular reduced Hessian", it, sup);
    }

    double slope = 0.0;
    for (std::size_t a = 0; a < m; ++a) slope += rg[a] * step[a];
    std::vector<double> trial(m);

    if (slope < 1e-13 * (1.0 + std::abs(fval))) {
      // the predicted gain is below the objective's rounding noise, so a
      // line search cannot distinguish progress; take the raw Newton step
      // and let the gradient criterion decide (quadratic endgame)
      for (std::size_t a = 0; a < m; ++a) trial[a] = theta[a] + step[a];
      const double ft = objective(ctx, red.expand(trial));
      if (std::isfinite(ft) && polish < 8) {
        ++polish;
        theta = trial;
        fval = std::max(fval, ft);
        continue;
      }
      if (sup < 1e-7) return psi;  // gradient at its numerical floor
      throw SolverFailure("subspace Newton: stalled above tolerance", it, sup);
    }

    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t a = 0; a < m; ++a) trial[a] = theta[a] + t * step[a];
      const double ft = objective(ctx, red.expand(trial));
      if (std::isfinite(ft) && ft >= fval + 1e-4 * t * slope) {
        theta = trial;
        fval = ft;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (sup < 1e-7) return psi;
      throw SolverFailure("subspace Newton: line search stalled", it, sup);
    }
  }
  throw SolverFailure("subspace Newton: iteration limit reached", opts.max_newton,
                      sup_norm(red.reduce_gradient(gradient(ctx, red.expand(theta)))));
}

double max_feasible_step(const ConstraintSystem& cs, std::span<const double> psi,
                         std::span<const double> cand, std::size_t* blocking) {
  const std::size_t n = cs.size();
  double t = 1.0;
  std::size_t blk = kNone;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double c = cs.v_dot(cand, j);
    if (c <= 0.0) continue;
    const double a = std::min(cs.v_dot(psi, j), 0.0);  // psi feasible by contract
    const double tj = -a / (c - a);
    if (tj < t) {
      t = tj;
      blk = j;
    }
  }
  if (blocking) *blocking = blk;
  return std::clamp(t, 0.0, 1.0);
}

std::pair<double, double> kkt_residuals(const ObjectiveContext& ctx,
                                        std::span<const double> psi) {
  const ConstraintSystem cs(ctx);
  const std::vector<double> products =
      cs.basis_gradient_products(gradient(ctx, psi));
  double kkt = -kInf, feas = -kInf;
  for (std::size_t j = 1; j + 1 < ctx.size(); ++j) {
    kkt = std::max(kkt, products[j]);
    feas = std::max(feas, cs.v_dot(psi, j));
  }
  if (ctx.size() == 2) kkt = feas = 0.0;  // no interior constraints
  return {kkt, feas};
}

FitReport fit(const WeightedSample& sample, const FitOptions& opts) {
  const std::size_t n = sample.size();
  if (n < 2)
    throw ExistenceError(ExistenceError::Kind::DegenerateSupport,
                         "all mass is concentrated at a single point: the "
                         "log-likelihood is unbounded and no maximum exists");

  const ObjectiveContext ctx(sample);
  const ConstraintSystem cs(ctx);
  const auto& z = sample.points();
  const int max_outer = static_cast<int>(10 * n);
  const int max_inner = static_cast<int>(5 * n);

  SolverState st;
  st.active.assign(n, 0);
  for (std::size_t j = 1; j + 1 < n; ++j) st.active[j] = 1;

  // fully active start: the best log-linear density
  std::vector<double> flat(n, -std::log(z.back() - z.front()));
  st.psi = subspace_maximize(ctx, st.active, flat, opts);

  FitReport report{PiecewiseLogLinear({0.0, 1.0}, {0.0, 0.0}), 0.0, 0,
                   0,   0.0, 0.0, {}, {}, true, true};
  double last_loglik = -kInf;

  // A(psi) with a tolerance band; `keep` members stay in: constraints the
  // candidate satisfies with equality by construction belong to A(psi)
  // exactly, whatever rounding says
  auto recompute_active = [&](std::span<const double> psi,
                              const std::vector<std::uint8_t>& keep,
                              std::size_t force) {
    std::vector<std::uint8_t> a(n, 0);
    for (std::size_t j = 1; j + 1 < n; ++j)
      a[j] = keep[j] || cs.v_dot(psi, j) >= -opts.tol_activity;
    if (force != kNone) a[force] = 1;
    return a;
  };

  for (;; ++st.outer) {
    if (st.outer >= max_outer)
      throw SolverFailure("active set: outer iteration limit reached", st.outer,
                          st.kkt_residual);

    const std::vector<double> products =
        cs.basis_gradient_products(gradient(ctx, st.psi));
    double best = -kInf;
    std::size_t jstar = kNone;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      if (!st.active[j]) continue;
      if (products[j] > best) {  // strict: ties resolve to the smallest index
        best = products[j];
        jstar = j;
      }
    }
    st.kkt_residual = (jstar == kNone) ? 0.0 : best;
    if (jstar == kNone || best <= opts.tol_kkt) break;

    const double current = objective(ctx, st.psi);
    if (current <= last_loglik && st.outer > 0) report.loglik_monotone = false;
    last_loglik = current;

    std::vector<std::uint8_t> work = st.active;
    work[jstar] = 0;
    std::vector<double> cand = subspace_maximize(ctx, work, st.psi, opts);

    for (int inner = 0;; ++inner) {
      if (inner >= max_inner)
        throw SolverFailure("active set: inner iteration limit reached",
                            st.inner, st.kkt_residual);
      // constraints in `work` hold with equality by construction; only the
      // others can genuinely be violated
      std::size_t blk = kNone;
      double t = 1.0;
      for (std::size_t j = 1; j + 1 < n; ++j) {
        if (work[j]) continue;
        const double c = cs.v_dot(cand, j);
        if (c <= opts.tol_feasible) continue;
        const double a = std::min(cs.v_dot(st.psi, j), 0.0);
        const double tj = -a / (c - a);
        if (tj < t) {
          t = tj;
          blk = j;
        }
      }
      if (blk == kNone) break;  // candidate is feasible

      ++st.inner;
      for (std::size_t i = 0; i < n; ++i)
        st.psi[i] = (1.0 - t) * st.psi[i] + t * cand[i];
      const std::size_t before =
          static_cast<std::size_t>(std::count(work.begin(), work.end(), 1));
      work = recompute_active(st.psi, work, blk);
      const std::size_t after =
          static_cast<std::size_t>(std::count(work.begin(), work.end(), 1));
      if (after <= before) report.inner_set_growth = false;
      cand = subspace_maximize(ctx, work, st.psi, opts);
    }

    st.psi = std::move(cand);
    st.active = recompute_active(st.psi, work, kNone);
  }

  // knots at the endpoints plus interior points whose constraint is inactive
  std::vector<std::size_t> knots;
  knots.push_back(0);
  for (std::size_t j = 1; j + 1 < n; ++j)
    if (!st.active[j]) knots.push_back(j);
  knots.push_back(n - 1);

  std::vector<double> kx(knots.size()), kv(knots.size());
  for (std::size_t a = 0; a < knots.size(); ++a) {
    kx[a] = z[knots[a]];
    kv[a] = st.psi[knots[a]];
  }

  const auto [kkt, feas] = kkt_residuals(ctx, st.psi);
  report.density = PiecewiseLogLinear(std::move(kx), std::move(kv));
  // attained mean log-likelihood sum_i w_i log f(z_i)
  report.loglik = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    report.loglik += sample.weights()[i] * st.psi[i];
  report.outer_iterations = st.outer;
  report.inner_iterations = st.inner;
  report.kkt_max = kkt;
  report.feasibility_max = feas;
  report.psi = std::move(st.psi);
  report.knot_indices = std::move(knots);
  return report;
}

}  // namespace logcave
