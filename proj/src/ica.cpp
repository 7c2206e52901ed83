#include "logcave/ica.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "logcave/active_set.hpp"
#include "logcave/errors.hpp"
#include "logcave/parallel.hpp"
#include "logcave/rng.hpp"

namespace logcave {

namespace {

constexpr double kPi = 3.14159265358979323846;

Matrix random_orthogonal(std::size_t d, Rng& rng) {
  // Gram-Schmidt on a Gaussian matrix
  Matrix o(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) o(i, j) = rng.normal();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += o(i, j) * o(k, j);
      for (std::size_t j = 0; j < d; ++j) o(i, j) -= dot * o(k, j);
    }
    double nrm = 0.0;
    for (std::size_t j = 0; j < d; ++j) nrm += o(i, j) * o(i, j);
    nrm = std::sqrt(nrm);
    for (std::size_t j = 0; j < d; ++j) o(i, j) /= nrm;
  }
  return o;
}

struct CoordFit {
  PiecewiseLogLinear density;
  double loglik;
};

CoordFit fit_projection(const std::vector<double>& y) {
  FitReport rep = fit(WeightedSample::from_raw(y));
  return {std::move(rep.density), rep.loglik};
}

struct RestartResult {
  Matrix rotation;
  std::vector<PiecewiseLogLinear> marginals;
  std::vector<double> trace;
  double loglik = -1e308;
  int sweeps = 0;
  bool converged = false;
};

RestartResult run_restart(const Matrix& z, std::size_t d, Rng rng,
                          const IcaOptions& opts) {
  const std::size_t n = z.rows;
  Matrix o = random_orthogonal(d, rng);

  // projections per coordinate, refreshed as the rotation moves
  std::vector<std::vector<double>> y(d, std::vector<double>(n));
  auto project = [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += o(j, k) * z(i, k);
      y[j][i] = s;
    }
  };

  std::vector<PiecewiseLogLinear> marg;
  std::vector<double> logliks(d);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    project(j);
    CoordFit cf = fit_projection(y[j]);
    marg.push_back(std::move(cf.density));
    logliks[j] = cf.loglik;
    total += cf.loglik;
  }

  RestartResult res;
  res.trace.push_back(total);

  std::vector<double> yp(n), yq(n);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    ++res.sweeps;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        // profile objective of the Givens angle: both affected marginals
        // are refit at each trial angle, so the likelihood never has to
        // step outside a fixed support
        auto value = [&](double theta) {
          const double c = std::cos(theta), s = std::sin(theta);
          for (std::size_t i = 0; i < n; ++i) {
            yp[i] = c * y[p][i] + s * y[q][i];
            yq[i] = -s * y[p][i] + c * y[q][i];
          }
          return fit_projection(yp).loglik + fit_projection(yq).loglik;
        };

        const double base = logliks[p] + logliks[q];
        double best_theta = 0.0, best_val = base;
        // coarse scan, then golden-section refinement around the winner
        const int coarse = 8;
        for (int k = -coarse / 2; k <= coarse / 2; ++k) {
          if (k == 0) continue;
          const double th = k * (kPi / 2) / coarse;
          const double v = value(th);
          if (v > best_val) {
            best_val = v;
            best_theta = th;
          }
        }
        const double step = (kPi / 2) / coarse;
        double lo = best_theta - step, hi = best_theta + step;
        const double gr = 0.61803398874989484820;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = value(x1), f2 = value(x2);
        while (hi - lo > opts.angle_tol) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = value(x2);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = value(x1);
          }
        }
        const double mid = 0.5 * (lo + hi);
        const double fm = value(mid);
        if (fm > best_val) {
          best_val = fm;
          best_theta = mid;
        } else if (f1 > best_val) {
          best_val = f1;
          best_theta = x1;
        } else if (f2 > best_val) {
          best_val = f2;
          best_theta = x2;
        }

        if (best_theta != 0.0 && best_val > base) {
          const double c = std::cos(best_theta), s = std::sin(best_theta);
          for (std::size_t k = 0; k < d; ++k) {
            const double op = o(p, k), oq = o(q, k);
            o(p, k) = c * op + s * oq;
            o(q, k) = -s * op + c * oq;
          }
          project(p);
          project(q);
          CoordFit cp = fit_projection(y[p]);
          CoordFit cq = fit_projection(y[q]);
          marg[p] = std::move(cp.density);
          marg[q] = std::move(cq.density);
          logliks[p] = cp.loglik;
          logliks[q] = cq.loglik;
        }
      }
    }
    double sweep_total = 0.0;
    for (std::size_t j = 0; j < d; ++j) sweep_total += logliks[j];
    res.trace.push_back(sweep_total);
    if (sweep_total - total < opts.tol) {
      total = std::max(total, sweep_total);
      res.converged = true;
      break;
    }
    total = sweep_total;
  }

  res.rotation = std::move(o);
  res.marginals = std::move(marg);
  res.loglik = total;
  return res;
}

}  // namespace

Whitening prewhiten(const Matrix& x) {
  if (x.rows <= x.cols)
    throw std::invalid_argument("prewhiten: need more observations than dimensions");
  Matrix w;
  try {
    w = sym_inv_sqrt(covariance(x));
  } catch (const std::domain_error&) {
    throw ExistenceError(ExistenceError::Kind::DegenerateSupport,
                         "sample covariance is singular: the data lies on a "
                         "hyperplane and no density estimate exists");
  }
  Whitening out;
  out.z = matmul(x, w);  // w is symmetric
  out.sqrt_inv_cov = std::move(w);
  return out;
}

MarginalFit fit_marginals(const Matrix& z, const Matrix& o) {
  const std::size_t n = z.rows, d = z.cols;
  if (o.rows != d || o.cols != d)
    throw std::invalid_argument("fit_marginals: rotation shape mismatch");
  MarginalFit out;
  out.logliks.resize(d);
  std::vector<double> y(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += o(j, k) * z(i, k);
      y[i] = s;
    }
    CoordFit cf = fit_projection(y);
    out.marginals.push_back(std::move(cf.density));
    out.logliks[j] = cf.loglik;
    out.loglik += cf.loglik;
  }
  return out;
}

IcaModel ica_fit(const Matrix& x, const IcaOptions& opts) {
  const std::size_t d = x.cols;
  if (d < 2) throw std::invalid_argument("ica_fit: need dimension >= 2");
  if (opts.restarts < 1) throw std::invalid_argument("ica_fit: restarts must be >= 1");
  Whitening wh = prewhiten(x);

  std::vector<RestartResult> results(static_cast<std::size_t>(opts.restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    results[r] = run_restart(wh.z, d, Rng::for_replicate(opts.seed, r), opts);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].loglik > results[best].loglik) best = r;

  IcaModel model;
  model.rotation = results[best].rotation;
  model.unmixing = matmul(model.rotation, wh.sqrt_inv_cov);
  model.marginals = std::move(results[best].marginals);
  model.loglik_trace = std::move(results[best].trace);
  model.loglik = results[best].loglik;
  model.restarts_used = opts.restarts;
  model.sweeps = results[best].sweeps;
  model.converged = results[best].converged;
  return model;
}

double amari_error(const Matrix& w_est, const Matrix& w_true) {
  if (w_est.rows != w_est.cols || w_true.rows != w_true.cols ||
      w_est.rows != w_true.rows)
    throw std::invalid_argument("amari_error: square matrices of equal size required");
  const std::size_t d = w_est.rows;
  inverse(w_est);  // validates invertibility
  const Matrix m = matmul(w_est, inverse(w_true));
  if (d == 1) return 0.0;
  double rows = 0.0, cols = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    double rsum = 0.0, rmax = 0.0, csum = 0.0, cmax = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double rij = std::abs(m(i, j));
      const double cij = std::abs(m(j, i));
      rsum += rij;
      csum += cij;
      rmax = std::max(rmax, rij);
      cmax = std::max(cmax, cij);
    }
    rows += rsum / rmax - 1.0;
    cols += csum / cmax - 1.0;
  }
  return (rows + cols) / (2.0 * d * (d - 1.0));
}

}  // namespace logcave
