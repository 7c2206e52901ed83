#ifndef LOGCAVE_ICA_HPP
#define LOGCAVE_ICA_HPP

#include <cstdint>
#include <vector>

#include "logcave/density.hpp"
#include "logcave/linalg.hpp"

namespace logcave {

struct Whitening {
  Matrix z;             // whitened data, sample covariance = I
  Matrix sqrt_inv_cov;  // symmetric inverse square root of the covariance
};

// Whiten by the sample covariance. Throws ExistenceError when the
// covariance is singular (the data lies on a hyperplane).
Whitening prewhiten(const Matrix& x);

struct MarginalFit {
  std::vector<PiecewiseLogLinear> marginals;
  std::vector<double> logliks;  // per-coordinate mean log-likelihood
  double loglik = 0.0;          // sum over coordinates
};

// Exact concave half-step: for fixed rotation o, each marginal is the
// 1-D log-concave MLE of the projections o_j . z_i.
MarginalFit fit_marginals(const Matrix& z, const Matrix& o);

struct IcaOptions {
  int restarts = 10;
  std::uint64_t seed = 0;
  int max_sweeps = 500;
  double tol = 1e-8;        // sweep improvement threshold for the log-likelihood
  double angle_tol = 1e-8;  // Givens line-search resolution
};

struct IcaModel {
  Matrix unmixing;  // rotation * sqrt_inv_cov
  Matrix rotation;
  std::vector<PiecewiseLogLinear> marginals;
  std::vector<double> loglik_trace;  // per sweep, non-decreasing
  double loglik = 0.0;
  int restarts_used = 0;
  int sweeps = 0;
  bool converged = true;
};

// Fit of the independent-component model by alternating maximization of
// the pre-whitened log-likelihood: exact marginal refits against cyclic
// Givens rotation line searches over the orthogonal group, best of
// `restarts` random orthogonal starts (restarts run in parallel).
IcaModel ica_fit(const Matrix& x, const IcaOptions& opts = {});

// Normalized cross-talk error of w_est w_true^{-1}: zero exactly when the
// product is a permutation times a diagonal, i.e. the two unmixing
// matrices agree up to the inherent row order/scale ambiguity.
double amari_error(const Matrix& w_est, const Matrix& w_true);

}  // namespace logcave

#endif
