#ifndef LOGCAVE_OBJECTIVE_HPP
#define LOGCAVE_OBJECTIVE_HPP

#include <span>
#include <vector>

#include "logcave/density.hpp"
#include "logcave/jfun.hpp"

namespace logcave {

// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct Tridiag {
  std::vector<double> diag;
  std::vector<double> off;
};

// The finite-dimensional maximum-likelihood objective for a weighted
// sample z_1 < ... < z_n with weights w_i:
//
//   L(psi) = sum_i w_i psi_i - sum_k delta_k J(psi_k, psi_{k+1}),
//
// with gaps delta_k = z_{k+1} - z_k. Strictly concave and smooth; the
// unweighted case is w_i = 1/n. An overflowing iterate makes the
// objective -inf, which line searches treat as infeasible.
class ObjectiveContext {
public:
  explicit ObjectiveContext(WeightedSample sample);

  const WeightedSample& sample() const { return sample_; }
  const std::vector<double>& gaps() const { return gaps_; }
  std::size_t size() const { return sample_.size(); }

private:
  WeightedSample sample_;
  std::vector<double> gaps_;
};

double objective(const ObjectiveContext& ctx, std::span<const double> psi);
std::vector<double> gradient(const ObjectiveContext& ctx, std::span<const double> psi);
Tridiag hessian(const ObjectiveContext& ctx, std::span<const double> psi);

}  // namespace logcave

#endif
