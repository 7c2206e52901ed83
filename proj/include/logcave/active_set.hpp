#ifndef LOGCAVE_ACTIVE_SET_HPP
#define LOGCAVE_ACTIVE_SET_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "logcave/density.hpp"
#include "logcave/objective.hpp"

namespace logcave {

// Concavity constraints v_j' psi <= 0 for the interior support points,
// where v_j' psi is the change of slope at z_j, plus the basis vectors
// b_1 = (1,...,1), b_j = (min(z_i - z_j, 0))_i, b_n = (z_i)_i used in the
// optimality test. Interior points are indexed 1..n-2 (0-based).
class ConstraintSystem {
public:
  explicit ConstraintSystem(const ObjectiveContext& ctx);

  std::size_t size() const { return z_->size(); }

  // v_j' psi, the discrete slope change at interior index j
  double v_dot(std::span<const double> psi, std::size_t j) const;

  // b_j' g for every interior j, via prefix sums (O(n) total)
  std::vector<double> basis_gradient_products(std::span<const double> g) const;

private:
  const std::vector<double>* z_;
  const std::vector<double>* gaps_;
};

struct FitOptions {
  double tol_kkt = 1e-8;       // outer-loop optimality tolerance
  double tol_feasible = 1e-12; // constraint violation allowed in K
  double tol_activity = 1e-11; // |v_j' psi| below this counts as active
  double tol_newton = 1e-10;   // reduced-gradient sup-norm at subspace optima
  int max_newton = 200;        // per subspace maximization
};

// Solver iterate: log-values at all support points plus the current
// active set (true = slope change suppressed at that interior point).
struct SolverState {
  std::vector<double> psi;
  std::vector<std::uint8_t> active;
  int outer = 0;
  int inner = 0;
  double kkt_residual = 0.0;
};

struct FitReport {
  PiecewiseLogLinear density;  // knots at inactive interior points + endpoints
  double loglik = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double kkt_max = 0.0;          // max_j b_j' grad at the returned iterate
  double feasibility_max = 0.0;  // max_j v_j' psi
  std::vector<double> psi;       // log-values at every support point
  std::vector<std::size_t> knot_indices;
  bool loglik_monotone = true;    // strict increase across outer iterations
  bool inner_set_growth = true;   // strict growth of A within inner loops
};

// Maximizer of the objective over the affine subspace where the listed
// constraints hold with equality: the values at active interior points are
// forced onto the chord between the neighbouring free points, and a damped
// Newton iteration runs on the free values (the reduced Hessian stays
// tridiagonal). Throws SolverFailure after opts.max_newton iterations.
std::vector<double> subspace_maximize(const ObjectiveContext& ctx,
                                      const std::vector<std::uint8_t>& active,
                                      std::span<const double> warm,
                                      const FitOptions& opts = {});

// Largest t in [0,1] keeping (1-t) psi + t cand inside the feasible cone;
// psi must be feasible. If blocking is non-null it receives the index of
// the constraint attained at t* (or npos when t* = 1).
double max_feasible_step(const ConstraintSystem& cs, std::span<const double> psi,
                         std::span<const double> cand, std::size_t* blocking = nullptr);

// (max_j b_j' grad, max_j v_j' psi) over all interior j: the optimality
// and feasibility residuals used for termination and certification.
std::pair<double, double> kkt_residuals(const ObjectiveContext& ctx,
                                        std::span<const double> psi);

// The exact log-concave maximum-likelihood density of a weighted sample.
// Active-set outer loop: start fully constrained (log-linear), repeatedly
// free the constraint with the most positive directional derivative,
// re-maximize, and walk back to feasibility along the segment to the
// candidate when needed. Terminates at the exact solution up to the
// stated tolerances.
FitReport fit(const WeightedSample& sample, const FitOptions& opts = {});

}  // namespace logcave

#endif
