#include "logcave/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace logcave {

ObjectiveContext::ObjectiveContext(WeightedSample sample) : sample_(std::move(sample)) {
  const auto& z = sample_.points();
  if (z.size() < 2)
    throw std::invalid_argument("ObjectiveContext: need at least two support points");
  gaps_.resize(z.size() - 1);
  for (std::size_t k = 0; k + 1 < z.size(); ++k) gaps_[k] = z[k + 1] - z[k];
}

double objective(const ObjectiveContext& ctx, std::span<const double> psi) {
  const auto& w = ctx.sample().weights();
  const auto& d = ctx.gaps();
  double val = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) val += w[i] * psi[i];
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double j = j_value(psi[k], psi[k + 1]);
    if (!std::isfinite(j)) return -std::numeric_limits<double>::infinity();
    val -= d[k] * j;
  }
  return val;
}

std::vector<double> gradient(const ObjectiveContext& ctx, std::span<const double> psi) {
  const auto& w = ctx.sample().weights();
  const auto& d = ctx.gaps();
  std::vector<double> g(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) g[i] = w[i];
  for (std::size_t k = 0; k < d.size(); ++k) {
    const JParts jp = j_partials(psi[k], psi[k + 1]);
    g[k] -= d[k] * jp.dr;
    g[k + 1] -= d[k] * jp.ds;
  }
  return g;
}

Tridiag hessian(const ObjectiveContext& ctx, std::span<const double> psi) {
  const auto& d = ctx.gaps();
  Tridiag h;
  h.diag.assign(psi.size(), 0.0);
  h.off.assign(psi.size() - 1, 0.0);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const JParts jp = j_partials(psi[k], psi[k + 1]);
    h.diag[k] -= d[k] * jp.drr;
    h.diag[k + 1] -= d[k] * jp.dss;
    h.off[k] -= d[k] * jp.drs;
  }
  return h;
}

}  // namespace logcave
