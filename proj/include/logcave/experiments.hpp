#ifndef LOGCAVE_EXPERIMENTS_HPP
#define LOGCAVE_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace logcave {

// One named, seeded reproduction experiment: a reference value with the
// tolerance it is checked at, the computed value, and a verdict.
struct ExperimentReport {
  std::string name;
  double target = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

// Experiments: mallows, marshall, uniform-rate, stochastic-order, pareto,
// mixture-affine. Monte-Carlo experiments fan replicates out through the
// parallel harness with per-replicate seeds, so results do not depend on
// the thread count.
std::vector<std::string> experiment_names();
ExperimentReport run_experiment(const std::string& name, std::uint64_t seed);

ExperimentReport run_mallows(std::uint64_t seed);
ExperimentReport run_marshall(std::uint64_t seed);
ExperimentReport run_uniform_rate(std::uint64_t seed);
ExperimentReport run_stochastic_order(std::uint64_t seed);
ExperimentReport run_pareto(std::uint64_t seed);
ExperimentReport run_mixture_affine(std::uint64_t seed);

}  // namespace logcave

#endif
