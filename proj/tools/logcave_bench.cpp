// Benchmark of the harness kernels: serial reference vs the OpenMP path.
// Also checks that both paths produce identical results, which the
// per-index seeding guarantees by construction.

#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>
#include <vector>

#include "logcave/active_set.hpp"
#include "logcave/parallel.hpp"
#include "logcave/projection_lab.hpp"
#include "logcave/radial.hpp"
#include "logcave/rng.hpp"

using namespace logcave;

namespace {

template <class F>
double time_of(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

bool equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

}  // namespace

int main() {
  std::printf("threads available to the harness: %d\n\n", harness_threads());
  std::printf("%-28s %10s %10s %8s %10s\n", "kernel", "serial(s)", "parallel(s)",
              "speedup", "identical");

  {
    // row norms of a large matrix
    const std::size_t n = 400000, d = 32;
    Matrix pts(n, d);
    Rng rng(1);
    for (double& v : pts.a) v = rng.normal();
    std::vector<double> a, b;
    const double ts = time_of([&] { a = row_norms_serial(pts); });
    const double tp = time_of([&] { b = row_norms(pts); });
    std::printf("%-28s %10.4f %10.4f %8.2f %10s\n", "row-norms 400000x32", ts, tp,
                ts / tp, equal(a, b) ? "yes" : "NO");
  }

  {
    // Monte-Carlo batch of maximum-likelihood fits
    const std::size_t reps = 100, n = 200;
    const KAffineLaw uniform(0.0, 0.0, 1.0);
    auto batch = [&](bool parallel, std::vector<double>& out) {
      out.assign(reps, 0.0);
      auto body = [&](std::size_t r) {
        const std::vector<double> draws =
            uniform.draw(n, Rng::for_replicate(7, r).bits());
        out[r] = fit(WeightedSample::from_raw(draws)).loglik;
      };
      if (parallel)
        parallel_for(reps, body);
      else
        serial_for(reps, body);
    };
    std::vector<double> a, b;
    const double ts = time_of([&] { batch(false, a); });
    const double tp = time_of([&] { batch(true, b); });
    std::printf("%-28s %10.4f %10.4f %8.2f %10s\n", "mle-batch 100x200", ts, tp,
                ts / tp, equal(a, b) ? "yes" : "NO");
  }

  {
    // fitted-density evaluation over a dense grid
    const KAffineLaw truth(-1.0, 0.0, std::numeric_limits<double>::infinity());
    const std::vector<double> draws = truth.draw(2000, 11);
    const FitReport rep = fit(WeightedSample::from_raw(draws));
    const std::size_t m = 2000000;
    std::vector<double> a(m), b(m);
    auto grid = [&](bool parallel, std::vector<double>& out) {
      auto body = [&](std::size_t i) {
        const double x = 8.0 * static_cast<double>(i) / (m - 1);
        out[i] = rep.density.cdf(x);
      };
      if (parallel)
        parallel_for(m, body);
      else
        serial_for(m, body);
    };
    const double ts = time_of([&] { grid(false, a); });
    const double tp = time_of([&] { grid(true, b); });
    std::printf("%-28s %10.4f %10.4f %8.2f %10s\n", "cdf-grid 2000000", ts, tp,
                ts / tp, equal(a, b) ? "yes" : "NO");
  }

  return 0;
}
