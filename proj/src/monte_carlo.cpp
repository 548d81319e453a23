#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ehpc/evaluation.hpp"

namespace ehpc {
namespace {

double run_path(const StationaryPolicy& policy, const RewardFunction& rw,
                double c, const ArrivalSampler& sampler, long horizon,
                std::uint64_t seed) {
  Rng rng(seed);
  double b_minus = 0.0;
  double total = 0.0;
  for (long t = 0; t < horizon; ++t) {
    const double x = sampler(rng);
    const double u = policy(std::min(b_minus + x, c));
    const StepOutcome out = step(b_minus, x, u, c);
    total += rw.value(out.consumed);
    b_minus = out.next_b_minus;
  }
  return total / static_cast<double>(horizon);
}

}  // namespace

EvaluationResult simulate_with_sampler(const StationaryPolicy& policy,
                                       const RewardFunction& rw, double c,
                                       const ArrivalSampler& sampler,
                                       const SimulationOptions& options) {
  if (options.horizon < 1 || options.paths < 1) {
    throw std::domain_error("simulation needs horizon >= 1 and paths >= 1");
  }
  if (!(c > 0.0)) throw std::domain_error("capacity must be > 0");
  const int workers = std::clamp(options.workers, 1, options.paths);

  std::vector<double> path_means(static_cast<std::size_t>(options.paths));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(workers));
  auto work = [&](int worker) {
    try {
      for (int k = worker; k < options.paths; k += workers) {
        path_means[k] = run_path(policy, rw, c, sampler, options.horizon,
                                 derive_seed(options.seed, k));
      }
    } catch (...) {
      failures[worker] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  // Reduce in path order so the result is independent of the worker count.
  double mean = 0.0;
  for (double m : path_means) mean += m;
  mean /= options.paths;

  EvaluationResult result;
  result.value = mean;
  result.method = EvaluationMethod::monte_carlo;
  if (options.paths > 1) {
    double ss = 0.0;
    for (double m : path_means) ss += (m - mean) * (m - mean);
    result.standard_error =
        std::sqrt(ss / (options.paths - 1) / options.paths);
  }
  return result;
}

EvaluationResult simulate(const StationaryPolicy& policy,
                          const RewardFunction& rw,
                          const ArrivalDistribution& arrivals,
                          const SimulationOptions& options) {
  return simulate_with_sampler(
      policy, rw, arrivals.capacity(),
      [&arrivals](Rng& rng) { return arrivals.sample(rng); }, options);
}

}  // namespace ehpc
