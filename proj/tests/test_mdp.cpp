#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ehpc/mdp.hpp"

using namespace ehpc;

namespace {

// Gain of a fixed action table from the stationary distribution of the
// induced chain, built directly from the arrival pmf (power iteration on a
// lazy chain, so periodic tables converge too).
double stationary_gain(const RewardFunction& rw, const DiscretizedPMF& pmf,
                       const std::vector<int>& actions) {
  const int n = pmf.intervals();
  const double h = pmf.c / n;
  std::vector<double> pi(n + 1, 1.0 / (n + 1)), next(n + 1);
  for (int it = 0; it < 200'000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int j = 0; j <= n; ++j) {
      for (int m = 0; m <= n; ++m) {
        next[std::min(j - actions[j] + m, n)] += pi[j] * pmf.mass[m];
      }
    }
    double diff = 0.0;
    for (int j = 0; j <= n; ++j) {
      next[j] = 0.5 * (next[j] + pi[j]);
      diff = std::max(diff, std::abs(next[j] - pi[j]));
    }
    pi.swap(next);
    if (diff < 1e-15) break;
  }
  double gain = 0.0;
  for (int j = 0; j <= n; ++j) gain += pi[j] * rw.value(actions[j] * h);
  return gain;
}

// Every deterministic stationary table with action k <= state j.
std::vector<std::vector<int>> all_tables(int n) {
  std::vector<std::vector<int>> out{{}};
  for (int j = 0; j <= n; ++j) {
    std::vector<std::vector<int>> grown;
    for (const auto& t : out) {
      for (int k = 0; k <= j; ++k) {
        auto u = t;
        u.push_back(k);
        grown.push_back(std::move(u));
      }
    }
    out = std::move(grown);
  }
  return out;
}

}  // namespace

TEST_CASE("transition rows are distributions") {
  const auto rw = RewardFunction::awgn(1.0);
  const auto q = ArrivalDistribution::from_nmcr(ArrivalDistribution::Family::limited_uniform,
                                                1.5, 0.4);
  const auto model = build_mdp(rw, q, 40);
  for (int j = 0; j < model.states(); j += 7) {
    for (int k = 0; k <= j; k += 3) {
      const auto row = model.transition_row(j, k);
      double total = 0.0;
      for (double v : row) {
        CHECK(v >= 0.0);
        total += v;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
  CHECK_THROWS(model.transition_row(3, 4));
}

TEST_CASE("Bernoulli atoms land on the grid") {
  const auto model = build_mdp(RewardFunction::awgn(1.0),
                               ArrivalDistribution::bernoulli(3.0, 0.2), 17);
  REQUIRE(model.support.size() == 2);
  CHECK(model.support[0] == 0);
  CHECK(model.support[1] == 17);
}

TEST_CASE("two-state chain") {
  const auto rw = RewardFunction::awgn(1.0);
  const double c = 1.0, p = 0.3;
  const auto model = build_mdp(rw, ArrivalDistribution::bernoulli(c, p), 1);
  const auto opt = optimal_gain(model);
  CHECK(opt.evaluation.value == doctest::Approx(p * rw.value(c)).epsilon(1e-9));
  CHECK(policy_gain(model, StationaryPolicy::greedy()).value ==
        doctest::Approx(p * rw.value(c)).epsilon(1e-9));
  CHECK(opt.actions == std::vector<int>{0, 1});
}

TEST_CASE("optimal gain matches exhaustive enumeration on small grids") {
  const auto rw = RewardFunction::awgn(1.0);
  for (int n : {1, 2, 3, 4}) {
    for (const auto& q : {ArrivalDistribution::bernoulli(1.0, 0.4),
                          ArrivalDistribution::limited_uniform(1.0, 1.3),
                          ArrivalDistribution::limited_exponential(1.0, 3.0)}) {
      const auto pmf = q.discretize(n);
      const auto model = build_mdp(rw, pmf);
      double best = 0.0;
      for (const auto& table : all_tables(n)) {
        const double g = stationary_gain(rw, pmf, table);
        best = std::max(best, g);
        CHECK(table_gain(model, table).value == doctest::Approx(g).epsilon(1e-7));
      }
      const auto opt = optimal_gain(model);
      CHECK(opt.evaluation.value == doctest::Approx(best).epsilon(1e-8));
      CHECK(stationary_gain(rw, pmf, opt.actions) == doctest::Approx(best).epsilon(1e-8));
    }
  }
}

TEST_CASE("scaling the reward scales the gain") {
  const auto rw = RewardFunction::awgn(1.0);
  const auto q = ArrivalDistribution::limited_exponential(2.0, 0.8);
  const auto model = build_mdp(rw, q, 60);
  auto scaled = model;
  for (double& r : scaled.action_reward) r *= 2.0;
  const auto a = optimal_gain(model);
  const auto b = optimal_gain(scaled);
  CHECK(b.evaluation.value == doctest::Approx(2.0 * a.evaluation.value).epsilon(1e-8));
  CHECK(a.actions == b.actions);
}

TEST_CASE("value iteration matches the Bernoulli series") {
  const auto rw = RewardFunction::awgn(1.0);
  const auto q = ArrivalDistribution::bernoulli(1.0, 0.5);
  const auto model = build_mdp(rw, q, 2000);
  const double exact = 0.25 * std::log(2.0);
  CHECK(optimal_gain(model).evaluation.value == doctest::Approx(exact).epsilon(1e-3));
  CHECK(policy_gain(model, StationaryPolicy::greedy()).value ==
        doctest::Approx(exact).epsilon(1e-9));
  CHECK(policy_gain(model, StationaryPolicy::fixed_fraction(0.5)).value ==
        doctest::Approx(0.139157668249105181).epsilon(1e-3));
}

TEST_CASE("policy gain never beats the optimal gain") {
  const auto rw = RewardFunction::square_root();
  for (double nmcr : {0.2, 0.8}) {
    const auto q = ArrivalDistribution::from_nmcr(
        ArrivalDistribution::Family::limited_uniform, 3.0, nmcr);
    const auto model = build_mdp(rw, q, 150);
    const double opt = optimal_gain(model).evaluation.value;
    for (auto choice : {PolicyChoice::omega, PolicyChoice::phi, PolicyChoice::greedy}) {
      CHECK(policy_gain(model, make_policy(choice, rw, q.mcr())).value <= opt + 1e-8);
    }
  }
}

TEST_CASE("snapping rounds down and stays admissible") {
  const auto model = build_mdp(RewardFunction::awgn(1.0),
                               ArrivalDistribution::bernoulli(1.0, 0.5), 10);
  const auto phi = snap_policy(model, StationaryPolicy::fixed_fraction(0.5));
  for (int j = 0; j <= 10; ++j) CHECK(phi[j] == j / 2);
  const auto greedy = snap_policy(model, StationaryPolicy::greedy());
  for (int j = 0; j <= 10; ++j) CHECK(greedy[j] == j);
  const std::vector<int> bad{0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  CHECK_THROWS(table_gain(model, bad));
}

TEST_CASE("iteration cap raises non-convergence") {
  const auto model = build_mdp(RewardFunction::awgn(1.0),
                               ArrivalDistribution::limited_uniform(1.0, 0.7), 50);
  ValueIterationOptions opts;
  opts.eps = 1e-14;
  opts.max_iterations = 3;
  CHECK_THROWS_AS(optimal_gain(model, opts), NonConvergenceError);
}
