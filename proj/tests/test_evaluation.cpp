#include <doctest.h>

#include <cmath>

#include "ehpc/evaluation.hpp"
#include "ehpc/metrics.hpp"

using namespace ehpc;

namespace {

// Reference values computed offline at 40 significant digits.
constexpr double kPhiSeries = 0.139157668249105181;    // phi, p = 0.5, c = 1
constexpr double kOmegaSeries = 0.173286795139986327;  // 0.25 ln 2
constexpr double kOmegaSeriesC2 = 0.281167572309404175;  // omega, p = 0.5, c = 2

}  // namespace

TEST_CASE("battery step") {
  const double c = 2.0;
  auto s = step(0.0, c, 0.0, c);
  CHECK(s.state.b == c);
  CHECK(s.next_b_minus == c);

  s = step(0.8 * c, 0.5 * c, 0.3 * c, c);
  CHECK(s.state.b == c);
  CHECK(s.next_b_minus == doctest::Approx(0.7 * c));

  s = step(0.2, 0.0, StationaryPolicy::greedy()(0.2), c);
  CHECK(s.next_b_minus == 0.0);

  // Small excess is clamped, larger excess is a policy bug.
  s = step(0.0, 1.0, 1.0 + 1e-12, c);
  CHECK(s.consumed == 1.0);
  CHECK_THROWS_AS(step(0.0, 1.0, 1.1, c), AdmissibilityError);
  CHECK_THROWS_AS(step(0.0, -1.0, 0.0, c), std::domain_error);
}

TEST_CASE("Bernoulli series values") {
  const auto rw = RewardFunction::awgn(1.0);
  const auto omega = StationaryPolicy::maximin_awgn(1.0, 0.5);
  const auto r = bernoulli_reward(omega, rw, 1.0, 0.5);
  CHECK(std::abs(r.value - kOmegaSeries) <= 1e-12);
  CHECK(r.method == EvaluationMethod::bernoulli_series);
  CHECK(*r.residual == 0.0);
  CHECK(std::abs(bernoulli_reward(omega, rw, 2.0, 0.5).value - kOmegaSeriesC2) <= 1e-12);

  const auto phi = bernoulli_reward(StationaryPolicy::fixed_fraction(0.5), rw, 1.0, 0.5);
  CHECK(std::abs(phi.value - kPhiSeries) <= 1e-14);
  CHECK(*phi.residual < 1e-15);

  for (double c : {0.1, 1.0, 30.0}) {
    for (double p : {0.1, 0.5, 0.9}) {
      const double greedy =
          bernoulli_reward(StationaryPolicy::greedy(), rw, c, p).value;
      CHECK(greedy == p * rw.value(c));
    }
  }
  CHECK_THROWS(bernoulli_reward(omega, rw, 0.0, 0.5));
  CHECK_THROWS(bernoulli_reward(omega, rw, 1.0, 1.0));
}

TEST_CASE("series terminates after M(omega(c)) terms for maximin policies") {
  const auto rw = RewardFunction::square_root();
  const auto omega = StationaryPolicy::maximin(rw, 0.4);
  for (double c : {0.5, 5.0, 50.0}) {
    const auto r = bernoulli_reward(omega, rw, c, 0.4);
    CHECK(*r.residual == 0.0);
    // Oracle: explicit sum over the ergodic set.
    const auto levels = ergodic_set(omega, c);
    double sum = 0.0, weight = 0.4;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i, weight *= 0.6) {
      sum += weight * rw.value(omega(levels[i]));
    }
    CHECK(r.value == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("derivative identity") {
  const auto rw = RewardFunction::awgn(1.0);
  auto check = bernoulli_derivative_check(rw, 0.5, 0.5);
  CHECK_FALSE(check.skipped);
  CHECK(check.analytic == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(std::abs(check.finite_difference - check.analytic) <= 1e-4);

  check = bernoulli_derivative_check(rw, 0.5, 2.0);
  CHECK(check.analytic == doctest::Approx(3.0 / 32.0).epsilon(1e-14));
  CHECK(std::abs(check.finite_difference - check.analytic) <= 1e-4);

  // Second-order convergence of the central difference.
  const double c = 2.5;
  const double e1 = std::abs(bernoulli_derivative_check(rw, 0.3, c, 1e-2).finite_difference -
                             bernoulli_derivative_check(rw, 0.3, c, 1e-2).analytic);
  const double e2 = std::abs(bernoulli_derivative_check(rw, 0.3, c, 5e-3).finite_difference -
                             bernoulli_derivative_check(rw, 0.3, c, 5e-3).analytic);
  CHECK(e2 < 0.3 * e1);

  const auto at_kink = bernoulli_derivative_check(rw, 0.5, 4.0);
  CHECK(at_kink.skipped);
  CHECK_FALSE(at_kink.note.empty());
}

TEST_CASE("Monte Carlo agrees with the series") {
  const auto rw = RewardFunction::awgn(1.0);
  const auto q = ArrivalDistribution::bernoulli(1.0, 0.5);
  SimulationOptions opts;
  opts.horizon = 100'000;
  opts.paths = 64;
  opts.seed = 3;
  const auto greedy = simulate(StationaryPolicy::greedy(), rw, q, opts);
  CHECK(greedy.method == EvaluationMethod::monte_carlo);
  CHECK(std::abs(greedy.value - kOmegaSeries) <= 3.0 * *greedy.standard_error);
  const auto phi = simulate(StationaryPolicy::fixed_fraction(0.5), rw, q, opts);
  CHECK(std::abs(phi.value - kPhiSeries) <= 3.0 * *phi.standard_error);
}

TEST_CASE("Monte Carlo is reproducible across worker counts") {
  const auto rw = RewardFunction::square_root();
  const auto q = ArrivalDistribution::from_nmcr(ArrivalDistribution::Family::limited_exponential,
                                                2.0, 0.5);
  const auto omega = StationaryPolicy::maximin(rw, q.mcr());
  SimulationOptions opts;
  opts.horizon = 5'000;
  opts.paths = 13;
  opts.seed = 99;
  const auto one = simulate(omega, rw, q, opts);
  opts.workers = 4;
  const auto four = simulate(omega, rw, q, opts);
  CHECK(one.value == four.value);
  CHECK(*one.standard_error == *four.standard_error);
  opts.seed = 100;
  CHECK(simulate(omega, rw, q, opts).value != one.value);
}

TEST_CASE("Monte Carlo edge cases") {
  const auto rw = RewardFunction::awgn(1.0);
  SimulationOptions opts;
  opts.horizon = 1000;
  opts.paths = 4;
  const auto none = simulate_with_sampler(StationaryPolicy::greedy(), rw, 1.0,
                                          [](Rng&) { return 0.0; }, opts);
  CHECK(none.value == 0.0);
  opts.paths = 1;
  const auto single = simulate(StationaryPolicy::greedy(), rw,
                               ArrivalDistribution::bernoulli(1.0, 0.5), opts);
  CHECK_FALSE(single.standard_error.has_value());
  opts.paths = 0;
  CHECK_THROWS(simulate(StationaryPolicy::greedy(), rw,
                        ArrivalDistribution::bernoulli(1.0, 0.5), opts));
}

TEST_CASE("evaluations stay below r(pc)") {
  for (const auto& rw : {RewardFunction::awgn(1.0), RewardFunction::square_root()}) {
    for (double p : {0.05, 0.5, 0.95}) {
      for (double c : {0.01, 1.0, 100.0}) {
        for (auto choice : {PolicyChoice::omega, PolicyChoice::phi, PolicyChoice::greedy}) {
          const double v = bernoulli_reward(make_policy(choice, rw, p), rw, c, p).value;
          CHECK(v >= 0.0);
          CHECK(v <= universal_upper_bound(rw, c, p) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("method names") {
  CHECK(parse_method("series") == EvaluationMethod::bernoulli_series);
  CHECK(parse_method("mc") == EvaluationMethod::monte_carlo);
  CHECK(parse_method("vi") == EvaluationMethod::value_iteration);
  CHECK_THROWS(parse_method("exact"));
}
