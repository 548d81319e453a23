#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ehpc/reward.hpp"

using namespace ehpc;

namespace {

// AWGN reward rebuilt from callables, so the generic conjugation path can be
// compared with the hard-coded closed forms.
RewardFunction awgn_as_custom(double gamma) {
  return RewardFunction::custom(
      "awgn-custom", [gamma](double u) { return 0.5 * std::log1p(gamma * u); },
      [gamma](double u) { return gamma / (2.0 * (1.0 + gamma * u)); },
      [gamma](double y) { return 1.0 / (2.0 * y) - 1.0 / gamma; }, gamma / 2.0);
}

}  // namespace

TEST_CASE("reward values and derivatives") {
  const auto awgn = RewardFunction::awgn(1.0);
  const auto sq = RewardFunction::square_root();
  CHECK(awgn.value(0.0) == 0.0);
  CHECK(awgn.value(1.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(sq.value(3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(awgn.derivative(0.0) == 0.5);
  CHECK(awgn.derivative_inverse(0.25) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sq.derivative(3.0) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK_THROWS_AS(awgn.value(-1.0), std::domain_error);
  CHECK_THROWS_AS(awgn.derivative_inverse(0.0), std::domain_error);
  CHECK_THROWS_AS(awgn.derivative_inverse(0.6), std::domain_error);
  CHECK_THROWS_AS(RewardFunction::awgn(0.0), std::domain_error);
}

TEST_CASE("reward parsing round-trips") {
  CHECK(parse_reward("awgn").gamma() == 1.0);
  CHECK(parse_reward("awgn:2.5").gamma() == 2.5);
  CHECK(parse_reward("sqrt").kind() == RewardFunction::Kind::sqrt);
  CHECK(parse_reward(to_string(RewardFunction::awgn(0.5))).gamma() == 0.5);
  CHECK_THROWS(parse_reward("log"));
  CHECK_THROWS(parse_reward("awgn:-1"));
}

TEST_CASE("tau and kappa_bar examples") {
  const auto awgn = RewardFunction::awgn(1.0);
  const auto sq = RewardFunction::square_root();
  CHECK(tau(awgn, 2.0) == doctest::Approx(1.0));
  CHECK(tau(awgn, 4.0) == doctest::Approx(3.0));
  CHECK(tau(sq, 2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(tau(awgn, 1.0), std::domain_error);

  CHECK(kappa_bar(awgn, 2.0, 3.0) == doctest::Approx(1.0));
  CHECK(kappa_bar(awgn, 2.0, 0.5) == 0.0);
  CHECK(kappa_bar(sq, 2.0, 7.0) == doctest::Approx(1.0));
  // Boundary: both branches give zero at tau.
  CHECK(kappa_bar(awgn, 2.0, 1.0) == 0.0);
  CHECK(kappa(awgn, 2.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(kappa(awgn, 2.0, 0.5), std::domain_error);

  CHECK(kappa_bar_iter(awgn, 2.0, 0, 3.0) == 3.0);
  CHECK(kappa_bar_iter(awgn, 2.0, 1, 3.0) == doctest::Approx(1.0));
  CHECK(kappa_bar_iter(awgn, 2.0, 2, 3.0) == 0.0);
}

TEST_CASE("step counts and eta examples") {
  const auto awgn = RewardFunction::awgn(1.0);
  CHECK(m_steps(awgn, 2.0, 3.0) == 2);
  CHECK(m_tilde_steps(awgn, 2.0, 3.0) == 3);
  CHECK(m_steps(awgn, 2.0, 1.0) == 1);
  CHECK(m_tilde_steps(awgn, 2.0, 1.0) == 2);
  CHECK(m_steps(awgn, 2.0, 0.0) == 0);
  CHECK(m_steps(RewardFunction::square_root(), 3.0, 0.0) == 0);

  CHECK(eta(awgn, 2.0, 3.0) == doctest::Approx(4.0));
  CHECK(eta(awgn, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(eta(awgn, 2.0, 0.0) == 0.0);
  CHECK(eta(RewardFunction::square_root(), 2.0, 0.0) == 0.0);
}

TEST_CASE("custom rewards follow the generic conjugation path") {
  const auto custom = awgn_as_custom(2.0);
  const auto closed = RewardFunction::awgn(2.0);
  for (double s : {1.1, 2.0, 5.0}) {
    CHECK(tau(custom, s) == doctest::Approx(tau(closed, s)).epsilon(1e-12));
    for (double x : {0.0, 0.3, 1.0, 7.0, 40.0}) {
      CHECK(kappa_bar(custom, s, x) ==
            doctest::Approx(kappa_bar(closed, s, x)).epsilon(1e-12));
      CHECK(eta(custom, s, x) == doctest::Approx(eta(closed, s, x)).epsilon(1e-12));
      CHECK(m_steps(custom, s, x) == m_steps(closed, s, x));
    }
  }
}

TEST_CASE("property: random kappa_bar compositions") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> level(0.0, 200.0), scale(1.01, 6.0);
  for (const auto& rw : {RewardFunction::awgn(1.0), RewardFunction::awgn(3.0),
                         RewardFunction::square_root()}) {
    for (int trial = 0; trial < 2000; ++trial) {
      const double s = scale(rng);
      const double x = level(rng);
      const double k = kappa_bar(rw, s, x);
      REQUIRE(k >= 0.0);
      if (x > 0.0) REQUIRE(k < x);
      double folded = x;
      const int m = m_steps(rw, s, x);
      for (int i = 0; i <= m + 1; ++i) {
        REQUIRE(std::abs(kappa_bar_iter(rw, s, i, x) - folded) <= 1e-10);
        folded = kappa_bar(rw, s, folded);
      }
      REQUIRE(kappa_bar_iter(rw, s, m, x) == 0.0);
      if (m > 0) REQUIRE(kappa_bar_iter(rw, s, m - 1, x) > 0.0);
      const int mt = m_tilde_steps(rw, s, x);
      REQUIRE(mt >= m);
      REQUIRE(mt <= m + 1);
      REQUIRE(eta(rw, s, x) >= x);
    }
  }
}

TEST_CASE("eta truncations agree at integer boundaries") {
  for (const auto& rw : {RewardFunction::awgn(1.0), RewardFunction::square_root()}) {
    for (double s : {1.5, 2.0, 3.0}) {
      for (int k = 1; k <= 10; ++k) {
        const double x = tau_iter(rw, s, k);
        CHECK(m_steps(rw, s, x) == k);
        CHECK(m_tilde_steps(rw, s, x) == k + 1);
        CHECK(std::abs(eta_truncated(rw, s, x, k) - eta_truncated(rw, s, x, k + 1)) <=
              1e-12);
      }
    }
  }
}
