#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ehpc/metrics.hpp"

using namespace ehpc;
using Family = ArrivalDistribution::Family;

TEST_CASE("gap and factor") {
  const auto gf = gap_and_factor(0.139157668249105181, 0.173286795139986327);
  CHECK(gf.additive_gap == doctest::Approx(0.173286795139986327 - 0.139157668249105181));
  CHECK(gf.multiplicative_factor == doctest::Approx(0.803048311538622417).epsilon(1e-14));
  const auto zero = gap_and_factor(0.0, 0.4);
  CHECK(zero.additive_gap == 0.4);
  CHECK(zero.multiplicative_factor == 0.0);
  CHECK_THROWS_AS(gap_and_factor(0.1, 0.0), DegenerateInstanceError);
}

TEST_CASE("bounds") {
  const auto rw = RewardFunction::awgn(1.0);
  CHECK(universal_upper_bound(rw, 1.0, 0.5) ==
        doctest::Approx(0.202732554054082191).epsilon(1e-15));
  CHECK(universal_upper_bound(rw, 1.0, 1.0 - 1e-12) == doctest::Approx(rw.value(1.0)));
  CHECK(0.25 * std::log(2.0) <= universal_upper_bound(rw, 1.0, 0.5));

  CHECK(f0(0.5) == doctest::Approx(0.75));
  CHECK(f0(1.0 / 3.0) == doctest::Approx(1.0 - 8.0 / 27.0));
  double lowest = 1.0;
  for (int i = 1; i < 10000; ++i) lowest = std::min(lowest, f0(i / 10000.0));
  CHECK(lowest >= 1.0 - std::exp(-1.0));
  CHECK(lowest <= 1.0 - std::exp(-1.0) + 1e-3);

  CHECK(phi_small_c_factor_limit(0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(phi_small_c_factor_limit(1.0 - 1e-9) == doctest::Approx(1.0));
  CHECK(phi_small_c_factor_limit(1e-9) == doctest::Approx(0.5));
}

TEST_CASE("Bernoulli sweep rows") {
  SweepConfig config;
  config.capacities = {0.5, 1.0, 4.0};
  config.parameters = {0.2, 0.5};
  const auto rows = sweep(config);
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].policy == "omega");
    CHECK(rows[i + 1].policy == "phi");
    CHECK(rows[i].multiplicative_factor == 1.0);
    CHECK(rows[i].additive_gap == 0.0);
    CHECK(rows[i + 1].additive_gap >= -rows[i + 1].tolerance);
    CHECK(rows[i].invariant_violation().empty());
    CHECK_FALSE(rows[i].nmcr.has_value());
  }
  // Parameter-major order.
  CHECK(rows[0].p == 0.2);
  CHECK(rows[2].c == 1.0);
  CHECK(rows[6].p == 0.5);
  CHECK(rows[9].multiplicative_factor ==
        doctest::Approx(0.803048311538622417).epsilon(1e-12));
}

TEST_CASE("non-Bernoulli sweeps carry the reference MCR values") {
  SweepConfig config;
  config.family = Family::limited_exponential;
  config.parameter_kind = ParameterKind::nmcr;
  config.capacities = {1.0};
  config.parameters = {0.1, 0.5, 0.9};
  config.intervals = 100;
  const auto rows = sweep(config);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].mcr == doctest::Approx(0.1000).epsilon(5e-4));
  CHECK(rows[2].mcr == doctest::Approx(0.4323).epsilon(5e-5 / 0.4323));
  CHECK(rows[4].mcr == doctest::Approx(0.6037).epsilon(5e-5 / 0.6037));
  for (const auto& row : rows) {
    CHECK(row.invariant_violation().empty());
    CHECK(row.tolerance > 0.0);
  }

  config.family = Family::limited_uniform;
  config.parameters = {0.9};
  CHECK(sweep(config)[0].mcr == doctest::Approx(0.7222).epsilon(5e-5 / 0.7222));
}

TEST_CASE("sweeps are independent of the worker count") {
  SweepConfig config;
  config.family = Family::limited_uniform;
  config.parameter_kind = ParameterKind::nmcr;
  config.capacities = {0.5, 2.0};
  config.parameters = {0.3, 0.6};
  config.intervals = 60;
  const auto one = sweep(config);
  config.workers = 3;
  const auto three = sweep(config);
  std::ostringstream a, b;
  write_csv(a, one);
  write_csv(b, three);
  CHECK(a.str() == b.str());
}

TEST_CASE("sweep validation") {
  SweepConfig config;
  CHECK_THROWS_AS(sweep(config), std::invalid_argument);
  config.capacities = {1.0};
  config.parameters = {0.5};
  config.parameter_kind = ParameterKind::nmcr;
  CHECK_THROWS_AS(sweep(config), std::invalid_argument);
}

TEST_CASE("report invariants and extremes") {
  GapReport row;
  row.policy = "phi";
  row.policy_gain = 1.0;
  row.optimal_gain = 0.9;
  row.additive_gap = -0.1;
  row.multiplicative_factor = 1.0 / 0.9;
  row.tolerance = 0.01;
  CHECK_FALSE(row.invariant_violation().empty());
  row.tolerance = 0.2;
  CHECK(row.invariant_violation().empty());

  std::vector<GapReport> rows(3, row);
  rows[1].multiplicative_factor = 0.5;
  rows[2].additive_gap = 0.3;
  rows[2].policy = "omega";
  const auto ext = grid_extremes(rows);
  REQUIRE(ext.size() == 2);
  CHECK(ext[0].policy == "phi");
  CHECK(ext[0].min_factor == 0.5);
  CHECK(ext[1].max_gap == 0.3);
}

TEST_CASE("CSV layout") {
  GapReport row;
  row.family = Family::limited_uniform;
  row.c = 1.0;
  row.p = 0.5;
  row.nmcr = 0.5;
  row.mcr = 0.5;
  row.policy = "omega";
  row.policy_gain = 0.25;
  row.optimal_gain = 0.5;
  row.additive_gap = 0.25;
  row.multiplicative_factor = 0.5;
  std::ostringstream out;
  std::vector<GapReport> rows{row};
  write_csv(out, rows);
  CHECK(out.str() ==
        "family,c,p,nmcr,mcr,policy,policy_gain,optimal_gain,additive_gap,"
        "multiplicative_factor,tolerance\n"
        "uniform,1,0.5,0.5,0.5,omega,0.25,0.5,0.25,0.5,0\n");
}
