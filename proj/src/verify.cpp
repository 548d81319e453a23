#include "ehpc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "ehpc/arrivals.hpp"
#include "ehpc/evaluation.hpp"
#include "ehpc/mdp.hpp"
#include "ehpc/metrics.hpp"
#include "ehpc/policy.hpp"
#include "ehpc/reward.hpp"

namespace ehpc {
namespace {

using Outcome = std::optional<std::string>;

template <typename... Args>
std::string describe(const Args&... args) {
  std::ostringstream s;
  s.precision(17);
  (s << ... << args);
  return s.str();
}

std::vector<RewardFunction> shipped_rewards() {
  return {RewardFunction::awgn(1.0), RewardFunction::awgn(2.0),
          RewardFunction::awgn(0.5), RewardFunction::square_root()};
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

const std::vector<double> kScales{1.05, 1.25, 1.5, 2.0, 4.0, 10.0};
const std::vector<double> kMcrGrid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

// --- reward -----------------------------------------------------------------

Outcome kappa_bar_bounds() {
  for (const auto& rw : shipped_rewards()) {
    for (double s : kScales) {
      for (double x : linspace(1e-3, 50.0, 2000)) {
        const double k = kappa_bar(rw, s, x);
        if (!(k >= 0.0 && k < x)) {
          return describe(rw.name(), " s=", s, " x=", x, " kappa_bar=", k);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome composition_identity() {
  for (const auto& rw : shipped_rewards()) {
    for (double s : kScales) {
      for (double x : linspace(0.0, 50.0, 501)) {
        double folded = x;
        for (int i = 0; i <= 8; ++i) {
          const double closed = kappa_bar_iter(rw, s, i, x);
          if (std::abs(closed - folded) > 1e-10) {
            return describe(rw.name(), " s=", s, " i=", i, " x=", x,
                            " closed=", closed, " composed=", folded);
          }
          folded = kappa_bar(rw, s, folded);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome eta_monotone_convex() {
  for (const auto& rw : shipped_rewards()) {
    for (double s : kScales) {
      const auto xs = linspace(0.0, 40.0, 4001);
      double prev = -1.0;
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const double e = eta(rw, s, xs[j]);
        if (!(e > prev)) {
          return describe(rw.name(), " s=", s, " eta not increasing at x=", xs[j]);
        }
        if (e < xs[j] - 1e-12) {
          return describe(rw.name(), " s=", s, " eta(x) < x at x=", xs[j]);
        }
        prev = e;
        if (j > 0 && j + 1 < xs.size()) {
          const double mid = eta(rw, s, xs[j]);
          const double chord =
              0.5 * (eta(rw, s, xs[j - 1]) + eta(rw, s, xs[j + 1]));
          if (mid > chord + 1e-9) {
            return describe(rw.name(), " s=", s, " midpoint convexity fails at x=",
                            xs[j], " by ", mid - chord);
          }
        }
      }
      if (eta(rw, s, 0.0) != 0.0) return describe(rw.name(), " eta(0) != 0");
    }
  }
  return std::nullopt;
}

Outcome eta_truncations_agree() {
  for (const auto& rw : shipped_rewards()) {
    for (double s : kScales) {
      std::vector<double> xs = linspace(0.0, 60.0, 601);
      // Integer-boundary points x = tau_s^(k), where M and M~ differ.
      for (int k = 1; k <= 12; ++k) xs.push_back(tau_iter(rw, s, k));
      for (double x : xs) {
        const int m = m_steps(rw, s, x);
        const int mt = m_tilde_steps(rw, s, x);
        if (m > mt || mt > m + 1) {
          return describe(rw.name(), " s=", s, " x=", x, " M=", m, " M~=", mt);
        }
        if (kappa_bar_iter(rw, s, m, x) != 0.0) {
          return describe(rw.name(), " s=", s, " x=", x,
                          " kappa_bar^(M)(x) != 0");
        }
        const double by_m = eta_truncated(rw, s, x, m);
        const double by_mt = eta_truncated(rw, s, x, mt);
        const double direct = eta(rw, s, x);
        if (std::abs(by_m - by_mt) > 1e-12 || std::abs(by_m - direct) > 1e-12) {
          return describe(rw.name(), " s=", s, " x=", x, " M-sum=", by_m,
                          " M~-sum=", by_mt, " eta=", direct);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome derivative_inverse_identity() {
  for (const auto& rw : shipped_rewards()) {
    for (double u : linspace(0.0, 100.0, 10001)) {
      const double back = rw.derivative_inverse(rw.derivative(u));
      if (std::abs(back - u) > 1e-10 * std::max(1.0, u)) {
        return describe(rw.name(), " u=", u, " r'^-1(r'(u))=", back);
      }
    }
  }
  return std::nullopt;
}

Outcome kappa_convexity_audit() {
  // Sampled audit only: convexity is required for every s > 1.
  for (const auto& rw : shipped_rewards()) {
    for (double s : kScales) {
      const double start = tau(rw, s);
      const double h = 0.01;
      for (int j = 1; j < 2000; ++j) {
        const double x = start + j * h;
        const double second = kappa(rw, s, x + h) - 2.0 * kappa(rw, s, x) +
                              kappa(rw, s, x - h);
        if (second < -1e-9) {
          return describe(rw.name(), " s=", s, " x=", x,
                          " second difference ", second);
        }
      }
    }
  }
  return std::nullopt;
}

// --- policy -----------------------------------------------------------------

Outcome closed_form_matches_inversion() {
  for (double gamma : {0.5, 1.0, 2.0}) {
    const auto rw = RewardFunction::awgn(gamma);
    for (double p : kMcrGrid) {
      const auto closed = StationaryPolicy::maximin_awgn(gamma, p);
      const auto generic = StationaryPolicy::maximin(rw, p);
      for (double x : linspace(0.0, 100.0, 1001)) {
        const double diff = std::abs(closed(x) - generic(x));
        if (diff > 1e-8) {
          return describe("gamma=", gamma, " p=", p, " x=", x, " closed=",
                          closed(x), " inverted=", generic(x));
        }
      }
    }
  }
  return std::nullopt;
}

Outcome omega_greedy_region() {
  for (double p : kMcrGrid) {
    const auto omega = StationaryPolicy::maximin_awgn(1.0, p);
    const double edge = p / (1.0 - p);
    for (double x : linspace(0.0, edge, 201)) {
      if (omega(x) != x) {
        return describe("p=", p, " x=", x, " omega(x)=", omega(x));
      }
    }
  }
  return std::nullopt;
}

std::vector<StationaryPolicy> maximin_samples() {
  std::vector<StationaryPolicy> out;
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    out.push_back(StationaryPolicy::maximin_awgn(1.0, p));
    out.push_back(StationaryPolicy::maximin_awgn(2.0, p));
    out.push_back(StationaryPolicy::maximin(RewardFunction::square_root(), p));
  }
  return out;
}

Outcome reserve_composition_identity() {
  for (const auto& omega : maximin_samples()) {
    const auto& rw = *omega.reward();
    for (double x : linspace(0.0, 30.0, 151)) {
      const double top = omega(x);
      double level = x;
      for (int i = 1; i <= 8; ++i) {
        const double lhs = omega(level);
        const double rhs = kappa_bar_iter(rw, omega.scale(), i - 1, top);
        if (std::abs(lhs - rhs) > 1e-8) {
          return describe(rw.name(), " p=", omega.p(), " x=", x, " i=", i,
                          " omega(reserve^(i-1))=", lhs, " kappa_bar^(i-1)(omega)=",
                          rhs);
        }
        level = omega.reserve(level);
      }
    }
  }
  return std::nullopt;
}

Outcome eta_inverts_omega() {
  for (const auto& rw : {RewardFunction::awgn(1.0), RewardFunction::square_root()}) {
    for (double p : kMcrGrid) {
      const auto omega = StationaryPolicy::maximin(rw, p);
      for (double x : linspace(0.0, 100.0, 501)) {
        const double residual = std::abs(eta(rw, omega.scale(), omega(x)) - x);
        if (residual > omega.inversion_tol()) {
          return describe(rw.name(), " p=", p, " x=", x, " residual=", residual);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome omega_piecewise_linear() {
  for (double gamma : {0.5, 1.0, 2.0}) {
    for (double p : kMcrGrid) {
      const auto omega = StationaryPolicy::maximin_awgn(gamma, p);
      const auto ends = endpoints(gamma, p, 8);
      for (std::size_t k = 0; k + 1 < ends.size(); ++k) {
        if (std::abs(omega(ends[k].x) - ends[k].y) > 1e-9) {
          return describe("gamma=", gamma, " p=", p, " omega(E_", k, ".x)=",
                          omega(ends[k].x), " expected ", ends[k].y);
        }
        const double lo = ends[k].x, hi = ends[k + 1].x;
        const double h = (hi - lo) / 40.0;
        for (int j = 1; j < 39; ++j) {
          const double x = lo + j * h;
          const double second = omega(x + h) - 2.0 * omega(x) + omega(x - h);
          if (std::abs(second) > 1e-9 * std::max(1.0, x)) {
            return describe("gamma=", gamma, " p=", p, " segment ", k, " x=", x,
                            " second difference ", second);
          }
        }
      }
    }
  }
  return std::nullopt;
}

Outcome omega_greed_index() {
  for (const auto& omega : maximin_samples()) {
    for (double c : {0.5, 2.0, 10.0, 50.0}) {
      const double index = greed_index(omega, *omega.reward(), c, 2001);
      if (index > omega.p() + 1e-6 || index < 0.0) {
        return describe(omega.reward()->name(), " p=", omega.p(), " c=", c,
                        " greed index ", index);
      }
    }
  }
  return std::nullopt;
}

Outcome policies_are_normal() {
  std::vector<StationaryPolicy> policies = maximin_samples();
  for (double p : kMcrGrid) policies.push_back(StationaryPolicy::fixed_fraction(p));
  for (const auto& pol : policies) {
    for (double c : {1.0, 20.0}) {
      const auto report = normality_check(pol, c, 2001);
      if (!report.normal()) {
        return describe(to_string(pol.kind()), " p=", pol.p(), " c=", c,
                        " not normal near x=", report.worst_x);
      }
    }
  }
  return std::nullopt;
}

// --- arrivals ---------------------------------------------------------------

std::vector<ArrivalDistribution> sample_distributions() {
  using F = ArrivalDistribution::Family;
  std::vector<ArrivalDistribution> out;
  for (double c : {0.5, 3.0}) {
    for (double p : {0.1, 0.5, 0.9}) {
      out.push_back(ArrivalDistribution::bernoulli(c, p));
      out.push_back(ArrivalDistribution::from_nmcr(F::limited_uniform, c, p));
      out.push_back(ArrivalDistribution::from_nmcr(F::limited_exponential, c, p));
    }
  }
  return out;
}

Outcome pmf_is_normalized() {
  for (const auto& q : sample_distributions()) {
    for (int n : {1, 2, 50, 500, 5000}) {
      const auto pmf = q.discretize(n);
      double total = 0.0;
      for (double m : pmf.mass) {
        if (m < 0.0) return describe(to_string(q.family()), " negative mass");
        total += m;
      }
      if (std::abs(total - 1.0) > 1e-12) {
        return describe(to_string(q.family()), " N=", n, " total mass ", total);
      }
    }
  }
  return std::nullopt;
}

Outcome pmf_mean_converges() {
  for (const auto& q : sample_distributions()) {
    double previous = INFINITY;
    for (int n : {50, 500, 5000}) {
      const double err =
          std::abs(q.discretize(n).mean() - q.effective_mean());
      if (err > q.capacity() / n || err > previous + 1e-15) {
        return describe(to_string(q.family()), " c=", q.capacity(), " N=", n,
                        " mean error ", err);
      }
      previous = err;
    }
  }
  return std::nullopt;
}

Outcome sampling_moments(std::uint64_t seed) {
  const int n = 1'000'000;
  std::uint64_t stream = 0;
  for (const auto& q : sample_distributions()) {
    Rng rng(derive_seed(seed, stream++));
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = q.sample(rng);
      if (x < 0.0 || x > q.capacity()) return describe("sample outside [0, c]");
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    if (std::abs(mean - q.effective_mean()) > 3.0 * se + 1e-12) {
      return describe(to_string(q.family()), " c=", q.capacity(), " sample mean ",
                      mean, " vs ", q.effective_mean(), " (se ", se, ")");
    }
  }
  return std::nullopt;
}

Outcome mcr_matching() {
  using F = ArrivalDistribution::Family;
  for (double p : kMcrGrid) {
    if (ArrivalDistribution::bernoulli(2.0, p).mcr() != p) {
      return describe("Bernoulli mcr != p at p=", p);
    }
    for (F f : {F::limited_uniform, F::limited_exponential}) {
      const double got = ArrivalDistribution::from_mcr(f, 2.0, p).mcr();
      if (std::abs(got - p) > 1e-12) {
        return describe(to_string(f), " from_mcr(", p, ") has mcr ", got);
      }
    }
  }
  return std::nullopt;
}

// --- evaluation -------------------------------------------------------------

Outcome series_below_universal_bound() {
  for (const auto& rw : {RewardFunction::awgn(1.0), RewardFunction::square_root()}) {
    for (double p : kMcrGrid) {
      for (double c : {0.01, 0.3, 1.0, 5.0, 40.0}) {
        for (auto choice : {PolicyChoice::omega, PolicyChoice::phi, PolicyChoice::greedy}) {
          const auto pol = make_policy(choice, rw, p);
          const double v = bernoulli_reward(pol, rw, c, p).value;
          if (v < 0.0 || v > universal_upper_bound(rw, c, p) + 1e-12) {
            return describe(rw.name(), " ", to_string(choice), " c=", c, " p=", p,
                            " value ", v, " above r(pc)");
          }
        }
      }
    }
  }
  return std::nullopt;
}

Outcome cross_method_agreement(std::uint64_t seed) {
  const auto rw = RewardFunction::awgn(1.0);
  SimulationOptions mc;
  mc.horizon = 20'000;
  mc.paths = 16;
  mc.seed = seed;
  for (double c : {0.5, 2.0}) {
    for (double p : {0.2, 0.6}) {
      const auto q = ArrivalDistribution::bernoulli(c, p);
      const auto model = build_mdp(rw, q, 400);
      for (auto choice : {PolicyChoice::omega, PolicyChoice::phi}) {
        const auto pol = make_policy(choice, rw, p);
        const double series = bernoulli_reward(pol, rw, c, p).value;
        const auto sim = simulate(pol, rw, q, mc);
        const double vi = policy_gain(model, pol).value;
        // Snapping actions down costs at most r'(0) per grid step.
        const double grid_tol = 0.5 * model.step;
        if (std::abs(sim.value - series) > 3.0 * *sim.standard_error + 1e-3 * series) {
          return describe(to_string(choice), " c=", c, " p=", p, " mc=", sim.value,
                          " series=", series, " se=", *sim.standard_error);
        }
        if (std::abs(vi - series) > grid_tol) {
          return describe(to_string(choice), " c=", c, " p=", p, " vi=", vi,
                          " series=", series);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome bernoulli_least_favorable() {
  using F = ArrivalDistribution::Family;
  const auto rw = RewardFunction::awgn(1.0);
  for (double p : {0.1, 0.5}) {
    for (double c : {0.5, 2.0, 8.0}) {
      for (auto choice : {PolicyChoice::omega, PolicyChoice::phi}) {
        const auto pol = make_policy(choice, rw, p);
        const double bern = bernoulli_reward(pol, rw, c, p).value;
        for (F f : {F::limited_uniform, F::limited_exponential}) {
          const auto q = ArrivalDistribution::from_mcr(f, c, p);
          const auto fine = build_mdp(rw, q, 200);
          const auto coarse = build_mdp(rw, q, 100);
          const double g = policy_gain(fine, pol).value;
          const double tol = std::abs(g - policy_gain(coarse, pol).value) + 1e-9;
          if (bern > g + tol) {
            return describe(to_string(choice), " ", to_string(f), " c=", c,
                            " p=", p, " bernoulli=", bern, " other=", g);
          }
        }
      }
    }
  }
  return std::nullopt;
}

Outcome snapped_actions_admissible() {
  const auto rw = RewardFunction::awgn(1.0);
  for (double c : {0.3, 3.0}) {
    const auto model = build_mdp(rw, ArrivalDistribution::bernoulli(c, 0.4), 300);
    for (auto choice : {PolicyChoice::omega, PolicyChoice::phi, PolicyChoice::greedy}) {
      const auto actions = snap_policy(model, make_policy(choice, rw, 0.4));
      for (int j = 0; j < model.states(); ++j) {
        if (actions[j] < 0 || actions[j] > j ||
            model.grid[actions[j]] > model.grid[j]) {
          return describe(to_string(choice), " c=", c, " state ", j, " action ",
                          actions[j]);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome optimal_gain_monotone_in_capacity() {
  using F = ArrivalDistribution::Family;
  const auto rw = RewardFunction::awgn(1.0);
  for (F f : {F::bernoulli, F::limited_uniform, F::limited_exponential}) {
    double previous = 0.0;
    for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      // Fixed nominal arrival law; only the battery grows.
      const ArrivalDistribution q =
          f == F::bernoulli ? ArrivalDistribution::bernoulli(c, 0.3)
          : f == F::limited_uniform
              ? ArrivalDistribution::limited_uniform(c, 1.0)
              : ArrivalDistribution::limited_exponential(c, 2.0);
      if (f == F::bernoulli) continue;
      const double g = optimal_gain(build_mdp(rw, q, 200)).evaluation.value;
      if (g < previous - 1e-6) {
        return describe(to_string(f), " c=", c, " gain ", g, " < ", previous);
      }
      previous = g;
    }
  }
  // Bernoulli arrivals of a fixed size into a growing battery.
  double previous = 0.0;
  for (double c : {0.25, 0.5, 1.0, 2.0}) {
    DiscretizedPMF pmf;
    const int n = 200;
    pmf.c = c;
    for (int j = 0; j <= n; ++j) {
      pmf.grid.push_back(c * j / n);
      pmf.mass.push_back(0.0);
    }
    // Arrivals of size 0.25 with probability 0.5, on the grid for every c.
    pmf.mass[0] = 0.5;
    pmf.mass[static_cast<std::size_t>(std::lround(0.25 / c * n))] += 0.5;
    const double g = optimal_gain(build_mdp(rw, pmf)).evaluation.value;
    if (g < previous - 1e-9) {
      return describe("two-point arrivals c=", c, " gain ", g, " < ", previous);
    }
    previous = g;
  }
  return std::nullopt;
}

// --- metrics ----------------------------------------------------------------

Outcome factor_chain() {
  const auto rw = RewardFunction::awgn(1.0);
  for (double p : linspace(0.02, 0.98, 49)) {
    const double floor0 = f0(p);
    if (floor0 < 1.0 - std::exp(-1.0) - 1e-12) {
      return describe("F0(", p, ") = ", floor0, " below 1 - 1/e");
    }
    const auto omega = StationaryPolicy::maximin_awgn(1.0, p);
    for (double c : {0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0}) {
      const double ratio =
          bernoulli_reward(omega, rw, c, p).value / universal_upper_bound(rw, c, p);
      if (ratio < floor0 - 1e-3) {
        return describe("p=", p, " c=", c, " T_omega/r(pc)=", ratio, " < F0=",
                        floor0);
      }
    }
  }
  return std::nullopt;
}

Outcome phi_factor_limit() {
  const auto rw = RewardFunction::awgn(1.0);
  for (double p : kMcrGrid) {
    const auto omega = StationaryPolicy::maximin_awgn(1.0, p);
    const auto phi = StationaryPolicy::fixed_fraction(p);
    for (double c : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
      const double factor = bernoulli_reward(phi, rw, c, p).value /
                            bernoulli_reward(omega, rw, c, p).value;
      if (factor < 0.5 - 1e-9) {
        return describe("p=", p, " c=", c, " F(phi)=", factor, " < 1/2");
      }
      if (c == 1e-3) {
        const double limit = phi_small_c_factor_limit(p);
        if (std::abs(factor - limit) > 0.02 * limit) {
          return describe("p=", p, " F(phi) at c=1e-3 is ", factor,
                          ", limit 1/(2-p)=", limit);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome omega_dominates_phi() {
  using F = ArrivalDistribution::Family;
  for (const auto& rw : {RewardFunction::awgn(1.0), RewardFunction::square_root()}) {
    for (F f : {F::bernoulli, F::limited_uniform, F::limited_exponential}) {
      SweepConfig config;
      config.reward = rw;
      config.family = f;
      config.capacities = {0.1, 1.0, 10.0};
      config.parameters = {0.1, 0.5, 0.9};
      config.parameter_kind = f == F::bernoulli ? ParameterKind::mcr : ParameterKind::nmcr;
      config.intervals = 200;
      const auto reports = sweep(config);
      for (std::size_t i = 0; i + 1 < reports.size(); i += 2) {
        const auto& omega = reports[i];
        const auto& phi = reports[i + 1];
        if (omega.policy_gain < phi.policy_gain - omega.tolerance - phi.tolerance) {
          return describe(rw.name(), " ", to_string(f), " c=", omega.c, " mcr=",
                          omega.mcr, " omega=", omega.policy_gain, " phi=",
                          phi.policy_gain);
        }
        for (const auto* row : {&omega, &phi}) {
          const std::string bad = row->invariant_violation();
          if (!bad.empty()) return describe(row->policy, ": ", bad);
        }
      }
    }
  }
  return std::nullopt;
}

Outcome omega_near_optimal_low_mcr() {
  using F = ArrivalDistribution::Family;
  for (F f : {F::limited_uniform, F::limited_exponential}) {
    SweepConfig config;
    config.family = f;
    config.capacities = {0.1, 1.0, 10.0};
    config.parameters = {0.1};
    config.parameter_kind = ParameterKind::nmcr;
    config.policies = {PolicyChoice::omega};
    config.intervals = 300;
    for (const auto& row : sweep(config)) {
      if (row.multiplicative_factor < 0.98 - row.tolerance / row.optimal_gain) {
        return describe(to_string(f), " c=", row.c, " F(omega)=",
                        row.multiplicative_factor);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const VerifyOptions& options) {
  struct Check {
    const char* module;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::uint64_t seed = options.seed;
  const std::vector<Check> checks{
      {"reward", "kappa_bar_bounds", kappa_bar_bounds},
      {"reward", "composition_identity", composition_identity},
      {"reward", "eta_monotone_convex", eta_monotone_convex},
      {"reward", "eta_truncations_agree", eta_truncations_agree},
      {"reward", "derivative_inverse_identity", derivative_inverse_identity},
      {"reward", "kappa_convexity_audit", kappa_convexity_audit},
      {"policy", "closed_form_matches_inversion", closed_form_matches_inversion},
      {"policy", "omega_greedy_region", omega_greedy_region},
      {"policy", "reserve_composition_identity", reserve_composition_identity},
      {"policy", "eta_inverts_omega", eta_inverts_omega},
      {"policy", "omega_piecewise_linear", omega_piecewise_linear},
      {"policy", "omega_greed_index", omega_greed_index},
      {"policy", "policies_are_normal", policies_are_normal},
      {"arrivals", "pmf_is_normalized", pmf_is_normalized},
      {"arrivals", "pmf_mean_converges", pmf_mean_converges},
      {"arrivals", "sampling_moments", [seed] { return sampling_moments(seed); }},
      {"arrivals", "mcr_matching", mcr_matching},
      {"evaluation", "series_below_universal_bound", series_below_universal_bound},
      {"evaluation", "cross_method_agreement",
       [seed] { return cross_method_agreement(seed); }},
      {"evaluation", "bernoulli_least_favorable", bernoulli_least_favorable},
      {"evaluation", "snapped_actions_admissible", snapped_actions_admissible},
      {"evaluation", "optimal_gain_monotone_in_capacity",
       optimal_gain_monotone_in_capacity},
      {"metrics", "factor_chain", factor_chain},
      {"metrics", "phi_factor_limit", phi_factor_limit},
      {"metrics", "omega_dominates_phi", omega_dominates_phi},
      {"metrics", "omega_near_optimal_low_mcr", omega_near_optimal_low_mcr},
  };

  std::vector<CheckResult> results;
  for (const auto& check : checks) {
    CheckResult result;
    result.module = check.module;
    result.name = check.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome failure = check.run();
      result.passed = !failure.has_value();
      if (failure) result.counterexample = *failure;
    } catch (const std::exception& e) {
      result.passed = false;
      result.counterexample = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    if (options.on_result) options.on_result(result);
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace ehpc
