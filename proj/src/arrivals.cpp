#include "ehpc/arrivals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ehpc/root_finding.hpp"

namespace ehpc {
namespace {

void require_capacity(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::domain_error("battery capacity must be finite and > 0");
  }
}

void require_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double DiscretizedPMF::mean() const {
  double m = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) m += grid[j] * mass[j];
  return m;
}

ArrivalDistribution ArrivalDistribution::bernoulli(double c, double p) {
  require_capacity(c);
  require_open_unit(p, "Bernoulli parameter p");
  return {Family::bernoulli, c, p};
}

ArrivalDistribution ArrivalDistribution::limited_uniform(double c, double b) {
  require_capacity(c);
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::domain_error("uniform width b must be finite and > 0");
  }
  return {Family::limited_uniform, c, b};
}

ArrivalDistribution ArrivalDistribution::limited_exponential(double c,
                                                             double lambda) {
  require_capacity(c);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::domain_error("exponential rate must be finite and > 0");
  }
  return {Family::limited_exponential, c, lambda};
}

ArrivalDistribution ArrivalDistribution::from_nmcr(Family family, double c,
                                                   double nmcr) {
  if (!(nmcr > 0.0) || !std::isfinite(nmcr)) {
    throw std::domain_error("nominal MCR must be finite and > 0");
  }
  switch (family) {
    case Family::bernoulli:
      throw std::invalid_argument(
          "nominal MCR is not defined for the Bernoulli family; use the MCR");
    case Family::limited_uniform:
      return limited_uniform(c, 2.0 * nmcr * c);
    case Family::limited_exponential:
      return limited_exponential(c, 1.0 / (nmcr * c));
  }
  throw std::invalid_argument("unknown family");
}

ArrivalDistribution ArrivalDistribution::from_mcr(Family family, double c,
                                                  double mcr) {
  require_open_unit(mcr, "MCR");
  switch (family) {
    case Family::bernoulli:
      return bernoulli(c, mcr);
    case Family::limited_uniform:
      return from_nmcr(family, c,
                       mcr <= 0.5 ? mcr : 1.0 / (4.0 * (1.0 - mcr)));
    case Family::limited_exponential: {
      // p~ (1 - e^{-1/p~}) lies in [1 - 1/(2 p~), p~], which brackets p~.
      const double lo = mcr;
      const double hi = 1.0 / (2.0 * (1.0 - mcr));
      const auto solved = invert_increasing(exponential_mcr_from_nmcr, mcr, lo,
                                            hi, 1e-15, InversionMethod::bisection);
      return from_nmcr(family, c, solved.x);
    }
  }
  throw std::invalid_argument("unknown family");
}

double ArrivalDistribution::effective_mean() const {
  switch (family_) {
    case Family::bernoulli:
      return param_ * c_;
    case Family::limited_uniform:
      return param_ <= c_ ? param_ / 2.0 : c_ - c_ * c_ / (2.0 * param_);
    case Family::limited_exponential:
      return -std::expm1(-param_ * c_) / param_;
  }
  return 0.0;
}

double ArrivalDistribution::nmcr() const {
  switch (family_) {
    case Family::bernoulli:
      throw std::invalid_argument(
          "nominal MCR is only defined for the uniform and exponential "
          "families");
    case Family::limited_uniform:
      return param_ / (2.0 * c_);
    case Family::limited_exponential:
      return 1.0 / (param_ * c_);
  }
  return 0.0;
}

double ArrivalDistribution::sample(Rng& rng) const {
  const double u = uniform01(rng);
  switch (family_) {
    case Family::bernoulli:
      return u < param_ ? c_ : 0.0;
    case Family::limited_uniform:
      return std::min(u * param_, c_);
    case Family::limited_exponential:
      return std::min(-std::log1p(-u) / param_, c_);
  }
  return 0.0;
}

double ArrivalDistribution::atom_at_zero() const {
  return family_ == Family::bernoulli ? 1.0 - param_ : 0.0;
}

double ArrivalDistribution::atom_at_capacity() const {
  switch (family_) {
    case Family::bernoulli:
      return param_;
    case Family::limited_uniform:
      return std::max(1.0 - c_ / param_, 0.0);
    case Family::limited_exponential:
      return std::exp(-param_ * c_);
  }
  return 0.0;
}

double ArrivalDistribution::continuous_cdf(double x) const {
  x = std::clamp(x, 0.0, c_);
  switch (family_) {
    case Family::bernoulli:
      return 0.0;
    case Family::limited_uniform:
      return std::min(x, param_) / param_;
    case Family::limited_exponential:
      return -std::expm1(-param_ * x);
  }
  return 0.0;
}

DiscretizedPMF ArrivalDistribution::discretize(int intervals) const {
  if (intervals < 1) throw std::domain_error("discretization needs N >= 1");
  const double h = c_ / intervals;
  DiscretizedPMF pmf;
  pmf.c = c_;
  pmf.grid.resize(static_cast<std::size_t>(intervals) + 1);
  pmf.mass.resize(pmf.grid.size());
  for (int j = 0; j <= intervals; ++j) {
    pmf.grid[j] = j == intervals ? c_ : j * h;
    const double lo = j == 0 ? 0.0 : (j - 0.5) * h;
    const double hi = j == intervals ? c_ : (j + 0.5) * h;
    pmf.mass[j] = continuous_cdf(hi) - continuous_cdf(lo);
  }
  pmf.mass.front() += atom_at_zero();
  pmf.mass.back() += atom_at_capacity();
  return pmf;
}

std::string to_string(ArrivalDistribution::Family family) {
  switch (family) {
    case ArrivalDistribution::Family::bernoulli:
      return "bernoulli";
    case ArrivalDistribution::Family::limited_uniform:
      return "uniform";
    case ArrivalDistribution::Family::limited_exponential:
      return "exponential";
  }
  return "unknown";
}

ArrivalDistribution::Family parse_family(const std::string& name) {
  if (name == "bernoulli") return ArrivalDistribution::Family::bernoulli;
  if (name == "uniform" || name == "limited_uniform") {
    return ArrivalDistribution::Family::limited_uniform;
  }
  if (name == "exponential" || name == "limited_exponential") {
    return ArrivalDistribution::Family::limited_exponential;
  }
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected bernoulli, uniform or exponential)");
}

double uniform_mcr_from_nmcr(double nmcr) {
  return nmcr <= 0.5 ? nmcr : 1.0 - 1.0 / (4.0 * nmcr);
}

double exponential_mcr_from_nmcr(double nmcr) {
  return -nmcr * std::expm1(-1.0 / nmcr);
}

}  // namespace ehpc
