#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ehpc {

using Rng = std::mt19937_64;

/// Seed for stream `stream` derived from a master seed (splitmix64 mixing),
/// so parallel workers draw independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Uniform draw in [0, 1) with 53 random bits; portable across standard
/// libraries, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Arrival pmf on the uniform grid j*c/N, j = 0..N.
struct DiscretizedPMF {
  double c = 0.0;
  std::vector<double> grid;
  std::vector<double> mass;

  int intervals() const { return static_cast<int>(grid.size()) - 1; }
  double mean() const;
};

/// Energy-arrival law on [0, c]: Bernoulli (1-p) at 0 and p at c, or a
/// uniform / exponential law truncated at the battery capacity, with the
/// excess mass placed as an atom at c.
class ArrivalDistribution {
 public:
  enum class Family { bernoulli, limited_uniform, limited_exponential };

  static ArrivalDistribution bernoulli(double c, double p);
  /// Uniform on [0, b], truncated at c.
  static ArrivalDistribution limited_uniform(double c, double b);
  /// Exponential with rate lambda, truncated at c.
  static ArrivalDistribution limited_exponential(double c, double lambda);

  /// Family member whose nominal MCR equals `nmcr`.
  static ArrivalDistribution from_nmcr(Family family, double c, double nmcr);
  /// Family member whose (effective) MCR equals `mcr`.
  static ArrivalDistribution from_mcr(Family family, double c, double mcr);

  Family family() const { return family_; }
  double capacity() const { return c_; }
  /// p, b or lambda depending on the family.
  double parameter() const { return param_; }

  /// Expectation of min(X, c).
  double effective_mean() const;
  double mcr() const { return effective_mean() / c_; }
  /// Mean of the untruncated law over c. Not defined for Bernoulli.
  double nmcr() const;

  double sample(Rng& rng) const;

  /// Probability of {0} and of {c}.
  double atom_at_zero() const;
  double atom_at_capacity() const;
  /// Mass of the absolutely continuous part on [0, x], 0 <= x <= c.
  double continuous_cdf(double x) const;

  /// Cell j = [x_j - h/2, x_j + h/2) intersected with [0, c] goes to grid
  /// point x_j = j h, h = c/N; the atom at c goes to the last point.
  DiscretizedPMF discretize(int intervals) const;

 private:
  ArrivalDistribution(Family family, double c, double param)
      : family_(family), c_(c), param_(param) {}

  Family family_;
  double c_;
  double param_;
};

std::string to_string(ArrivalDistribution::Family family);
/// Accepts bernoulli, uniform / limited_uniform, exponential / limited_exponential.
ArrivalDistribution::Family parse_family(const std::string& name);

/// MCR of the uniform family at nominal MCR p~: p~ for p~ <= 1/2, else 1 - 1/(4 p~).
double uniform_mcr_from_nmcr(double nmcr);
/// MCR of the exponential family at nominal MCR p~: p~ (1 - exp(-1/p~)).
double exponential_mcr_from_nmcr(double nmcr);

}  // namespace ehpc
