#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rigidity/circle_map.hpp"
#include "rigidity/symbolic.hpp"

namespace rigidity {

// Fix(f^N) indexed by itinerary word. After merging the two symbolic
// representatives of the fixed endpoint orbit, the count is d^N - 1.
struct PeriodicOrbitSet {
  int period = 0;
  int degree = 0;
  struct Entry {
    std::uint64_t word_index;
    double point;
  };
  std::vector<Entry> entries;  // sorted by word_index
};

/// Enumerates Fix(f^N): for each length-N word the composed inverse branch is
/// iterated from 0 until successive iterates differ by less than 1e-14
/// (contraction factor expansion^-N). Points closer than 1e-9 on the circle
/// are merged; exactly one collision (all-0 with all-(d-1) word) is expected
/// and anything else throws. Assumes the base point F(0) is the distinguished
/// fixed point, as it is for every map the factories produce.
PeriodicOrbitSet periodic_points(const CircleMap& f, int N);

/// S_N psi(x) = sum_{i<N} psi(f^i x).
double birkhoff_sum(const CircleMap& f, const RealFn& psi, double x, int N);

// Weighted periodic-orbit measure: atoms at Fix(f^N) with weights
// exp(S_N psi) / Z_N.
struct BowenMeasure {
  int period = 0;
  int degree = 0;
  double Z = 0.0;  // partition function Z_N
  Eigen::ArrayXd atoms;
  Eigen::ArrayXd birkhoff;
  Eigen::ArrayXd weights;  // sums to 1
  std::vector<std::uint64_t> word_indices;
};

BowenMeasure bowen_measure(const CircleMap& f, const RealFn& psi, int N);

/// sum_i w_i phi(x_i).
double integrate_discrete(const BowenMeasure& mu, const RealFn& phi);

/// Mass of [0, x]; atoms at 0 always count, for every x >= 0.
double discrete_cdf(const BowenMeasure& mu, double x);

/// Smallest D with Z_n e^{-n P} in [1/D, D] for all 1 <= n <= N_max.
/// For psi = psi_f the pressure vanishes and the default applies.
double partition_bound_check(const CircleMap& f, const RealFn& psi, int N_max,
                             double pressure = 0.0);

/// CSV export: word, point, birkhoff, weight.
void write_csv(const BowenMeasure& mu, std::ostream& out);

}  // namespace rigidity
