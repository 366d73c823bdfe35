#pragma once

#include <vector>

#include "rigidity/circle_map.hpp"
#include "rigidity/grid_function.hpp"

namespace rigidity {

// Invariant density carrier: strictly positive nodes, unit trapezoid mass.
struct Density {
  GridFunction grid;
  double mass_tolerance = 1e-10;

  double min_value() const { return grid.values().minCoeff(); }
  double max_value() const { return grid.values().maxCoeff(); }
  /// Two-sided band diagnostic: 1/C <= rho <= C.
  bool within_band(double C) const {
    return min_value() >= 1.0 / C && max_value() <= C;
  }
};

/// (L_psi phi)(x_i) = sum over inverse branches y of e^{psi(y)} phi(y), with
/// phi read off by interpolation.
GridFunction apply_transfer(const CircleMap& f, const RealFn& psi,
                            const GridFunction& phi);

/// Same operator with phi evaluated exactly instead of interpolated.
GridFunction apply_transfer(const CircleMap& f, const RealFn& psi,
                            const RealFn& phi, int resolution);

struct DensityResult {
  Density density;
  int iterations;
};

/// Power iteration for the psi_f operator from phi = 1, renormalized to unit
/// mass each step, until the sup-change drops below tol.
DensityResult invariant_density(const CircleMap& f, int resolution, double tol);

/// log of the Perron eigenvalue, from L^1-norm ratios at convergence.
double pressure(const CircleMap& f, const RealFn& psi, int resolution,
                double tol);

/// I(x) = int_0^x rho, trapezoid sums renormalized so I(0)=0 and I(1)=1
/// exactly; returned with periodic_offset 1 and strictly increasing nodes.
GridFunction cdf(const Density& rho);

/// x with I(x) = u: bisection over nodes plus a linear solve in the
/// bracketing cell. u must lie in [I(0), I(1)].
double inverse_cdf(const GridFunction& I, double u);

/// e_n = sup |Lbar^n phi - rho_f * int phi dLeb| for n = 1..n_max, where Lbar
/// is the psi-weighted operator (eigenvalue 1 for psi = psi_f).
std::vector<double> empirical_decay(const CircleMap& f, const RealFn& psi,
                                    const GridFunction& phi, int n_max);

/// Finite-difference Holder quotient sup |g(x)-g(y)| / |x-y|^alpha over node
/// pairs up to max_lag cells apart. Diagnostic only.
double holder_quotient_estimate(const GridFunction& g, double alpha,
                                int max_lag = 64);

}  // namespace rigidity
