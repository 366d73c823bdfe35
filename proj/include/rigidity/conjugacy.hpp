#pragma once

#include <utility>
#include <vector>

#include "rigidity/circle_map.hpp"
#include "rigidity/periodic.hpp"
#include "rigidity/transfer.hpp"

namespace rigidity {

/// Itinerary of x: symbol j at step i iff f^i(x) lies in branch interval j
/// (left-closed intervals).
Word itinerary(const CircleMap& f, double x, int n);

/// h(x) to accuracy expansion(g)^-n, by applying g's inverse branches along
/// the f-itinerary of x to the seed 0; normalized so h(0) = 0. Throws when
/// the degrees differ (no conjugacy exists).
double conjugacy_point(const CircleMap& f, const CircleMap& g, double x, int n);

/// max over word-matched pairs (p, q) in Fix(f^N) x Fix(g^N) of
/// |S_N log f'(p) - S_N log g'(q)|.
double periodic_data_defect(const CircleMap& f, const CircleMap& g, int N);

// The candidate smooth conjugacy h = I_g^{-1} o I_f with its chain-rule
// derivative h' = rho_f / (rho_g o h). The construction depends only on the
// two densities, not on any period parameter.
struct ConjugacyGrid {
  GridFunction value;  // monotone, periodic_offset 1, h(0) = 0
  GridFunction deriv;  // periodic_offset 0, strictly positive
};

ConjugacyGrid build_hN(const Density& rho_f, const Density& rho_g);
ConjugacyGrid build_hN(const CircleMap& f, const CircleMap& g, int resolution,
                       double tol = 1e-12);

// Evaluator pair for f_N = h^{-1} o g o h and its chain-rule derivative.
struct MapEvaluators {
  RealFn lift;
  RealFn deriv;
};

MapEvaluators conjugated_map(const CircleMap& g, const ConjugacyGrid& h);

/// sup over grid nodes of the circle distance |u - v|.
double c0_distance(const RealFn& u, const RealFn& v, int resolution);

/// c0 distance of the map values plus sup |f' - f_N'|.
double c1_distance(const CircleMap& f, const MapEvaluators& fN, int resolution);

/// sup over an evaluation grid of |CDF of mu_f^N - I_f|.
double cdf_error(const BowenMeasure& mu, const GridFunction& I,
                 int eval_resolution);
double cdf_error(const CircleMap& f, int N, int density_resolution = 1 << 12,
                 int eval_resolution = 1 << 12);

// Piecewise-linear collar function approximating the indicator of [0, x]:
// ramps of width w, support [-s, x+s] on the circle, values in [0, 1],
// Lipschitz constant at most 1/w. Near the endpoints of the regime the
// formula is clamped and periodized.
struct TentFunction {
  double x;
  double s;
  double w;
  double operator()(double y) const;
  double lipschitz_bound() const { return 1.0 / w; }
};

TentFunction tent_function(double x, double s, double w);

/// Finds s* in [0, w] with int tent d mu_N = CDF_N(x) (bisection on the
/// continuous monotone gap) and returns |int tent dmu_f - I_f(x)|.
double smoothed_cdf_gap(const BowenMeasure& mu, const Density& rho, double x,
                        double w);
double smoothed_cdf_gap(const CircleMap& f, int N, double x, double tau,
                        int density_resolution = 1 << 12);

// Exponential fit error ~ K lambda^N by least squares on (N, log error).
struct RateFit {
  double K;
  double lambda;
  double r2;
  std::pair<int, int> n_range;
  bool non_decaying;
};

/// Drops points below the 1e-11 float floor, then needs >= 4 points with
/// positive errors.
RateFit fit_rate(const std::vector<std::pair<int, double>>& points);

/// M delta^alpha / (alpha + 1) + eps.
double holder_derivative_bound(double M, double alpha, double eps, double delta);

/// Measures eps = sup over grid pairs with circle distance > delta of the
/// difference quotient of F = f_N - f, then returns holder_derivative_bound.
double c1_from_c0(const CircleMap& f, const MapEvaluators& fN, double delta,
                  double M, double alpha, int resolution = 1 << 12);

}  // namespace rigidity
