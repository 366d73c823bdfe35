#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "rigidity/circle.hpp"
#include "rigidity/grid_function.hpp"

namespace rigidity {

// An orientation-preserving C^2 expanding circle map, represented through a
// lift F with F(x+1) = F(x) + degree, F' >= expansion > 1 and F(0) in [0,1).
class CircleMap {
 public:
  CircleMap(int degree, RealFn lift, RealFn lift_deriv, RealFn lift_deriv2,
            double expansion, double c2_bound, RealFn lift_inverse = {});

  int degree() const { return degree_; }
  double lift(double x) const { return lift_(x); }
  double lift_deriv(double x) const { return lift_deriv_(x); }
  double lift_deriv2(double x) const { return lift_deriv2_(x); }
  double expansion() const { return expansion_; }
  double c2_bound() const { return c2_bound_; }
  double base_point() const { return base_point_; }  // F(0)

  /// Map value on the circle, in [0,1).
  double operator()(double x) const { return wrap01(lift_(x)); }
  double deriv(double x) const { return lift_deriv_(x); }

  /// x with F(x) = t, the lift inverted as an increasing bijection of R.
  double lift_inverse(double t) const;

 private:
  int degree_;
  RealFn lift_, lift_deriv_, lift_deriv2_, lift_inverse_;
  double expansion_, c2_bound_, base_point_;
};

/// Lift F(x) = d x + sum_k c_k sin(2 pi k x) / (2 pi k); requires
/// sum |c_k| < d - 1 so that F' >= d - sum |c_k| > 1.
CircleMap make_trig_map(int degree, const std::vector<double>& coeffs);

/// f = h0^{-1} o g o h0 for h0(x) = x + a sin(2 pi x) / (2 pi), |a| < 1.
/// Exact composition of evaluators; the distinguished fixed point at 0 is
/// preserved when g fixes 0.
CircleMap conjugate_map(const CircleMap& g, double a);

/// The d preimages x_0 < ... < x_{d-1} in [0,1) of y, ordered by branch.
std::vector<double> inverse_branches(const CircleMap& f, double y);

/// Single branch preimage: x in [0,1) with F(x) = rep(y) + branch, where
/// rep(y) is the representative of y in [F(0), F(0)+1).
double branch_preimage(const CircleMap& f, double y, int branch);

/// Partition endpoints: the preimages of the base point. Branch interval j is
/// [x_j, x_{j+1}) with x_d = x_0 + 1.
std::vector<double> branch_points(const CircleMap& f);

/// Symbol of x under the left-closed branch partition.
int branch_symbol(const std::vector<double>& points, double x);

/// psi_f(x) = -log F'(x), the potential of the absolutely continuous
/// equilibrium state.
RealFn neg_log_deriv(const CircleMap& f);

// Map specifications as structured text:
//   {"family":"trig","degree":d,"coeffs":[...]}
//   {"family":"conjugated","base":<spec>,"a":a}
nlohmann::json trig_map_spec(int degree, const std::vector<double>& coeffs);
nlohmann::json conjugated_map_spec(nlohmann::json base, double a);
CircleMap map_from_spec(const nlohmann::json& spec);

}  // namespace rigidity
