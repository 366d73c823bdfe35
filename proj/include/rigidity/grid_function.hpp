#pragma once

#include <Eigen/Core>
#include <functional>

namespace rigidity {

using RealFn = std::function<double(double)>;

// A function sampled at the uniform grid nodes i/G and evaluated in between
// by linear interpolation. Evaluation is 1-periodic up to periodic_offset,
// the value gained per period: 0 for densities and observables, 1 for lifts,
// CDFs and circle conjugacies.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Eigen::ArrayXd values, int periodic_offset = 0);

  static GridFunction sample(const RealFn& f, int resolution,
                             int periodic_offset = 0);
  static GridFunction constant(double value, int resolution);

  int resolution() const { return static_cast<int>(values_.size()); }
  double node(int i) const { return static_cast<double>(i) / resolution(); }
  const Eigen::ArrayXd& values() const { return values_; }
  int periodic_offset() const { return periodic_offset_; }

  /// Linear interpolation; periodic continuation adds periodic_offset per unit.
  double operator()(double x) const;

  /// Node values strictly increase, including across the periodic seam.
  bool strictly_increasing() const;

  double max_abs() const { return values_.abs().maxCoeff(); }

 private:
  Eigen::ArrayXd values_;
  int periodic_offset_ = 0;
};

/// Trapezoid integral over one period; for periodic data this is the node mean.
double trapezoid_integral(const GridFunction& g);

/// Trapezoid integral of phi(x) * rho(x) over [0,1]; phi is evaluated at both
/// endpoints (it need not be periodic), rho is a periodic grid function.
double integrate_product(const RealFn& phi, const GridFunction& rho);

}  // namespace rigidity
