#include "rigidity/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace rigidity {

GridFunction::GridFunction(Eigen::ArrayXd values, int periodic_offset)
    : values_(std::move(values)), periodic_offset_(periodic_offset) {
  if (values_.size() < 2) {
    throw std::invalid_argument("GridFunction: need at least 2 nodes");
  }
}

GridFunction GridFunction::sample(const RealFn& f, int resolution,
                                  int periodic_offset) {
  Eigen::ArrayXd v(resolution);
  for (int i = 0; i < resolution; ++i) {
    v[i] = f(static_cast<double>(i) / resolution);
  }
  return GridFunction(std::move(v), periodic_offset);
}

GridFunction GridFunction::constant(double value, int resolution) {
  return GridFunction(Eigen::ArrayXd::Constant(resolution, value), 0);
}

double GridFunction::operator()(double x) const {
  const int g = resolution();
  const double k = std::floor(x);
  double t = x - k;
  if (t >= 1.0) t = 0.0;
  const double u = t * g;
  int i = static_cast<int>(u);
  if (i >= g) i = g - 1;
  const double w = u - i;
  const double left = values_[i];
  const double right = (i + 1 < g) ? values_[i + 1] : values_[0] + periodic_offset_;
  return left + w * (right - left) + k * periodic_offset_;
}

bool GridFunction::strictly_increasing() const {
  const int g = resolution();
  for (int i = 0; i + 1 < g; ++i) {
    if (!(values_[i + 1] > values_[i])) return false;
  }
  return values_[0] + periodic_offset_ > values_[g - 1];
}

double trapezoid_integral(const GridFunction& g) {
  // nodes wrap: sum of cell trapezoids collapses to the node mean
  return g.values().mean() + 0.5 * g.periodic_offset() / g.resolution();
}

double integrate_product(const RealFn& phi, const GridFunction& rho) {
  const int g = rho.resolution();
  const auto& v = rho.values();
  double acc = 0.5 * (phi(0.0) * v[0] + phi(1.0) * v[0]);
  for (int i = 1; i < g; ++i) {
    acc += phi(static_cast<double>(i) / g) * v[i];
  }
  return acc / g;
}

}  // namespace rigidity
