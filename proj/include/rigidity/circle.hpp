#pragma once

#include <cmath>

namespace rigidity {

/// Representative of x in [0, 1).
inline double wrap01(double x) {
  double r = x - std::floor(x);
  return r < 1.0 ? r : 0.0;  // floor(x) can round so that x - floor(x) == 1
}

/// Distance on the circle R/Z.
inline double circle_distance(double a, double b) {
  double d = wrap01(a - b);
  return d <= 0.5 ? d : 1.0 - d;
}

}  // namespace rigidity
