#include "rigidity/circle_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rigidity {

namespace {

constexpr double kRootTol = 1e-14;
constexpr int kMaxRootIter = 100;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Solve F(x) = t on [0,1] for an increasing lift restricted to one period,
// by bisection with Newton refinement. The bracket is maintained so Newton
// can never escape it.
double solve_in_cell(const RealFn& F, const RealFn& Fp, double t) {
  double lo = 0.0, hi = 1.0;
  double flo = F(lo) - t;
  if (std::abs(flo) <= kRootTol) return lo;
  double fhi = F(hi) - t;
  if (std::abs(fhi) <= kRootTol) return hi;
  if (flo > 0.0 || fhi < 0.0) {
    throw std::runtime_error("lift inversion: target outside bracket");
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < kMaxRootIter; ++it) {
    double fx = F(x) - t;
    if (std::abs(fx) <= kRootTol * std::max(1.0, std::abs(t))) return x;
    if (fx > 0.0) hi = x; else lo = x;
    double step = fx / Fp(x);
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4e-16) return 0.5 * (lo + hi);
    x = next;
  }
  throw std::runtime_error("lift inversion did not converge");
}

}  // namespace

CircleMap::CircleMap(int degree, RealFn lift, RealFn lift_deriv,
                     RealFn lift_deriv2, double expansion, double c2_bound,
                     RealFn lift_inverse)
    : degree_(degree),
      lift_(std::move(lift)),
      lift_deriv_(std::move(lift_deriv)),
      lift_deriv2_(std::move(lift_deriv2)),
      lift_inverse_(std::move(lift_inverse)),
      expansion_(expansion),
      c2_bound_(c2_bound) {
  if (degree_ < 2) {
    throw std::invalid_argument("CircleMap: degree must be >= 2");
  }
  if (!(expansion_ > 1.0)) {
    throw std::invalid_argument("CircleMap: expansion must exceed 1");
  }
  base_point_ = lift_(0.0);
  if (base_point_ < 0.0 || base_point_ >= 1.0) {
    throw std::invalid_argument("CircleMap: lift must satisfy F(0) in [0,1)");
  }
  // spot-check the degree identity and uniform expansion
  for (int i = 0; i < 17; ++i) {
    double x = i / 17.0;
    if (std::abs(lift_(x + 1.0) - lift_(x) - degree_) > 1e-9) {
      throw std::invalid_argument("CircleMap: degree identity violated");
    }
    if (!(lift_deriv_(x) > 1.0)) {
      throw std::invalid_argument("CircleMap: lift derivative must exceed 1");
    }
  }
}

double CircleMap::lift_inverse(double t) const {
  if (lift_inverse_) return lift_inverse_(t);
  const double m = std::floor((t - base_point_) / degree_);
  const double target = t - degree_ * m;
  return m + solve_in_cell(lift_, lift_deriv_, target);
}

CircleMap make_trig_map(int degree, const std::vector<double>& coeffs) {
  if (degree < 2) {
    throw std::invalid_argument("make_trig_map: degree must be >= 2");
  }
  double abs_sum = 0.0;
  for (double c : coeffs) abs_sum += std::abs(c);
  if (abs_sum >= degree - 1.0) {
    throw std::invalid_argument(
        "make_trig_map: sum |c_k| must stay below degree - 1 "
        "(not uniformly expanding)");
  }
  const double d = degree;
  auto lift = [d, coeffs](double x) {
    double v = d * x;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      double w = kTwoPi * (k + 1);
      v += coeffs[k] * std::sin(w * x) / w;
    }
    return v;
  };
  auto lift_deriv = [d, coeffs](double x) {
    double v = d;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      v += coeffs[k] * std::cos(kTwoPi * (k + 1) * x);
    }
    return v;
  };
  auto lift_deriv2 = [coeffs](double x) {
    double v = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      double w = kTwoPi * (k + 1);
      v -= coeffs[k] * w * std::sin(w * x);
    }
    return v;
  };
  double c2 = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    c2 += std::abs(coeffs[k]) * kTwoPi * (k + 1);
  }
  auto lift_inv = [lift, lift_deriv, degree](double t) {
    const double m = std::floor(t / degree);
    return m + solve_in_cell(lift, lift_deriv, t - degree * m);
  };
  return CircleMap(degree, lift, lift_deriv, lift_deriv2, degree - abs_sum, c2,
                   lift_inv);
}

CircleMap conjugate_map(const CircleMap& g, double a) {
  if (std::abs(a) >= 1.0) {
    throw std::invalid_argument(
        "conjugate_map: |a| must be below 1 (h0 not a diffeomorphism)");
  }
  auto h = [a](double x) { return x + a * std::sin(kTwoPi * x) / kTwoPi; };
  auto hp = [a](double x) { return 1.0 + a * std::cos(kTwoPi * x); };
  auto hpp = [a](double x) { return -a * kTwoPi * std::sin(kTwoPi * x); };
  auto h_inv = [h, hp](double t) {
    const double m = std::floor(t);
    return m + solve_in_cell(h, hp, t - m);
  };

  auto lift = [g, h, h_inv](double x) { return h_inv(g.lift(h(x))); };
  auto lift_deriv = [g, h, hp, lift](double x) {
    return g.lift_deriv(h(x)) * hp(x) / hp(lift(x));
  };
  auto lift_deriv2 = [g, h, hp, hpp, lift, lift_deriv](double x) {
    const double hx = h(x);
    const double fx = lift(x);
    const double fp = lift_deriv(x);
    return (g.lift_deriv2(hx) * hp(x) * hp(x) + g.lift_deriv(hx) * hpp(x) -
            hpp(fx) * fp * fp) /
           hp(fx);
  };
  auto lift_inv = [g, h, h_inv](double t) { return h_inv(g.lift_inverse(h(t))); };

  const int samples = 4096;
  double min_deriv = std::numeric_limits<double>::infinity();
  double max_d2 = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x = static_cast<double>(i) / samples;
    min_deriv = std::min(min_deriv, lift_deriv(x));
    max_d2 = std::max(max_d2, std::abs(lift_deriv2(x)));
  }
  return CircleMap(g.degree(), lift, lift_deriv, lift_deriv2, min_deriv, max_d2,
                   lift_inv);
}

double branch_preimage(const CircleMap& f, double y, int branch) {
  const double rep = f.base_point() + wrap01(y - f.base_point());
  double x = f.lift_inverse(rep + branch);
  if (x < 0.0) x = 0.0;
  if (x >= 1.0) x = std::nextafter(1.0, 0.0);
  return x;
}

std::vector<double> inverse_branches(const CircleMap& f, double y) {
  std::vector<double> xs(f.degree());
  for (int j = 0; j < f.degree(); ++j) xs[j] = branch_preimage(f, y, j);
  return xs;
}

std::vector<double> branch_points(const CircleMap& f) {
  return inverse_branches(f, f.base_point());
}

int branch_symbol(const std::vector<double>& points, double x) {
  const double t = wrap01(x - points[0]) + points[0];
  auto it = std::upper_bound(points.begin(), points.end(), t);
  return static_cast<int>(it - points.begin()) - 1;
}

RealFn neg_log_deriv(const CircleMap& f) {
  return [f](double x) { return -std::log(f.deriv(x)); };
}

nlohmann::json trig_map_spec(int degree, const std::vector<double>& coeffs) {
  return {{"family", "trig"}, {"degree", degree}, {"coeffs", coeffs}};
}

nlohmann::json conjugated_map_spec(nlohmann::json base, double a) {
  return {{"family", "conjugated"}, {"base", std::move(base)}, {"a", a}};
}

CircleMap map_from_spec(const nlohmann::json& spec) {
  const std::string family = spec.at("family").get<std::string>();
  if (family == "trig") {
    return make_trig_map(spec.at("degree").get<int>(),
                         spec.at("coeffs").get<std::vector<double>>());
  }
  if (family == "conjugated") {
    return conjugate_map(map_from_spec(spec.at("base")),
                         spec.at("a").get<double>());
  }
  throw std::invalid_argument("map spec: unknown family '" + family + "'");
}

}  // namespace rigidity
