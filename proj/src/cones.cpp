#include "rigidity/cones.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rigidity {

namespace {

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

// Per-level segment extrema of the value array: level c splits the words into
// s^c contiguous prefix blocks.
struct BlockExtrema {
  std::vector<double> min;
  std::vector<double> max;
};

std::vector<BlockExtrema> block_extrema(const CylinderFunction& phi) {
  const int s = phi.alphabet();
  const int m = phi.depth();
  std::vector<BlockExtrema> levels(m + 1);
  const Eigen::Index n = phi.values().size();
  levels[m].min.resize(n);
  levels[m].max.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    levels[m].min[i] = phi.values()[i];
    levels[m].max[i] = phi.values()[i];
  }
  for (int c = m - 1; c >= 0; --c) {
    const std::size_t blocks = ipow(s, c);
    levels[c].min.resize(blocks);
    levels[c].max.resize(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int a = 0; a < s; ++a) {
        lo = std::min(lo, levels[c + 1].min[b * s + a]);
        hi = std::max(hi, levels[c + 1].max[b * s + a]);
      }
      levels[c].min[b] = lo;
      levels[c].max[b] = hi;
    }
  }
  return levels;
}

// Largest gap max phi(u) - min phi(v) over word pairs whose common prefix has
// length exactly c, maximized over c in [c_min, m-1], each weighted 1/theta^c.
double seminorm_from(const CylinderFunction& phi, double theta, int c_min) {
  const int s = phi.alphabet();
  const int m = phi.depth();
  const auto levels = block_extrema(phi);
  double best = 0.0;
  for (int c = c_min; c < m; ++c) {
    const std::size_t blocks = ipow(s, c);
    const double scale = std::pow(theta, c);
    double gap = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
      for (int a = 0; a < s; ++a) {
        for (int a2 = a + 1; a2 < s; ++a2) {
          gap = std::max(gap, levels[c + 1].max[b * s + a] -
                                  levels[c + 1].min[b * s + a2]);
          gap = std::max(gap, levels[c + 1].max[b * s + a2] -
                                  levels[c + 1].min[b * s + a]);
        }
      }
    }
    best = std::max(best, gap / scale);
  }
  return best;
}

void check_cone_params(const ConeParams& p) {
  if (!(p.theta > 0.0 && p.theta < 1.0)) {
    throw std::invalid_argument("cone: theta must lie in (0,1)");
  }
  if (!(p.xi > p.theta && p.xi < 1.0)) {
    throw std::invalid_argument("cone: xi must lie in (theta, 1)");
  }
}

// Largest lambda with psi - lambda phi in the closed cone; -infinity when no
// lambda > 0 works.
double cone_order_alpha(const CylinderFunction& phi,
                        const CylinderFunction& psi, const ConeParams& p) {
  const int s = phi.alphabet();
  const int m = phi.depth();
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < phi.values().size(); ++i) {
    alpha = std::min(alpha, psi.values()[i] / phi.values()[i]);
  }
  // pair constraints lambda (e^{Ld} phi(v) - phi(u)) <= e^{Ld} psi(v) - psi(u)
  const std::uint64_t block = ipow(s, m - 1);
  std::vector<int> wu(m), wv(m);
  for (std::uint64_t u = 0; u < static_cast<std::uint64_t>(phi.values().size());
       ++u) {
    for (std::uint64_t v = (u / block) * block; v < (u / block + 1) * block;
         ++v) {
      if (v == u) continue;
      std::uint64_t du = u, dv = v;
      int c = 0;
      for (int k = 0; k < m; ++k) {
        wu[k] = static_cast<int>(du / ipow(s, m - 1 - k) % s);
        wv[k] = static_cast<int>(dv / ipow(s, m - 1 - k) % s);
      }
      while (c < m && wu[c] == wv[c]) ++c;
      const double e = std::exp(p.L * std::pow(p.theta, c));
      const double a = e * phi.values()[static_cast<Eigen::Index>(v)] -
                       phi.values()[static_cast<Eigen::Index>(u)];
      const double b = e * psi.values()[static_cast<Eigen::Index>(v)] -
                       psi.values()[static_cast<Eigen::Index>(u)];
      if (a > 0.0) {
        alpha = std::min(alpha, b / a);
      } else if (b < 0.0) {
        return -std::numeric_limits<double>::infinity();
      }
    }
  }
  return alpha;
}

}  // namespace

bool cone_contains(const CylinderFunction& phi, const ConeParams& p) {
  check_cone_params(p);
  const auto& v = phi.values();
  if ((v < 0.0).any()) return false;
  if ((v == 0.0).all()) return false;
  const int s = phi.alphabet();
  const int m = phi.depth();
  if (m < 2) return true;  // no distinct pair shares the first symbol
  const auto levels = block_extrema(phi);
  // enumerate pairs by exact common prefix length c >= 1
  for (int c = 1; c < m; ++c) {
    const std::size_t blocks = ipow(s, c);
    const double e = std::exp(p.L * std::pow(p.theta, c));
    for (std::size_t b = 0; b < blocks; ++b) {
      for (int a = 0; a < s; ++a) {
        for (int a2 = 0; a2 < s; ++a2) {
          if (a == a2) continue;
          if (levels[c + 1].max[b * s + a] >
              e * levels[c + 1].min[b * s + a2]) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

double hilbert_metric(const CylinderFunction& phi_in,
                      const CylinderFunction& psi_in, const ConeParams& p) {
  check_cone_params(p);
  const int m = std::max(phi_in.depth(), psi_in.depth());
  const CylinderFunction phi = phi_in.refined(m);
  const CylinderFunction psi = psi_in.refined(m);
  if ((phi.values() <= 0.0).any() || (psi.values() <= 0.0).any()) {
    throw std::invalid_argument("hilbert_metric: inputs must be positive");
  }
  const double alpha = cone_order_alpha(phi, psi, p);
  const double alpha_rev = cone_order_alpha(psi, phi, p);
  if (!(alpha > 0.0) || !(alpha_rev > 0.0)) {
    throw std::runtime_error("hilbert_metric: boundary ray, metric infinite");
  }
  const double beta = 1.0 / alpha_rev;
  return std::log(beta / alpha);
}

double diameter_bound(double xi, double L) {
  if (!(xi > 0.0 && xi < 1.0) || L < 0.0) {
    throw std::invalid_argument("diameter_bound: need 0 < xi < 1 and L >= 0");
  }
  return 2.0 * std::log((1.0 + xi) / (1.0 - xi)) + 2.0 * xi * L;
}

ConeLevels cone_parameters(double theta, double M, double xi) {
  if (!(theta > 0.0 && theta < 1.0) || !(xi > theta && xi < 1.0)) {
    throw std::invalid_argument("cone_parameters: need 0 < theta < xi < 1");
  }
  if (M < 0.0) {
    throw std::invalid_argument("cone_parameters: M must be >= 0");
  }
  const double L = theta * M / (xi - theta);
  const double L0 = theta * ((2.0 + theta) * M + (1.0 + theta) * L) / (xi - theta);
  return ConeLevels{L, L0};
}

ContractionCertificate contraction_certificate(double theta, double M,
                                               double xi) {
  const ConeLevels levels = cone_parameters(theta, M, xi);
  const double Delta = diameter_bound(xi, levels.L0);
  const double tau = std::tanh(Delta / 4.0);
  const double C = (std::exp(Delta) - 1.0) / tau;
  return ContractionCertificate{theta, xi, levels.L, levels.L0, Delta, tau, C};
}

double short_range_seminorm(const CylinderFunction& phi, double theta) {
  if (phi.depth() < 2) return 0.0;
  return seminorm_from(phi, theta, 1);
}

double theta_seminorm(const CylinderFunction& phi, double theta) {
  return seminorm_from(phi, theta, 0);
}

double theta_norm(const CylinderFunction& phi, double theta) {
  return phi.values().abs().maxCoeff() + theta_seminorm(phi, theta);
}

double norm_L(const CylinderFunction& phi, const ConeParams& p) {
  if (!(p.L > 0.0)) {
    throw std::invalid_argument("norm_L: L must be positive");
  }
  return std::max(phi.values().abs().maxCoeff(),
                  short_range_seminorm(phi, p.theta) / (2.0 * p.L));
}

bool verify_certified_decay(const CylinderFunction& psi,
                            const CylinderFunction& phi,
                            const ContractionCertificate& cert, int n_max) {
  if (psi.depth() != 1) {
    throw std::invalid_argument("certified decay: potential must have depth 1");
  }
  if (n_max < 1 || n_max > 30) {
    throw std::invalid_argument("certified decay: n_max must lie in [1, 30]");
  }
  const EquilibriumData eq = equilibrium_data(psi);
  if (std::abs(eq.pressure) > 1e-9) {
    throw std::invalid_argument(
        "certified decay: potential must be normalized (pressure 0)");
  }
  const double phi_semi = theta_seminorm(phi, cert.theta);
  if (!(cert.L > 0.0) && phi_semi > 0.0) {
    throw std::invalid_argument(
        "certified decay: L = 0 admits only constant observables");
  }
  const double mean = eq.integrate(phi);
  const double budget =
      2.0 * cert.C *
      (theta_norm(phi, cert.theta) + (phi_semi > 0.0 ? phi_semi / cert.L : 0.0));

  CylinderFunction g = phi;
  double factor = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    g = apply_shift_transfer(psi, g);
    factor *= cert.tau;
    CylinderFunction centered(g.alphabet(), g.depth(), g.values() - mean);
    if (theta_norm(centered, cert.theta) > budget * factor) return false;
  }
  return true;
}

bool verify_certified_decay(const CylinderFunction& psi,
                            const CylinderFunction& phi, double theta,
                            double xi, int n_max) {
  const double M = theta_seminorm(psi, theta);
  return verify_certified_decay(psi, phi, contraction_certificate(theta, M, xi),
                                n_max);
}

nlohmann::json certificate_to_json(const ContractionCertificate& cert) {
  return {{"theta", cert.theta}, {"xi", cert.xi},     {"L", cert.L},
          {"L0", cert.L0},       {"Delta", cert.Delta}, {"tau", cert.tau},
          {"C", cert.C}};
}

}  // namespace rigidity
