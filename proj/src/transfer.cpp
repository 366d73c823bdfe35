#include "rigidity/transfer.hpp"

#include <Eigen/SparseCore>
#include <cmath>
#include <stdexcept>

namespace rigidity {

namespace {

constexpr int kMaxPowerIterations = 100000;

// Discretized operator: row i holds the interpolation stencil of
// sum_j e^{psi(y_ij)} phi(y_ij) over the inverse branches y_ij of node i.
Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_operator(
    const CircleMap& f, const RealFn& psi, int resolution) {
  const int d = f.degree();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(resolution) * d * 2);
  for (int i = 0; i < resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    for (int j = 0; j < d; ++j) {
      const double y = branch_preimage(f, x, j);
      const double w = std::exp(psi(y));
      const double u = y * resolution;
      int c = static_cast<int>(u);
      if (c >= resolution) c = resolution - 1;
      const double t = u - c;
      triplets.emplace_back(i, c, w * (1.0 - t));
      triplets.emplace_back(i, (c + 1) % resolution, w * t);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> L(resolution, resolution);
  L.setFromTriplets(triplets.begin(), triplets.end());
  return L;
}

void check_iteration_setup(int resolution, double tol) {
  if (resolution < 256) {
    throw std::invalid_argument("power iteration: resolution must be >= 256");
  }
  if (tol < 1e-13) {
    throw std::invalid_argument("power iteration: tol must be >= 1e-13");
  }
}

}  // namespace

GridFunction apply_transfer(const CircleMap& f, const RealFn& psi,
                            const GridFunction& phi) {
  if (phi.resolution() < 16) {
    throw std::invalid_argument("apply_transfer: resolution must be >= 16");
  }
  const auto L = assemble_operator(f, psi, phi.resolution());
  Eigen::VectorXd v = L * phi.values().matrix();
  return GridFunction(v.array(), 0);
}

GridFunction apply_transfer(const CircleMap& f, const RealFn& psi,
                            const RealFn& phi, int resolution) {
  const int d = f.degree();
  Eigen::ArrayXd out(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
      const double y = branch_preimage(f, x, j);
      acc += std::exp(psi(y)) * phi(y);
    }
    out[i] = acc;
  }
  return GridFunction(std::move(out), 0);
}

DensityResult invariant_density(const CircleMap& f, int resolution,
                                double tol) {
  check_iteration_setup(resolution, tol);
  const auto L = assemble_operator(f, neg_log_deriv(f), resolution);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(resolution);
  for (int it = 1; it <= kMaxPowerIterations; ++it) {
    Eigen::VectorXd w = L * v;
    w /= w.mean();  // unit trapezoid mass
    const double change = (w - v).cwiseAbs().maxCoeff();
    v.swap(w);
    if (change < tol) {
      if (v.minCoeff() <= 0.0) {
        throw std::runtime_error("invariant_density: nonpositive node value");
      }
      return DensityResult{Density{GridFunction(v.array(), 0)}, it};
    }
  }
  throw std::runtime_error("invariant_density: power iteration did not converge");
}

double pressure(const CircleMap& f, const RealFn& psi, int resolution,
                double tol) {
  check_iteration_setup(resolution, tol);
  const auto L = assemble_operator(f, psi, resolution);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(resolution);
  double ratio = 0.0;
  for (int it = 1; it <= kMaxPowerIterations; ++it) {
    Eigen::VectorXd w = L * v;
    const double next = w.cwiseAbs().mean();  // L1 norm ratio, ||v||_1 = 1
    w /= next;
    const double change = (w - v).cwiseAbs().maxCoeff();
    const double settled = std::abs(next - ratio);
    ratio = next;
    v.swap(w);
    if (change < tol && settled < tol) return std::log(ratio);
  }
  throw std::runtime_error("pressure: power iteration did not converge");
}

GridFunction cdf(const Density& rho) {
  const auto& v = rho.grid.values();
  const int g = rho.grid.resolution();
  Eigen::ArrayXd I(g);
  I[0] = 0.0;
  for (int i = 1; i < g; ++i) {
    I[i] = I[i - 1] + 0.5 * (v[i - 1] + v[i]) / g;
  }
  const double mass = I[g - 1] + 0.5 * (v[g - 1] + v[0]) / g;
  I /= mass;
  GridFunction out(std::move(I), 1);
  if (!out.strictly_increasing()) {
    throw std::runtime_error("cdf: node values are not strictly increasing");
  }
  return out;
}

double inverse_cdf(const GridFunction& I, double u) {
  const auto& v = I.values();
  const int g = I.resolution();
  const double lo = v[0];
  const double hi = v[0] + I.periodic_offset();
  if (u < lo || u > hi) {
    throw std::domain_error("inverse_cdf: u outside [I(0), I(1)]");
  }
  if (u == lo) return 0.0;
  if (u == hi) return 1.0;
  // largest node with I <= u
  const double* begin = v.data();
  const double* it = std::upper_bound(begin, begin + g, u);
  int i = static_cast<int>(it - begin) - 1;
  if (i < 0) i = 0;  // u == v[0] up to representation
  if (i >= g) i = g - 1;
  const double left = v[i];
  const double right = (i + 1 < g) ? v[i + 1] : v[0] + I.periodic_offset();
  const double width = right - left;
  const double frac = width > 0.0 ? (u - left) / width : 0.0;
  return (i + frac) / g;
}

std::vector<double> empirical_decay(const CircleMap& f, const RealFn& psi,
                                    const GridFunction& phi, int n_max) {
  if (n_max < 1 || n_max > 60) {
    throw std::invalid_argument("empirical_decay: n_max must lie in [1, 60]");
  }
  const int g = phi.resolution();
  const auto L = assemble_operator(f, psi, g);
  const Density rho = invariant_density(f, g, 1e-12).density;
  const Eigen::ArrayXd target = rho.grid.values() * trapezoid_integral(phi);

  std::vector<double> errors;
  errors.reserve(n_max);
  Eigen::VectorXd v = phi.values().matrix();
  for (int n = 1; n <= n_max; ++n) {
    v = L * v;
    errors.push_back((v.array() - target).abs().maxCoeff());
  }
  return errors;
}

double holder_quotient_estimate(const GridFunction& g, double alpha,
                                int max_lag) {
  const int n = g.resolution();
  const auto& v = g.values();
  double best = 0.0;
  for (int lag = 1; lag <= max_lag && lag < n; ++lag) {
    const double dist = std::pow(static_cast<double>(lag) / n, alpha);
    for (int i = 0; i < n; ++i) {
      const int j = (i + lag) % n;
      best = std::max(best, std::abs(v[j] - v[i]) / dist);
    }
  }
  return best;
}

}  // namespace rigidity
