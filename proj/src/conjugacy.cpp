#include "rigidity/conjugacy.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rigidity {

Word itinerary(const CircleMap& f, double x, int n) {
  if (n < 1) throw std::invalid_argument("itinerary: n must be >= 1");
  const auto points = branch_points(f);
  Word w;
  w.symbols.resize(n);
  double y = wrap01(x);
  for (int i = 0; i < n; ++i) {
    w.symbols[i] = branch_symbol(points, y);
    y = f(y);
  }
  return w;
}

double conjugacy_point(const CircleMap& f, const CircleMap& g, double x,
                       int n) {
  if (f.degree() != g.degree()) {
    throw std::invalid_argument(
        "conjugacy_point: degrees differ, no conjugacy exists");
  }
  const Word w = itinerary(f, x, n);
  double y = 0.0;
  for (int i = n - 1; i >= 0; --i) y = branch_preimage(g, y, w.symbols[i]);
  return y;
}

double periodic_data_defect(const CircleMap& f, const CircleMap& g, int N) {
  if (f.degree() != g.degree()) {
    throw std::invalid_argument("periodic_data_defect: degrees differ");
  }
  const PeriodicOrbitSet pf = periodic_points(f, N);
  const PeriodicOrbitSet pg = periodic_points(g, N);
  const RealFn log_df = [&f](double x) { return std::log(f.deriv(x)); };
  const RealFn log_dg = [&g](double x) { return std::log(g.deriv(x)); };
  double defect = 0.0;
  for (std::size_t i = 0; i < pf.entries.size(); ++i) {
    const double sf = birkhoff_sum(f, log_df, pf.entries[i].point, N);
    const double sg = birkhoff_sum(g, log_dg, pg.entries[i].point, N);
    defect = std::max(defect, std::abs(sf - sg));
  }
  return defect;
}

ConjugacyGrid build_hN(const Density& rho_f, const Density& rho_g) {
  const int g = rho_f.grid.resolution();
  if (rho_g.grid.resolution() != g) {
    throw std::invalid_argument("build_hN: density resolutions differ");
  }
  const GridFunction If = cdf(rho_f);
  const GridFunction Ig = cdf(rho_g);
  Eigen::ArrayXd h(g), hp(g);
  for (int i = 0; i < g; ++i) {
    h[i] = inverse_cdf(Ig, If.values()[i]);
    hp[i] = rho_f.grid.values()[i] / rho_g.grid(h[i]);
  }
  GridFunction value(std::move(h), 1);
  if (!value.strictly_increasing()) {
    throw std::runtime_error("build_hN: conjugacy grid is not monotone");
  }
  return ConjugacyGrid{std::move(value), GridFunction(std::move(hp), 0)};
}

ConjugacyGrid build_hN(const CircleMap& f, const CircleMap& g, int resolution,
                       double tol) {
  if (f.degree() != g.degree()) {
    throw std::invalid_argument("build_hN: degrees differ");
  }
  const Density rho_f = invariant_density(f, resolution, tol).density;
  const Density rho_g = invariant_density(g, resolution, tol).density;
  return build_hN(rho_f, rho_g);
}

MapEvaluators conjugated_map(const CircleMap& g, const ConjugacyGrid& h) {
  if (!h.value.strictly_increasing()) {
    throw std::invalid_argument("conjugated_map: h grid must be monotone");
  }
  const GridFunction hv = h.value;
  const GridFunction hd = h.deriv;
  auto h_inverse = [hv](double t) {
    const double m = std::floor(t);
    return m + inverse_cdf(hv, t - m);
  };
  auto lift = [g, hv, h_inverse](double x) { return h_inverse(g.lift(hv(x))); };
  auto deriv = [g, hv, hd, lift](double x) {
    return g.lift_deriv(hv(x)) * hd(x) / hd(lift(x));
  };
  return MapEvaluators{lift, deriv};
}

double c0_distance(const RealFn& u, const RealFn& v, int resolution) {
  if (resolution < (1 << 10)) {
    throw std::invalid_argument("c0_distance: resolution must be >= 2^10");
  }
  double best = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    best = std::max(best, circle_distance(u(x), v(x)));
  }
  return best;
}

double c1_distance(const CircleMap& f, const MapEvaluators& fN,
                   int resolution) {
  if (resolution < (1 << 10)) {
    throw std::invalid_argument("c1_distance: resolution must be >= 2^10");
  }
  double c0 = 0.0, d1 = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    c0 = std::max(c0, circle_distance(f.lift(x), fN.lift(x)));
    d1 = std::max(d1, std::abs(f.lift_deriv(x) - fN.deriv(x)));
  }
  return c0 + d1;
}

double cdf_error(const BowenMeasure& mu, const GridFunction& I,
                 int eval_resolution) {
  double best = 0.0;
  for (int k = 0; k <= eval_resolution; ++k) {
    const double x = static_cast<double>(k) / eval_resolution;
    best = std::max(best, std::abs(discrete_cdf(mu, x) - I(x)));
  }
  return best;
}

double cdf_error(const CircleMap& f, int N, int density_resolution,
                 int eval_resolution) {
  const BowenMeasure mu = bowen_measure(f, neg_log_deriv(f), N);
  const Density rho = invariant_density(f, density_resolution, 1e-12).density;
  return cdf_error(mu, cdf(rho), eval_resolution);
}

double TentFunction::operator()(double y) const {
  const double z = wrap01(y + s);
  const double a = x + 2.0 * s;
  auto piece = [this, a](double t) {
    const double v = std::min(t, a - t) / w;
    return std::clamp(v, 0.0, 1.0);
  };
  // when the support [-s, x+s] wraps past a full period the two linear pieces
  // overlap; the pointwise max keeps the circle evaluation continuous
  return std::max(piece(z), piece(z + 1.0));
}

TentFunction tent_function(double x, double s, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("tent_function: w must be > 0");
  if (s < 0.0 || s > w) {
    throw std::invalid_argument("tent_function: need 0 <= s <= w");
  }
  return TentFunction{x, s, w};
}

double smoothed_cdf_gap(const BowenMeasure& mu, const Density& rho, double x,
                        double w) {
  const auto gap_at = [&](double s) {
    const TentFunction tent = tent_function(x, s, w);
    return integrate_discrete(mu, [&tent](double y) { return tent(y); }) -
           discrete_cdf(mu, x);
  };
  double lo = 0.0, hi = w;
  double glo = gap_at(lo), ghi = gap_at(hi);
  if (glo > 0.0 || ghi < 0.0) {
    throw std::runtime_error(
        "smoothed_cdf_gap: no sign change on [0, w]; tolerances misconfigured");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gap_at(mid) <= 0.0) lo = mid; else hi = mid;
  }
  const double s_star = 0.5 * (lo + hi);
  const TentFunction tent = tent_function(x, s_star, w);
  const GridFunction I = cdf(rho);
  const double smooth_vs_sharp =
      integrate_product([&tent](double y) { return tent(y); }, rho.grid) - I(x);
  return std::abs(smooth_vs_sharp);
}

double smoothed_cdf_gap(const CircleMap& f, int N, double x, double tau,
                        int density_resolution) {
  const BowenMeasure mu = bowen_measure(f, neg_log_deriv(f), N);
  const Density rho = invariant_density(f, density_resolution, 1e-12).density;
  return smoothed_cdf_gap(mu, rho, x, std::pow(tau, 0.5 * N));
}

RateFit fit_rate(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 4) {
    throw std::invalid_argument("fit_rate: need at least 4 points");
  }
  std::vector<std::pair<int, double>> used;
  for (const auto& [n, e] : points) {
    if (e <= 0.0) {
      throw std::invalid_argument(
          "fit_rate: nonpositive error; truncate the range first");
    }
    if (e >= 1e-11) used.push_back({n, e});  // drop the float floor
  }
  if (used.size() < 4) {
    throw std::runtime_error(
        "fit_rate: too few points above the 1e-11 float floor");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(used.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  int n_lo = used.front().first, n_hi = used.front().first;
  for (Eigen::Index i = 0; i < m; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = used[i].first;
    y[i] = std::log(used[i].second);
    n_lo = std::min(n_lo, used[i].first);
    n_hi = std::max(n_hi, used[i].first);
  }
  const Eigen::Vector2d coef = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = y - X * coef;
  const double ss_res = res.squaredNorm();
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  const double lambda = std::exp(coef[1]);
  return RateFit{std::exp(coef[0]), lambda, r2, {n_lo, n_hi},
                 lambda >= 1.0 - 1e-12};
}

double holder_derivative_bound(double M, double alpha, double eps, double delta) {
  if (M < 0.0 || !(alpha > 0.0 && alpha <= 1.0) || !(eps > 0.0) ||
      !(delta > 0.0)) {
    throw std::invalid_argument("holder_derivative_bound: parameter out of range");
  }
  return M * std::pow(delta, alpha) / (alpha + 1.0) + eps;
}

double c1_from_c0(const CircleMap& f, const MapEvaluators& fN, double delta,
                  double M, double alpha, int resolution) {
  Eigen::ArrayXd F(resolution);
  for (int i = 0; i < resolution; ++i) {
    const double x = static_cast<double>(i) / resolution;
    F[i] = fN.lift(x) - f.lift(x);
  }
  double eps = 0.0;
  for (int lag = 1; lag < resolution; ++lag) {
    const double frac = static_cast<double>(lag) / resolution;
    const double dist = std::min(frac, 1.0 - frac);
    if (dist <= delta) continue;
    for (int i = 0; i < resolution; ++i) {
      const int j = (i + lag) % resolution;
      eps = std::max(eps, std::abs(F[j] - F[i]) / dist);
    }
  }
  return holder_derivative_bound(M, alpha, eps, delta);
}

}  // namespace rigidity
