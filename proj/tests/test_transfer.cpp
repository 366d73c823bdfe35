#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rigidity/conjugacy.hpp"
#include "rigidity/transfer.hpp"

using namespace rigidity;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double h0(double x, double a) { return x + a * std::sin(kTwoPi * x) / kTwoPi; }
double h0_deriv(double x, double a) { return 1.0 + a * std::cos(kTwoPi * x); }

}  // namespace

TEST_CASE("transfer operator fixes the constants for the doubling map") {
  const CircleMap f = make_trig_map(2, {});
  const GridFunction one = GridFunction::constant(1.0, 1 << 10);
  const GridFunction Lone = apply_transfer(f, neg_log_deriv(f), one);
  CHECK((Lone.values() - 1.0).abs().maxCoeff() <= 1e-15);

  const GridFunction Lone2 =
      apply_transfer(f, [](double) { return 0.0; }, one);
  CHECK((Lone2.values() - 2.0).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("transfer annihilates the first harmonic of the doubling map") {
  const CircleMap f = make_trig_map(2, {});
  const GridFunction phi = GridFunction::sample(
      [](double x) { return std::cos(kTwoPi * x); }, 1 << 10);
  const GridFunction Lphi = apply_transfer(f, neg_log_deriv(f), phi);
  CHECK(Lphi.max_abs() <= 1e-14);
}

TEST_CASE("apply_transfer rejects tiny grids") {
  const CircleMap f = make_trig_map(2, {});
  CHECK_THROWS_AS(
      apply_transfer(f, neg_log_deriv(f), GridFunction::constant(1.0, 8)),
      std::invalid_argument);
}

TEST_CASE("doubling map has Lebesgue as invariant density") {
  const auto res = invariant_density(make_trig_map(2, {}), 1 << 10, 1e-12);
  CHECK((res.density.grid.values() - 1.0).abs().maxCoeff() <= 1e-13);
  CHECK(res.iterations <= 3);
  CHECK(trapezoid_integral(res.density.grid) == doctest::Approx(1.0));
}

TEST_CASE("power iteration rejects tiny grids and over-tight tolerances") {
  const CircleMap f = make_trig_map(2, {});
  CHECK_THROWS_AS(invariant_density(f, 128, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(invariant_density(f, 1 << 10, 1e-14), std::invalid_argument);
  CHECK_THROWS_AS(pressure(f, neg_log_deriv(f), 128, 1e-12),
                  std::invalid_argument);
}

TEST_CASE("invariant density matches a doubled-resolution reference run") {
  const CircleMap f = make_trig_map(2, {0.5});
  const auto coarse = invariant_density(f, 1 << 12, 1e-12);
  const auto fine = invariant_density(f, 1 << 16, 1e-12);
  double worst = 0.0;
  for (int i = 0; i < (1 << 12); ++i) {
    worst = std::max(worst, std::abs(coarse.density.grid.values()[i] -
                                     fine.density.grid.values()[i << 4]));
  }
  CHECK(worst <= 1e-6);
  CHECK(coarse.density.min_value() > 0.0);
  CHECK(trapezoid_integral(coarse.density.grid) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conjugated doubling map has density h0'") {
  const CircleMap f = conjugate_map(make_trig_map(2, {}), 0.2);
  const auto res = invariant_density(f, 1 << 14, 1e-12);
  double worst = 0.0;
  for (int i = 0; i < (1 << 14); ++i) {
    const double x = res.density.grid.node(i);
    worst = std::max(worst,
                     std::abs(res.density.grid.values()[i] - h0_deriv(x, 0.2)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("density refinement converges at first order or better") {
  const CircleMap f = make_trig_map(2, {0.5});
  const auto r10 = invariant_density(f, 1 << 10, 1e-12);
  const auto r11 = invariant_density(f, 1 << 11, 1e-12);
  const auto r12 = invariant_density(f, 1 << 12, 1e-12);
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i < (1 << 10); ++i) {
    d1 = std::max(d1, std::abs(r10.density.grid.values()[i] -
                               r11.density.grid.values()[2 * i]));
  }
  for (int i = 0; i < (1 << 11); ++i) {
    d2 = std::max(d2, std::abs(r11.density.grid.values()[i] -
                               r12.density.grid.values()[2 * i]));
  }
  CHECK(d2 / d1 <= 0.8);
}

TEST_CASE("density band holds across the d=2 family") {
  for (const auto& coeffs : std::vector<std::vector<double>>{
           {0.5}, {0.6}, {0.3, 0.3}, {-0.4, 0.2}}) {
    const auto res = invariant_density(make_trig_map(2, coeffs), 1 << 12, 1e-12);
    CHECK(res.density.min_value() >= 0.2);
    CHECK(res.density.max_value() <= 5.0);
    CHECK(res.density.within_band(5.0));
  }
}

TEST_CASE("Lebesgue duality of the psi_f operator") {
  std::mt19937 rng(401);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (const CircleMap& f : {make_trig_map(2, {0.5}), make_trig_map(3, {0.4})}) {
    for (int trial = 0; trial < 5; ++trial) {
      const double c0 = unif(rng), c1 = unif(rng), c2 = unif(rng);
      const RealFn phi = [=](double x) {
        return c0 + c1 * std::sin(kTwoPi * x) + c2 * std::cos(2 * kTwoPi * x);
      };
      const GridFunction Lphi =
          apply_transfer(f, neg_log_deriv(f), phi, 1 << 12);
      const double norm = std::abs(c0) + std::abs(c1) + std::abs(c2);
      CHECK(std::abs(trapezoid_integral(Lphi) - c0) <= 1e-8 * norm);
    }
  }
}

TEST_CASE("pressure values") {
  const CircleMap doubling = make_trig_map(2, {});
  CHECK(std::abs(pressure(doubling, neg_log_deriv(doubling), 1 << 10, 1e-12)) <=
        1e-10);
  CHECK(pressure(doubling, [](double) { return 0.0; }, 1 << 10, 1e-12) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(pressure(doubling, [](double) { return 0.7; }, 1 << 10, 1e-12) ==
        doctest::Approx(0.7 + std::log(2.0)).epsilon(1e-10));

  const CircleMap trig = make_trig_map(2, {0.5});
  CHECK(std::abs(pressure(trig, neg_log_deriv(trig), 1 << 14, 1e-12)) <= 1e-8);
  // zero potential: the leading eigenvalue is the branch count for any
  // degree-2 expanding map
  CHECK(pressure(trig, [](double) { return 0.0; }, 1 << 12, 1e-12) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("interpolated and exact transfer application agree") {
  const CircleMap f = make_trig_map(2, {0.3, 0.2});
  const RealFn phi = [](double x) { return std::sin(kTwoPi * x) + 2.0; };
  const int g = 1 << 12;
  const GridFunction sampled = GridFunction::sample(phi, g);
  const GridFunction via_grid = apply_transfer(f, neg_log_deriv(f), sampled);
  const GridFunction via_exact = apply_transfer(f, neg_log_deriv(f), phi, g);
  CHECK((via_grid.values() - via_exact.values()).abs().maxCoeff() <= 1e-6);
}

TEST_CASE("cdf of the flat density is the identity") {
  Density rho{GridFunction::constant(1.0, 1 << 10)};
  const GridFunction I = cdf(rho);
  CHECK(I.periodic_offset() == 1);
  CHECK(I(0.0) == 0.0);
  CHECK(I(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(I(0.37) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(I.strictly_increasing());
}

TEST_CASE("cdf of the conjugated density recovers h0") {
  const CircleMap f = conjugate_map(make_trig_map(2, {}), 0.2);
  const auto res = invariant_density(f, 1 << 14, 1e-12);
  const GridFunction I = cdf(res.density);
  double worst = 0.0;
  for (int i = 0; i < (1 << 14); ++i) {
    const double x = I.node(i);
    worst = std::max(worst, std::abs(I.values()[i] - h0(x, 0.2)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("monotone grid inversion") {
  SUBCASE("identity CDF") {
    Density rho{GridFunction::constant(1.0, 1 << 10)};
    const GridFunction I = cdf(rho);
    CHECK(inverse_cdf(I, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(inverse_cdf(I, 0.0) == 0.0);
    CHECK(inverse_cdf(I, 1.0) == doctest::Approx(1.0));
  }
  SUBCASE("piecewise-linear synthetic CDF: rho = 2 on [0, 1/2]") {
    const int g = 1 << 10;
    Eigen::ArrayXd v(g);
    for (int i = 0; i < g; ++i) {
      v[i] = std::min(1.0, 2.0 * i / g);
    }
    const GridFunction I(v, 1);
    CHECK(inverse_cdf(I, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(inverse_cdf(I, 1.0) == doctest::Approx(1.0));
  }
  SUBCASE("rejects out-of-range targets") {
    Density rho{GridFunction::constant(1.0, 1 << 10)};
    const GridFunction I = cdf(rho);
    CHECK_THROWS_AS(inverse_cdf(I, -0.1), std::domain_error);
    CHECK_THROWS_AS(inverse_cdf(I, 1.1), std::domain_error);
  }
  SUBCASE("round-trip on a curved CDF") {
    const CircleMap f = make_trig_map(2, {0.5});
    const GridFunction I = cdf(invariant_density(f, 1 << 12, 1e-12).density);
    for (double u : {0.0, 0.111, 0.5, 0.93, 1.0}) {
      CHECK(I(inverse_cdf(I, u)) == doctest::Approx(u).epsilon(1e-12));
    }
  }
}

TEST_CASE("empirical decay of the weighted operator") {
  SUBCASE("doubling: first harmonic dies in one step") {
    const CircleMap f = make_trig_map(2, {});
    const GridFunction phi = GridFunction::sample(
        [](double x) { return std::cos(kTwoPi * x); }, 1 << 10);
    const auto errors = empirical_decay(f, neg_log_deriv(f), phi, 5);
    CHECK(errors[0] <= 1e-14);
  }
  SUBCASE("doubling: constants are fixed") {
    const CircleMap f = make_trig_map(2, {});
    const auto errors = empirical_decay(f, neg_log_deriv(f),
                                        GridFunction::constant(1.0, 1 << 10), 5);
    for (double e : errors) CHECK(e <= 1e-13);
  }
  SUBCASE("nonlinear map decays geometrically") {
    const CircleMap f = make_trig_map(2, {0.5});
    const GridFunction phi = GridFunction::sample(
        [](double x) { return std::sin(kTwoPi * x); }, 1 << 11);
    const auto errors = empirical_decay(f, neg_log_deriv(f), phi, 20);
    std::vector<std::pair<int, double>> pts;
    for (int n = 2; n <= 20; ++n) {
      CHECK(errors[n - 1] < errors[n - 2]);  // strictly decreasing
      pts.push_back({n, errors[n - 1]});
    }
    const RateFit fit = fit_rate(pts);
    CHECK(fit.lambda < 1.0);
  }
  SUBCASE("n_max budget") {
    const CircleMap f = make_trig_map(2, {});
    CHECK_THROWS_AS(empirical_decay(f, neg_log_deriv(f),
                                    GridFunction::constant(1.0, 1 << 10), 61),
                    std::invalid_argument);
  }
}

TEST_CASE("holder quotient diagnostic is finite and scales") {
  const CircleMap f = make_trig_map(2, {0.5});
  const auto rho = invariant_density(f, 1 << 12, 1e-12).density;
  const double q = holder_quotient_estimate(rho.grid, 0.5);
  CHECK(std::isfinite(q));
  CHECK(q > 0.0);
}
