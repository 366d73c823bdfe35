#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rigidity/periodic.hpp"

using namespace rigidity;

TEST_CASE("doubling periodic points are the (2^N - 1)-division lattice") {
  const CircleMap f = make_trig_map(2, {});
  for (int N : {3, 5, 8}) {
    const auto set = periodic_points(f, N);
    const int m = (1 << N) - 1;
    REQUIRE(static_cast<int>(set.entries.size()) == m);
    std::vector<double> pts;
    for (const auto& e : set.entries) pts.push_back(e.point);
    std::sort(pts.begin(), pts.end());
    for (int k = 0; k < m; ++k) {
      CHECK(pts[k] ==
            doctest::Approx(static_cast<double>(k) / m).epsilon(1e-12));
    }
  }
}

TEST_CASE("degree-3 periodic points at N=2") {
  const auto set = periodic_points(make_trig_map(3, {}), 2);
  REQUIRE(set.entries.size() == 8);
  std::vector<double> pts;
  for (const auto& e : set.entries) pts.push_back(e.point);
  std::sort(pts.begin(), pts.end());
  for (int k = 0; k < 8; ++k) {
    CHECK(pts[k] == doctest::Approx(k / 8.0).epsilon(1e-12));
  }
}

TEST_CASE("the unique fixed point of the doubling map") {
  const auto set = periodic_points(make_trig_map(2, {}), 1);
  REQUIRE(set.entries.size() == 1);
  CHECK(set.entries[0].point == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(set.entries[0].word_index == 0);
}

TEST_CASE("every atom closes up under f^N") {
  for (const CircleMap& f :
       {make_trig_map(2, {0.5}), conjugate_map(make_trig_map(2, {}), 0.2)}) {
    for (int N : {1, 4, 9}) {
      const auto set = periodic_points(f, N);
      CHECK(static_cast<std::uint64_t>(set.entries.size()) ==
            (std::uint64_t{1} << N) - 1);
      for (const auto& e : set.entries) {
        double y = e.point;
        for (int i = 0; i < N; ++i) y = f(y);
        CHECK(circle_distance(y, e.point) <= 1e-10);
      }
    }
  }
}

TEST_CASE("birkhoff sums") {
  const CircleMap doubling = make_trig_map(2, {});
  const RealFn psi = neg_log_deriv(doubling);
  CHECK(birkhoff_sum(doubling, psi, 0.37, 5) ==
        doctest::Approx(-5.0 * std::log(2.0)).epsilon(1e-15));

  const CircleMap trig = make_trig_map(2, {0.5});
  CHECK(birkhoff_sum(trig, neg_log_deriv(trig), 0.0, 1) ==
        doctest::Approx(-std::log(2.5)).epsilon(1e-15));

  CHECK(birkhoff_sum(trig, [](double) { return 0.0; }, 0.3, 7) == 0.0);
}

TEST_CASE("Bowen measures of the doubling map") {
  const CircleMap f = make_trig_map(2, {});
  SUBCASE("N=3: uniform weights, Z = 7/8") {
    const auto mu = bowen_measure(f, neg_log_deriv(f), 3);
    REQUIRE(mu.atoms.size() == 7);
    CHECK(mu.Z == doctest::Approx(7.0 / 8).epsilon(1e-13));
    for (Eigen::Index i = 0; i < 7; ++i) {
      CHECK(mu.weights[i] == doctest::Approx(1.0 / 7).epsilon(1e-13));
    }
    CHECK(mu.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("N=1: single atom") {
    const auto mu = bowen_measure(f, neg_log_deriv(f), 1);
    REQUIRE(mu.atoms.size() == 1);
    CHECK(mu.weights[0] == doctest::Approx(1.0));
    CHECK(mu.Z == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("zero potential gives counting measure") {
    const auto mu = bowen_measure(f, [](double) { return 0.0; }, 2);
    REQUIRE(mu.atoms.size() == 3);
    CHECK(mu.Z == doctest::Approx(3.0));
    CHECK(mu.weights[0] == doctest::Approx(1.0 / 3));
  }
}

TEST_CASE("discrete integration against the lattice measure") {
  const CircleMap f = make_trig_map(2, {});
  const auto mu = bowen_measure(f, neg_log_deriv(f), 3);
  CHECK(integrate_discrete(mu, [](double x) { return x; }) ==
        doctest::Approx(3.0 / 7).epsilon(1e-13));
  // full root-of-unity sums vanish
  CHECK(std::abs(integrate_discrete(mu, [](double x) {
          return std::cos(2.0 * std::numbers::pi * x);
        })) <= 1e-12);
  CHECK(std::abs(integrate_discrete(mu, [](double x) {
          return std::sin(2.0 * std::numbers::pi * x);
        })) <= 1e-12);
  CHECK(integrate_discrete(mu, [](double) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("discrete CDF conventions") {
  const CircleMap f = make_trig_map(2, {});
  const auto mu = bowen_measure(f, neg_log_deriv(f), 3);
  CHECK(discrete_cdf(mu, 0.5) == doctest::Approx(4.0 / 7).epsilon(1e-13));
  CHECK(discrete_cdf(mu, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(discrete_cdf(mu, 0.0) == doctest::Approx(1.0 / 7).epsilon(1e-13));
}

TEST_CASE("partition function band") {
  const CircleMap f = make_trig_map(2, {});
  CHECK(partition_bound_check(f, neg_log_deriv(f), 4) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(partition_bound_check(f, neg_log_deriv(f), 0),
                  std::invalid_argument);

  const CircleMap trig = make_trig_map(2, {0.5});
  const double D = partition_bound_check(trig, neg_log_deriv(trig), 8);
  CHECK(std::isfinite(D));
  CHECK(D >= 1.0);
}

TEST_CASE("pullback identity: conjugated pairs share their weight profile") {
  const CircleMap g = make_trig_map(2, {});
  const CircleMap f = conjugate_map(g, 0.2);
  for (int N : {2, 5, 8, 10}) {
    const auto mu_f = bowen_measure(f, neg_log_deriv(f), N);
    const auto mu_g = bowen_measure(g, neg_log_deriv(g), N);
    REQUIRE(mu_f.word_indices == mu_g.word_indices);  // matched by word
    CHECK((mu_f.weights - mu_g.weights).abs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("bowen csv export carries the four documented columns") {
  const CircleMap f = make_trig_map(2, {});
  const auto mu = bowen_measure(f, neg_log_deriv(f), 2);
  std::ostringstream out;
  write_csv(mu, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "word,point,birkhoff,weight");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
