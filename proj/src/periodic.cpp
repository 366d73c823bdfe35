#include "rigidity/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace rigidity {

namespace {

constexpr double kFixedPointTol = 1e-14;
constexpr double kMergeTol = 1e-9;
constexpr int kMaxSweeps = 400;

double contract_to_periodic_point(const CircleMap& f,
                                  const std::vector<int>& word) {
  const int n = static_cast<int>(word.size());
  double x = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double y = x;
    for (int t = n - 1; t >= 0; --t) y = branch_preimage(f, y, word[t]);
    if (std::abs(y - x) < kFixedPointTol) return y;
    x = y;
  }
  throw std::runtime_error("periodic_points: contraction did not settle");
}

}  // namespace

PeriodicOrbitSet periodic_points(const CircleMap& f, int N) {
  const int d = f.degree();
  const std::uint64_t count = enumeration_count(d, N);

  PeriodicOrbitSet set;
  set.period = N;
  set.degree = d;
  set.entries.reserve(count);
  std::vector<int> word(N);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rem = idx;
    for (int i = N - 1; i >= 0; --i) {
      word[i] = static_cast<int>(rem % d);
      rem /= d;
    }
    set.entries.push_back({idx, contract_to_periodic_point(f, word)});
  }

  // The all-0 and all-(d-1) itineraries both code the fixed endpoint; any
  // other near-coincidence means the tolerances failed.
  std::vector<std::size_t> order(set.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.entries[a].point < set.entries[b].point;
  });
  std::vector<std::pair<std::uint64_t, std::uint64_t>> collisions;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& a = set.entries[order[k]];
    const auto& b = set.entries[order[(k + 1) % order.size()]];
    if (circle_distance(a.point, b.point) < kMergeTol &&
        a.word_index != b.word_index) {
      collisions.emplace_back(std::min(a.word_index, b.word_index),
                              std::max(a.word_index, b.word_index));
    }
  }
  std::sort(collisions.begin(), collisions.end());
  collisions.erase(std::unique(collisions.begin(), collisions.end()),
                   collisions.end());
  if (collisions.size() != 1 || collisions[0].first != 0 ||
      collisions[0].second != count - 1) {
    throw std::runtime_error(
        "periodic_points: unexpected collision pattern among periodic points");
  }
  set.entries.pop_back();  // drop the all-(d-1) word; keeps count d^N - 1
  return set;
}

double birkhoff_sum(const CircleMap& f, const RealFn& psi, double x, int N) {
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    acc += psi(x);
    x = f(x);
  }
  return acc;
}

BowenMeasure bowen_measure(const CircleMap& f, const RealFn& psi, int N) {
  const PeriodicOrbitSet set = periodic_points(f, N);
  const Eigen::Index m = static_cast<Eigen::Index>(set.entries.size());

  BowenMeasure mu;
  mu.period = N;
  mu.degree = set.degree;
  mu.atoms.resize(m);
  mu.birkhoff.resize(m);
  mu.word_indices.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    mu.atoms[i] = set.entries[i].point;
    mu.birkhoff[i] = birkhoff_sum(f, psi, set.entries[i].point, N);
    mu.word_indices[i] = set.entries[i].word_index;
  }
  const Eigen::ArrayXd raw = mu.birkhoff.exp();
  mu.Z = raw.sum();
  mu.weights = raw / mu.Z;
  return mu;
}

double integrate_discrete(const BowenMeasure& mu, const RealFn& phi) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mu.atoms.size(); ++i) {
    acc += mu.weights[i] * phi(mu.atoms[i]);
  }
  return acc;
}

double discrete_cdf(const BowenMeasure& mu, double x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < mu.atoms.size(); ++i) {
    if (mu.atoms[i] <= x) acc += mu.weights[i];
  }
  return acc;
}

double partition_bound_check(const CircleMap& f, const RealFn& psi, int N_max,
                             double pressure) {
  if (N_max < 1) {
    throw std::invalid_argument("partition_bound_check: N_max must be >= 1");
  }
  double D = 1.0;
  for (int n = 1; n <= N_max; ++n) {
    const double Zn = bowen_measure(f, psi, n).Z;
    const double ratio = Zn * std::exp(-n * pressure);
    D = std::max({D, ratio, 1.0 / ratio});
  }
  return D;
}

void write_csv(const BowenMeasure& mu, std::ostream& out) {
  out << "word,point,birkhoff,weight\n";
  char buf[96];
  for (Eigen::Index i = 0; i < mu.atoms.size(); ++i) {
    const auto symbols =
        word_from_index(mu.word_indices[i], mu.degree, mu.period);
    for (int c : symbols) out << static_cast<char>('0' + c);
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,%.17g\n", mu.atoms[i],
                  mu.birkhoff[i], mu.weights[i]);
    out << buf;
  }
}

}  // namespace rigidity
