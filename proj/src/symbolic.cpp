#include "rigidity/symbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace rigidity {

namespace {

constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 24;

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

// index of the depth-m window starting at position t of the symbol buffer
std::uint64_t window_index(const std::vector<int>& w, int t, int m, int s) {
  std::uint64_t idx = 0;
  for (int j = 0; j < m; ++j) idx = idx * s + w[t + j];
  return idx;
}

}  // namespace

std::uint64_t enumeration_count(int alphabet, int n) {
  if (n < 1) throw std::invalid_argument("enumeration: n must be >= 1");
  std::uint64_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= alphabet;
    if (count > kEnumerationBudget) {
      throw std::invalid_argument("enumeration budget exceeded: s^n > 2^24");
    }
  }
  return count;
}

std::uint64_t word_to_index(std::span<const int> symbols, int alphabet) {
  std::uint64_t idx = 0;
  for (int c : symbols) {
    if (c < 0 || c >= alphabet) {
      throw std::invalid_argument("word symbol out of range");
    }
    idx = idx * alphabet + c;
  }
  return idx;
}

std::vector<int> word_from_index(std::uint64_t index, int alphabet, int length) {
  std::vector<int> w(length);
  for (int i = length - 1; i >= 0; --i) {
    w[i] = static_cast<int>(index % alphabet);
    index /= alphabet;
  }
  return w;
}

ThetaMetric::ThetaMetric(double t) : theta(t) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("ThetaMetric: theta must lie in (0,1)");
  }
}

double d_theta(std::span<const int> u, std::span<const int> v, double theta) {
  if (u.empty() || v.empty()) {
    throw std::invalid_argument("d_theta: prefixes must be nonempty");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("d_theta: theta must lie in (0,1)");
  }
  const std::size_t cap = std::min(u.size(), v.size());
  std::size_t c = 0;
  while (c < cap && u[c] == v[c]) ++c;
  return std::pow(theta, static_cast<double>(c));
}

CylinderFunction::CylinderFunction(int alphabet, int depth,
                                   Eigen::ArrayXd values)
    : alphabet_(alphabet), depth_(depth), values_(std::move(values)) {
  if (alphabet_ < 2) {
    throw std::invalid_argument("CylinderFunction: alphabet must be >= 2");
  }
  if (depth_ < 1) {
    throw std::invalid_argument("CylinderFunction: depth must be >= 1");
  }
  if (static_cast<std::uint64_t>(values_.size()) != ipow(alphabet_, depth_)) {
    throw std::invalid_argument("CylinderFunction: need s^depth values");
  }
}

CylinderFunction CylinderFunction::constant(int alphabet, int depth,
                                            double value) {
  return CylinderFunction(
      alphabet, depth,
      Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(ipow(alphabet, depth)),
                               value));
}

CylinderFunction CylinderFunction::indicator(const Word& w, int alphabet) {
  const int m = w.size();
  Eigen::ArrayXd v =
      Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(ipow(alphabet, m)));
  v[static_cast<Eigen::Index>(word_to_index(w.symbols, alphabet))] = 1.0;
  return CylinderFunction(alphabet, m, std::move(v));
}

double CylinderFunction::eval(std::span<const int> symbols) const {
  if (static_cast<int>(symbols.size()) < depth_) {
    throw std::invalid_argument("CylinderFunction::eval: prefix too short");
  }
  return values_[static_cast<Eigen::Index>(
      word_to_index(symbols.subspan(0, depth_), alphabet_))];
}

CylinderFunction CylinderFunction::refined(int new_depth) const {
  if (new_depth < depth_) {
    throw std::invalid_argument("refined: new depth below current depth");
  }
  const Eigen::Index reps =
      static_cast<Eigen::Index>(ipow(alphabet_, new_depth - depth_));
  Eigen::ArrayXd v(static_cast<Eigen::Index>(ipow(alphabet_, new_depth)));
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    v.segment(i * reps, reps).setConstant(values_[i]);
  }
  return CylinderFunction(alphabet_, new_depth, std::move(v));
}

void to_json(nlohmann::json& j, const CylinderFunction& f) {
  std::vector<double> vals(f.values().data(),
                           f.values().data() + f.values().size());
  j = nlohmann::json{{"s", f.alphabet()}, {"depth", f.depth()}, {"values", vals}};
}

CylinderFunction cylinder_from_json(const nlohmann::json& j) {
  auto vals = j.at("values").get<std::vector<double>>();
  Eigen::ArrayXd v = Eigen::Map<const Eigen::ArrayXd>(
      vals.data(), static_cast<Eigen::Index>(vals.size()));
  return CylinderFunction(j.at("s").get<int>(), j.at("depth").get<int>(),
                          std::move(v));
}

double EquilibriumData::cylinder_mass(std::span<const int> symbols) const {
  double mass = 1.0;
  for (int c : symbols) mass *= symbol_probs[c];
  return mass;
}

double EquilibriumData::integrate(const CylinderFunction& phi) const {
  if (phi.alphabet() != alphabet) {
    throw std::invalid_argument("integrate: alphabet mismatch");
  }
  const int m = phi.depth();
  const std::uint64_t count = ipow(alphabet, m);
  double acc = 0.0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    auto w = word_from_index(idx, alphabet, m);
    acc += phi.values()[static_cast<Eigen::Index>(idx)] * cylinder_mass(w);
  }
  return acc;
}

EquilibriumData equilibrium_data(const CylinderFunction& psi) {
  if (psi.depth() != 1) {
    throw std::invalid_argument("equilibrium_data: potential must have depth 1");
  }
  const Eigen::ArrayXd weights = psi.values().exp();
  const double pressure = std::log(weights.sum());
  return EquilibriumData{psi.alphabet(), pressure,
                         weights / std::exp(pressure)};
}

PeriodicSums periodic_sum(const CylinderFunction& psi,
                          const CylinderFunction& phi, int n) {
  if (psi.alphabet() != phi.alphabet()) {
    throw std::invalid_argument("periodic_sum: alphabet mismatch");
  }
  const int s = psi.alphabet();
  const int mpsi = psi.depth();
  const int mphi = phi.depth();
  const std::uint64_t count = enumeration_count(s, n);
  // windows deeper than the period read the periodic extension of w
  const int pad = std::max(mpsi, mphi) - 1;

  std::vector<int> w(n + pad);
  double weighted = 0.0;
  double partition = 0.0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rem = idx;
    for (int i = n - 1; i >= 0; --i) {
      w[i] = static_cast<int>(rem % s);
      rem /= s;
    }
    for (int i = 0; i < pad; ++i) w[n + i] = w[i];  // x = w^infty
    double birkhoff = 0.0;
    for (int t = 0; t < n; ++t) {
      birkhoff += psi.values()[static_cast<Eigen::Index>(
          window_index(w, t, mpsi, s))];
    }
    const double weight = std::exp(birkhoff);
    partition += weight;
    weighted += weight * phi.values()[static_cast<Eigen::Index>(
                             window_index(w, 0, mphi, s))];
  }
  return PeriodicSums{weighted, partition};
}

double cylinder_decomposition_sum(const CylinderFunction& psi,
                                  const CylinderFunction& phi, int n) {
  if (psi.alphabet() != phi.alphabet()) {
    throw std::invalid_argument("cylinder sum: alphabet mismatch");
  }
  const int s = psi.alphabet();
  const int mpsi = psi.depth();
  const int mphi = phi.depth();
  const std::uint64_t count = enumeration_count(s, n);
  const int pad = std::max(mpsi, mphi) - 1;

  const Eigen::ArrayXd branch_weight = psi.values().exp();  // e^{psi} per window
  std::vector<int> w(n + pad);
  double total = 0.0;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rem = idx;
    for (int i = n - 1; i >= 0; --i) {
      w[i] = static_cast<int>(rem % s);
      rem /= s;
    }
    for (int i = 0; i < pad; ++i) w[n + i] = w[i];
    // Expand L^n(chi_[w] phi)(x_w) one inverse branch at a time, outermost
    // application first; chi_[w] keeps exactly one branch alive per level, the
    // one prepending w[t]. Weights multiply up instead of summing in the
    // exponent.
    double prod = 1.0;
    for (int t = n - 1; t >= 0; --t) {
      prod *= branch_weight[static_cast<Eigen::Index>(
          window_index(w, t, mpsi, s))];
    }
    total += prod * phi.values()[static_cast<Eigen::Index>(
                        window_index(w, 0, mphi, s))];
  }
  return total;
}

double shift_equidistribution_error(const CylinderFunction& psi,
                                    const CylinderFunction& phi, int n) {
  const EquilibriumData eq = equilibrium_data(psi);
  const PeriodicSums sums = periodic_sum(psi, phi, n);
  return std::abs(sums.weighted / sums.partition - eq.integrate(phi));
}

CylinderFunction apply_shift_transfer(const CylinderFunction& psi,
                                      const CylinderFunction& phi) {
  if (psi.alphabet() != phi.alphabet()) {
    throw std::invalid_argument("shift transfer: alphabet mismatch");
  }
  const int s = psi.alphabet();
  const int r = std::max({1, psi.depth() - 1, phi.depth() - 1});
  const std::uint64_t count = ipow(s, r);
  const CylinderFunction psi_r = psi.refined(r + 1);
  const CylinderFunction phi_r = phi.refined(r + 1);
  const Eigen::ArrayXd weight = psi_r.values().exp();

  Eigen::ArrayXd out(static_cast<Eigen::Index>(count));
  for (std::uint64_t x = 0; x < count; ++x) {
    double acc = 0.0;
    for (int i = 0; i < s; ++i) {
      const std::uint64_t ix = static_cast<std::uint64_t>(i) * count + x;
      acc += weight[static_cast<Eigen::Index>(ix)] *
             phi_r.values()[static_cast<Eigen::Index>(ix)];
    }
    out[static_cast<Eigen::Index>(x)] = acc;
  }
  return CylinderFunction(s, r, std::move(out));
}

}  // namespace rigidity
