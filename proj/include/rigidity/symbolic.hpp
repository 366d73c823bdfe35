#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace rigidity {

// Finite symbol string over the alphabet {0..s-1}.
struct Word {
  std::vector<int> symbols;
  int size() const { return static_cast<int>(symbols.size()); }
};

/// Index of a word in the big-endian enumeration (first symbol most
/// significant), so that all words sharing a prefix are contiguous.
std::uint64_t word_to_index(std::span<const int> symbols, int alphabet);
std::vector<int> word_from_index(std::uint64_t index, int alphabet, int length);

/// theta^(common prefix length). When the prefixes agree entirely this is
/// theta^min(|u|,|v|), an upper bound for the distance of the underlying
/// infinite words, not the exact value.
double d_theta(std::span<const int> u, std::span<const int> v, double theta);

// The d_theta metric with its base pinned to (0,1) at construction.
struct ThetaMetric {
  double theta;
  explicit ThetaMetric(double t);
  double operator()(std::span<const int> u, std::span<const int> v) const {
    return d_theta(u, v, theta);
  }
};

// Locally constant function of depth m on the full shift: one value per
// depth-m cylinder, indexed like word_to_index.
class CylinderFunction {
 public:
  CylinderFunction(int alphabet, int depth, Eigen::ArrayXd values);

  static CylinderFunction constant(int alphabet, int depth, double value);
  static CylinderFunction indicator(const Word& w, int alphabet);

  int alphabet() const { return alphabet_; }
  int depth() const { return depth_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }

  /// Value on the cylinder of the first depth() entries of the span.
  double eval(std::span<const int> symbols) const;

  /// Same function represented on deeper cylinders.
  CylinderFunction refined(int new_depth) const;

 private:
  int alphabet_;
  int depth_;
  Eigen::ArrayXd values_;
};

void to_json(nlohmann::json& j, const CylinderFunction& f);
CylinderFunction cylinder_from_json(const nlohmann::json& j);

// Exact thermodynamic data of a depth-1 potential on the full shift:
// P = log sum_i e^{psi_i}, product equilibrium measure, constant
// eigenfunction.
struct EquilibriumData {
  int alphabet;
  double pressure;
  Eigen::ArrayXd symbol_probs;  // e^{psi_i - P}

  double cylinder_mass(std::span<const int> symbols) const;
  double integrate(const CylinderFunction& phi) const;
};

EquilibriumData equilibrium_data(const CylinderFunction& psi);

struct PeriodicSums {
  double weighted;   // sum over fix(sigma^n) of e^{S_n psi(x)} phi(x)
  double partition;  // Z_n(psi)
};

/// Brute force over all s^n periodic words x = w^infty; exact up to float
/// rounding. Observables deeper than n read the periodic extension of w.
/// Requires s^n within the enumeration budget.
PeriodicSums periodic_sum(const CylinderFunction& psi,
                          const CylinderFunction& phi, int n);

/// The same quantity through the cylinder decomposition
/// sum_{|i|=n} L_psi^n(chi_[i] phi)(x_i) with x_i = (i)^infty, expanding the
/// n-fold preimage sum branch by branch (the indicator selects one branch per
/// level, and weights accumulate multiplicatively).
double cylinder_decomposition_sum(const CylinderFunction& psi,
                                  const CylinderFunction& phi, int n);

/// | periodic_sum / Z_n - integral of phi d mu_psi | against the exact
/// equilibrium state of a depth-1 potential.
double shift_equidistribution_error(const CylinderFunction& psi,
                                    const CylinderFunction& phi, int n);

/// One exact application of the transfer operator L_psi to a locally constant
/// function; the result has depth max(1, depth(psi)-1, depth(phi)-1).
CylinderFunction apply_shift_transfer(const CylinderFunction& psi,
                                      const CylinderFunction& phi);

/// Largest admissible word enumeration: s^n <= 2^24.
std::uint64_t enumeration_count(int alphabet, int n);

}  // namespace rigidity
