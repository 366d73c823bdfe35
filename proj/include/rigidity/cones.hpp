#pragma once

#include <json.hpp>

#include "rigidity/symbolic.hpp"

namespace rigidity {

// Birkhoff cone C_L on the full shift: nonnegative Lipschitz functions with
// phi(x) <= e^{L d_theta(x,y)} phi(y) whenever d_theta(x,y) <= theta.
struct ConeParams {
  double theta;
  double xi;
  double L;
};

// Uniform spectral-gap certificate: Delta bounds the projective diameter of
// the image cone, tau = tanh(Delta/4) the per-step contraction, C the
// prefactor of the decay estimate.
struct ContractionCertificate {
  double theta;
  double xi;
  double L;
  double L0;
  double Delta;
  double tau;
  double C;
};

/// Exact membership check for a locally constant function: nonnegative, not
/// identically zero, and every same-first-symbol cylinder pair satisfies
/// phi(u) <= e^{L theta^c} phi(v) with c the common prefix length.
bool cone_contains(const CylinderFunction& phi, const ConeParams& p);

/// Hilbert pseudo-metric log(beta/alpha) via enumeration of the finite
/// constraint family. Throws if either input sits on the cone boundary.
double hilbert_metric(const CylinderFunction& phi, const CylinderFunction& psi,
                      const ConeParams& p);

/// 2 log((1+xi)/(1-xi)) + 2 xi L, the projective diameter bound of the image
/// cone L_psi(C_L) inside C_{xi L}.
double diameter_bound(double xi, double L);

struct ConeLevels {
  double L;   // for the raw potential
  double L0;  // for the normalized potential
};

/// Smallest admissible cone exponents for a potential with |psi|_theta <= M:
/// L = theta M/(xi-theta), L0 = theta((2+theta)M + (1+theta)L)/(xi-theta).
ConeLevels cone_parameters(double theta, double M, double xi);

/// Full certificate: Delta = diameter_bound(xi, L0), tau = tanh(Delta/4),
/// C = (e^Delta - 1)/tau.
ContractionCertificate contraction_certificate(double theta, double M,
                                               double xi);

/// Short-range Lipschitz seminorm V(phi): pairs sharing the first symbol.
double short_range_seminorm(const CylinderFunction& phi, double theta);

/// Full d_theta Lipschitz seminorm |phi|_theta (all cylinder pairs).
double theta_seminorm(const CylinderFunction& phi, double theta);

/// ||phi||_theta = sup|phi| + |phi|_theta.
double theta_norm(const CylinderFunction& phi, double theta);

/// ||phi||_L = max(sup|phi|, V(phi) / 2L).
double norm_L(const CylinderFunction& phi, const ConeParams& p);

/// Checks the certified decay bound
///   ||Lbar^n phi - int phi dmu||_theta <= 2 C tau^n (||phi||_theta + |phi|_theta / L)
/// against the exact operator iteration, for all n <= n_max.
bool verify_certified_decay(const CylinderFunction& psi,
                            const CylinderFunction& phi, double theta,
                            double xi, int n_max);

/// Same check against a caller-supplied certificate (falsification control).
bool verify_certified_decay(const CylinderFunction& psi,
                            const CylinderFunction& phi,
                            const ContractionCertificate& cert, int n_max);

nlohmann::json certificate_to_json(const ContractionCertificate& cert);

}  // namespace rigidity
