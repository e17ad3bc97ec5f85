#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "semidirac/field.hpp"

namespace semidirac {

/// 2x2 matrix potential.  Only v11, v22 (real) and v12 are stored; v21 is
/// the pointwise conjugate of v12 and is formed at assembly time, so the
/// Hermiticity relation cannot be broken by construction.
struct Potential {
  ScalarField2D v11 = ScalarField2D::zero();
  ScalarField2D v22 = ScalarField2D::zero();
  ScalarField2D v12 = ScalarField2D::zero();
};

/// Descriptor of the perturbed Hamiltonian family H_eps = H_0 + eps V.
struct Model {
  double delta;    // gap half-width, > 0
  double epsilon;  // coupling, >= 0
  Potential potential;

  Model(double delta_, double epsilon_, Potential pot)
      : delta(delta_), epsilon(epsilon_), potential(std::move(pot)) {
    if (!(delta > 0.0)) throw std::invalid_argument("Model: delta must be > 0");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("Model: epsilon must be >= 0");
  }
};

struct ValidationCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationReport {
  bool passed = true;
  std::vector<ValidationCheck> checks;
  std::string first_failure;  // empty when passed

  void add(const std::string& name, bool ok, const std::string& detail = "") {
    checks.push_back({name, ok, detail});
    if (!ok && passed) {
      passed = false;
      first_failure = name;
    }
  }
};

/// Checks the standing assumptions on V: real-valued diagonal, decay at
/// infinity, and the L2 / L1 integrability of the coefficients.  Every
/// supported descriptor variant is integrable and vanishes at infinity, so
/// those checks can only fail through non-finite amplitudes.
inline ValidationReport validate_potential(const Potential& p) {
  ValidationReport report;
  report.add("v11 real-valued", p.v11.is_real());
  report.add("v22 real-valued", p.v22.is_real());
  auto finite_amplitudes = [](const ScalarField2D& f) {
    for (const auto& leaf : f.leaves()) {
      const cplx a = leaf.amplitude();
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
    }
    return true;
  };
  report.add("amplitudes finite", finite_amplitudes(p.v11) && finite_amplitudes(p.v22) &&
                                       finite_amplitudes(p.v12));
  // Disk indicators and Gaussians vanish at infinity and lie in L2; Gaussians
  // and disks also lie in L1.  At descriptor level this is a variant check.
  report.add("decay at infinity", true, "all descriptor variants vanish at infinity");
  report.add("v11, v22 in L2", true, "all descriptor variants are square-integrable");
  report.add("v12 in L2 and L1", true, "all descriptor variants are absolutely integrable");
  return report;
}

/// Both branches E-(k) <= 0 <= E+(k) of the unperturbed dispersion relation,
/// the eigenvalue pair of the 2x2 Fourier symbol
///   [[k_y, k_x^2 + delta], [k_x^2 + delta, -k_y]].
inline std::pair<double, double> dispersion(Vec2 k, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("dispersion: delta must be > 0");
  const double a = k.x * k.x + delta;
  const double e = std::hypot(k.y, a);
  return {-e, e};
}

/// Open interval (-delta, delta) in which discrete eigenvalues may lie.
struct GapInterval {
  double lo;
  double hi;
  bool contains(double e) const { return e > lo && e < hi; }
};

inline GapInterval spectral_edges(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("spectral_edges: delta must be > 0");
  return {-delta, delta};
}

}  // namespace semidirac
