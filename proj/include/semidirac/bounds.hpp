#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "semidirac/cutoff.hpp"
#include "semidirac/model.hpp"
#include "semidirac/quadrature.hpp"

namespace semidirac {

/// The integrals of the potential entering every closed-form bound:
/// <Re V12>, ||V11||^2, ||V12||^2, ||V22||^2.
struct PotentialMoments {
  double mean_re_v12 = 0.0;
  double norm2_v11 = 0.0;
  double norm2_v12 = 0.0;
  double norm2_v22 = 0.0;
};

namespace detail {

/// Area of the intersection of two disks.
inline double disk_intersection_area(Vec2 c1, double r1, Vec2 c2, double r2) {
  const double d = dist(c1, c2);
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return M_PI * rmin * rmin;
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double s = 0.5 * std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) *
                                                     (d - r1 + r2) * (d + r1 + r2)));
  return r1 * r1 * a1 + r2 * r2 * a2 - s;
}

/// integral of f_i * conj(f_j) over the plane for two descriptor leaves.
/// Disk-disk and Gaussian-Gaussian products have closed forms; the mixed
/// pair is a smooth integrand on the disk and is integrated in aligned
/// polar coordinates with a coarse/fine convergence check.
inline cplx leaf_product_integral(const ScalarField2D& fi, const ScalarField2D& fj,
                                  const QuadControls& q) {
  using Kind = ScalarField2D::Kind;
  if (fi.kind() == Kind::Zero || fj.kind() == Kind::Zero) return 0.0;
  const cplx pref = fi.amplitude() * std::conj(fj.amplitude());
  if (fi.kind() == Kind::DiskIndicator && fj.kind() == Kind::DiskIndicator)
    return pref * disk_intersection_area(fi.center(), fi.radius(), fj.center(), fj.radius());
  if (fi.kind() == Kind::GaussianDecay && fj.kind() == Kind::GaussianDecay) {
    const double alpha = 1.0 / (fi.width() * fi.width());
    const double beta = 1.0 / (fj.width() * fj.width());
    const double d2 = (fi.center() - fj.center()).norm2();
    return pref * (M_PI / (alpha + beta)) * std::exp(-alpha * beta / (alpha + beta) * d2);
  }
  // Mixed disk/Gaussian pair.
  const ScalarField2D& disk = fi.kind() == Kind::DiskIndicator ? fi : fj;
  const ScalarField2D& gauss = fi.kind() == Kind::DiskIndicator ? fj : fi;
  const double w2 = gauss.width() * gauss.width();
  auto integrand = [&](Vec2 p) -> cplx { return std::exp(-(p - gauss.center()).norm2() / w2); };
  const auto low = QuadratureRule::polar_disk(disk.center(), disk.radius(), q.radial_order,
                                              q.angular_count);
  const auto high = QuadratureRule::polar_disk(disk.center(), disk.radius(), 2 * q.radial_order,
                                               2 * q.angular_count);
  return pref * integrate_checked(integrand, low, high, q.tolerance, "disk-Gaussian moment");
}

/// ||f||^2 via the bilinear expansion over descriptor leaves, so that
/// overlapping supports in Sum descriptors are handled exactly.
inline double field_norm2(const ScalarField2D& f, const QuadControls& q) {
  const auto leaves = f.leaves();
  double acc = 0.0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    acc += leaf_product_integral(leaves[i], leaves[i], q).real();
    for (std::size_t j = i + 1; j < leaves.size(); ++j)
      acc += 2.0 * leaf_product_integral(leaves[i], leaves[j], q).real();
  }
  return acc;
}

/// integral of Re f over the plane; exact for every descriptor.
inline double field_mean_re(const ScalarField2D& f) {
  using Kind = ScalarField2D::Kind;
  switch (f.kind()) {
    case Kind::Zero:
      return 0.0;
    case Kind::DiskIndicator:
      return f.amplitude().real() * M_PI * f.radius() * f.radius();
    case Kind::GaussianDecay:
      return f.amplitude().real() * M_PI * f.width() * f.width();
    case Kind::Sum: {
      double acc = 0.0;
      for (const auto& t : f.terms()) acc += field_mean_re(t);
      return acc;
    }
  }
  return 0.0;
}

}  // namespace detail

/// Computes the four moment integrals.  Disk and Gaussian leaves use closed
/// forms; mixed products fall back to aligned polar quadrature.
inline PotentialMoments potential_moments(const Potential& p, const QuadControls& q = {}) {
  const ValidationReport v = validate_potential(p);
  if (!v.passed)
    throw std::invalid_argument("potential_moments: invalid potential (" + v.first_failure + ")");
  PotentialMoments m;
  m.mean_re_v12 = detail::field_mean_re(p.v12);
  m.norm2_v11 = detail::field_norm2(p.v11, q);
  m.norm2_v12 = detail::field_norm2(p.v12, q);
  m.norm2_v22 = detail::field_norm2(p.v22, q);
  return m;
}

/// The quadratics I_eps^+- : eps^2 ||V11||^2 + eps^2 ||V12||^2
/// + 2 delta eps <Re V12>, with ||V22||^2 in place of ||V11||^2 for the
/// minus branch.
inline std::pair<double, double> i_eps(const PotentialMoments& m, double delta, double eps) {
  if (!(delta > 0.0)) throw std::invalid_argument("i_eps: delta must be > 0");
  const double shared = eps * eps * m.norm2_v12 + 2.0 * delta * eps * m.mean_re_v12;
  return {eps * eps * m.norm2_v11 + shared, eps * eps * m.norm2_v22 + shared};
}

struct SufficientCondition {
  bool nonempty;
  int count_lower_bound;  // 0, 1 or 2
};

/// Negative I^+ or I^- certifies a nonempty gap spectrum; both negative
/// certify at least two eigenvalues (the test spinors are orthogonal).
inline SufficientCondition sufficient_condition(double i_plus, double i_minus) {
  const int count = (i_plus < 0.0 ? 1 : 0) + (i_minus < 0.0 ? 1 : 0);
  return {count > 0, count};
}

struct WeakThresholds {
  std::optional<double> plus;
  std::optional<double> minus;
};

/// Coupling thresholds below which I_eps^+- < 0 is guaranteed:
/// eps < -2 delta <Re V12> / (||V11||^2 + ||V12||^2)  (and V22 analogue).
inline WeakThresholds weak_thresholds(const PotentialMoments& m, double delta) {
  WeakThresholds t;
  if (!(m.mean_re_v12 < 0.0)) return t;
  const double num = -2.0 * delta * m.mean_re_v12;
  if (m.norm2_v11 + m.norm2_v12 > 0.0) t.plus = num / (m.norm2_v11 + m.norm2_v12);
  if (m.norm2_v22 + m.norm2_v12 > 0.0) t.minus = num / (m.norm2_v22 + m.norm2_v12);
  return t;
}

struct CouplingBound {
  std::optional<double> value;
  std::string note;
};

/// Lower bound on the critical coupling for vanishing diagonal components:
/// eps_0 >= -2 delta <Re V12> / ||V12||^2.
inline CouplingBound coupling_lower_bound(const PotentialMoments& m, double delta) {
  if (m.norm2_v11 != 0.0 || m.norm2_v22 != 0.0)
    return {std::nullopt, "bound requires vanishing diagonal components"};
  if (!(m.mean_re_v12 < 0.0)) return {std::nullopt, "requires <Re V12> < 0"};
  if (m.norm2_v12 == 0.0) return {std::nullopt, "requires ||V12||^2 > 0"};
  return {-2.0 * delta * m.mean_re_v12 / m.norm2_v12, ""};
}

/// g(n) = (c / log n + I) / (pi n^4); the crude cutoff estimate behind it
/// requires n >= e.
inline double g_bound(double c, double i_val, double n) {
  if (!(c > 0.0)) throw std::invalid_argument("g_bound: c must be > 0");
  if (!(n >= M_E)) throw std::invalid_argument("g_bound: n must be >= e");
  const double n2 = n * n;
  return (c / std::log(n) + i_val) / (M_PI * n2 * n2);
}

/// log of the stationary point of n -> g(n):
/// log n = (c + sqrt(c^2 - c I)) / (-2 I).  Stays finite where exp() would
/// overflow in the weakly coupled regime.
inline double critical_log_n(double c, double i_val) {
  if (!(c > 0.0)) throw std::invalid_argument("critical_log_n: c must be > 0");
  if (!(i_val < 0.0))
    throw std::invalid_argument("critical_log_n: requires I < 0 (no negative minimum)");
  return (c + std::sqrt(c * c - c * i_val)) / (-2.0 * i_val);
}

/// n at the stationary point; overflows to +inf for extremely small |I|.
inline double critical_n(double c, double i_val) { return std::exp(critical_log_n(c, i_val)); }

/// log |g(n*)| evaluated at the unconstrained stationary point n*, in
/// log-space (the raw magnitude underflows as eps -> 0):
///   log|g| = 2 log|I| + log c - 2 log(c + S) - log pi - 2 (c + S)/|I|,
/// with S = sqrt(c^2 - c I).
inline double log_abs_g_at_critical(double c, double i_val) {
  const double ln_n = critical_log_n(c, i_val);  // validates inputs
  const double s = std::sqrt(c * c - c * i_val);
  return 2.0 * std::log(-i_val) + std::log(c) - 2.0 * std::log(c + s) - std::log(M_PI) -
         4.0 * ln_n;
}

namespace detail {

/// g at the minimizer over the admissible range [e, inf); the stationary
/// point is clamped to n = e when it falls below the crude-estimate range.
/// Returns {g value, n used}.
inline std::pair<double, double> g_at_constrained_minimum(double c, double i_val) {
  const double ln_n = critical_log_n(c, i_val);
  if (ln_n < 1.0) return {g_bound(c, i_val, M_E), M_E};
  return {-std::exp(log_abs_g_at_critical(c, i_val)), std::exp(ln_n)};
}

}  // namespace detail

struct Envelope {
  std::optional<double> h;
  std::string note;  // diagnostic when absent
};

/// h = sqrt(delta^2 + min over applicable branches of g(n*)); the tightest
/// valid branch bound.  Absent when neither I is negative.
inline Envelope energy_envelope(double delta, double c, double i_plus, double i_minus) {
  if (!(delta > 0.0)) throw std::invalid_argument("energy_envelope: delta must be > 0");
  double g = 0.0;
  bool any = false;
  for (double i_val : {i_plus, i_minus}) {
    if (i_val < 0.0) {
      const double gb = detail::g_at_constrained_minimum(c, i_val).first;
      g = any ? std::min(g, gb) : gb;
      any = true;
    }
  }
  if (!any) return {std::nullopt, "neither I^+ nor I^- is negative"};
  const double h2 = delta * delta + g;
  if (h2 < 0.0)
    return {std::nullopt, "delta^2 + g < 0: bound exceeds the gap, not representable as h"};
  return {std::sqrt(h2), ""};
}

/// Weak-coupling asymptotic of log |g(eps, n_eps)|:
///   log|g| = log(delta^2 <Re V12>^2 eps^2 / (pi c)) + 2 c / (delta <Re V12> eps).
inline double weak_asymptotic_log(double delta, double c, double mean_re_v12, double eps) {
  if (!(delta > 0.0)) throw std::invalid_argument("weak_asymptotic_log: delta must be > 0");
  if (!(c > 0.0)) throw std::invalid_argument("weak_asymptotic_log: c must be > 0");
  if (!(mean_re_v12 < 0.0))
    throw std::invalid_argument("weak_asymptotic_log: requires <Re V12> < 0");
  if (!(eps > 0.0)) throw std::invalid_argument("weak_asymptotic_log: requires eps > 0");
  return 2.0 * std::log(delta * -mean_re_v12 * eps) - std::log(M_PI * c) +
         2.0 * c / (delta * mean_re_v12 * eps);
}

/// Aggregate of every analytic quantity for one (potential, delta, eps).
struct BoundsReport {
  double epsilon = 0.0;
  PotentialMoments moments;
  double i_plus = 0.0;
  double i_minus = 0.0;
  bool sufficient_plus = false;   // I^+ < 0
  bool sufficient_minus = false;  // I^- < 0
  bool nonempty = false;
  int eigenvalue_count_lower_bound = 0;
  std::optional<double> threshold_plus;
  std::optional<double> threshold_minus;
  std::optional<double> coupling_bound;
  std::string coupling_note;
  CutoffConstants constants{};
  std::optional<double> n_crit_plus;   // minimizer over [e, inf)
  std::optional<double> n_crit_minus;
  std::optional<double> g_plus;   // emitted only when I^+ < 0
  std::optional<double> g_minus;  // emitted only when I^- < 0
  std::optional<double> envelope_h;
  std::string envelope_note;
  std::optional<double> asymptotic_log_abs_g;
};

/// Evaluates the full report from precomputed moments (the moments do not
/// depend on eps, so sweeps compute them once).
inline BoundsReport evaluate_bounds(const PotentialMoments& m, double delta, double eps,
                                    const CutoffConstants& cc) {
  BoundsReport r;
  r.epsilon = eps;
  r.moments = m;
  std::tie(r.i_plus, r.i_minus) = i_eps(m, delta, eps);
  const SufficientCondition sc = sufficient_condition(r.i_plus, r.i_minus);
  r.sufficient_plus = r.i_plus < 0.0;
  r.sufficient_minus = r.i_minus < 0.0;
  r.nonempty = sc.nonempty;
  r.eigenvalue_count_lower_bound = sc.count_lower_bound;
  const WeakThresholds wt = weak_thresholds(m, delta);
  r.threshold_plus = wt.plus;
  r.threshold_minus = wt.minus;
  const CouplingBound cb = coupling_lower_bound(m, delta);
  r.coupling_bound = cb.value;
  r.coupling_note = cb.note;
  r.constants = cc;
  if (r.i_plus < 0.0) {
    auto [g, n] = detail::g_at_constrained_minimum(cc.c, r.i_plus);
    r.g_plus = g;
    r.n_crit_plus = n;
  }
  if (r.i_minus < 0.0) {
    auto [g, n] = detail::g_at_constrained_minimum(cc.c, r.i_minus);
    r.g_minus = g;
    r.n_crit_minus = n;
  }
  const Envelope env = energy_envelope(delta, cc.c, r.i_plus, r.i_minus);
  r.envelope_h = env.h;
  r.envelope_note = env.note;
  if (m.mean_re_v12 < 0.0 && eps > 0.0)
    r.asymptotic_log_abs_g = weak_asymptotic_log(delta, cc.c, m.mean_re_v12, eps);
  return r;
}

inline BoundsReport evaluate_bounds(const Model& model, const QuadControls& q = {},
                                    const CutoffProfile& profile = CutoffProfile()) {
  const PotentialMoments m = potential_moments(model.potential, q);
  return evaluate_bounds(m, model.delta, model.epsilon, cutoff_constants(profile, model.delta));
}

}  // namespace semidirac
