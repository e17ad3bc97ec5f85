#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "semidirac/bounds.hpp"
#include "semidirac/cutoff.hpp"
#include "semidirac/model.hpp"
#include "semidirac/quadrature.hpp"

namespace semidirac {

enum class SpinorSign { Plus, Minus };

/// Orders for integrals over the transition annulus n < r < n^2, evaluated
/// in (log r, theta) coordinates where the integrand varies on O(1) scale.
/// A tensor rule over the radius-n^2 box would be hopeless for n >= 8.
struct AnnulusQuad {
  int t_order = 48;       // Gauss-Legendre in the log-radial coordinate
  int theta_count = 64;   // uniform in angle
};

/// The regularised test function phi_n * spinor: phi_n = 1 on the disk of
/// radius n, 0 outside the disk of radius n^2, and xi(log_n(n^2 / r)) in
/// between.  All derivative evaluators follow from the chain rule through
/// f(r) = log_n(n^2 / r) and vanish off the transition annulus.
class RegularizedTestFunction {
 public:
  RegularizedTestFunction(CutoffProfile profile, double n, SpinorSign sign)
      : profile_(std::move(profile)), n_(n), sign_(sign), log_n_(std::log(n)) {
    if (!(n > 1.0)) throw std::invalid_argument("RegularizedTestFunction: n must be > 1");
  }

  double n() const { return n_; }
  SpinorSign sign() const { return sign_; }
  const CutoffProfile& profile() const { return profile_; }
  double inner_radius() const { return n_; }
  double outer_radius() const { return n_ * n_; }

  double value(Vec2 p) const {
    const double r = p.norm();
    if (r <= n_) return 1.0;
    if (r >= n_ * n_) return 0.0;
    return profile_.value(f(r));
  }

  double dx(Vec2 p) const { return radial_d1(p.norm()) * dir_x(p); }
  double dy(Vec2 p) const { return radial_d1(p.norm()) * dir_y(p); }

  double dxx(Vec2 p) const {
    const double r = p.norm();
    if (r <= n_ || r >= n_ * n_) return 0.0;
    const double cx = p.x / r, sy = p.y / r;
    return radial_d2(r) * cx * cx + radial_d1_at(r) * sy * sy / r;
  }

 private:
  double f(double r) const { return 2.0 - std::log(r) / log_n_; }

  double radial_d1_at(double r) const { return -profile_.d1(f(r)) / (r * log_n_); }

  double radial_d1(double r) const {
    if (r <= n_ || r >= n_ * n_) return 0.0;
    return radial_d1_at(r);
  }

  double radial_d2(double r) const {
    const double lr = r * log_n_;
    return profile_.d2(f(r)) / (lr * lr) + profile_.d1(f(r)) / (r * r * log_n_);
  }

  double dir_x(Vec2 p) const {
    const double r = p.norm();
    return r > 0.0 ? p.x / r : 0.0;
  }
  double dir_y(Vec2 p) const {
    const double r = p.norm();
    return r > 0.0 ? p.y / r : 0.0;
  }

  CutoffProfile profile_;
  double n_;
  SpinorSign sign_;
  double log_n_;
};

/// integral of g over the transition annulus n < r < n^2, via Gauss-Legendre
/// in t (where r = n^(2-t)) and a uniform angular rule; dA = r^2 log n dt dtheta.
template <typename F>
double annulus_integral(F&& g, double n, const AnnulusQuad& aq = {}) {
  auto [t_nodes, t_weights] = gauss_legendre(aq.t_order);
  const double log_n = std::log(n);
  const double dtheta = 2.0 * M_PI / aq.theta_count;
  double acc = 0.0;
  for (int i = 0; i < aq.t_order; ++i) {
    const double t = 0.5 * (t_nodes[i] + 1.0);
    const double wt = 0.5 * t_weights[i];
    const double r = std::pow(n, 2.0 - t);
    const double jac = r * r * log_n;
    double theta_sum = 0.0;
    for (int j = 0; j < aq.theta_count; ++j) {
      const double theta = dtheta * (j + 0.5);
      theta_sum += g(Vec2{r * std::cos(theta), r * std::sin(theta)});
    }
    acc += wt * jac * theta_sum * dtheta;
  }
  return acc;
}

/// ||phi_n||^2 = pi n^2 (plateau) + annulus contribution.
inline double phi_norm2(const RegularizedTestFunction& t, const AnnulusQuad& aq = {}) {
  const double plateau = M_PI * t.inner_radius() * t.inner_radius();
  return plateau + annulus_integral(
                       [&](Vec2 p) {
                         const double v = t.value(p);
                         return v * v;
                       },
                       t.n(), aq);
}

/// ||d_x phi_n||^2 by annulus quadrature (the derivative vanishes elsewhere).
inline double dx_phi_norm2(const RegularizedTestFunction& t, const AnnulusQuad& aq = {}) {
  return annulus_integral([&](Vec2 p) { const double v = t.dx(p); return v * v; }, t.n(), aq);
}

inline double dy_phi_norm2(const RegularizedTestFunction& t, const AnnulusQuad& aq = {}) {
  return annulus_integral([&](Vec2 p) { const double v = t.dy(p); return v * v; }, t.n(), aq);
}

inline double dxx_phi_norm2(const RegularizedTestFunction& t, const AnnulusQuad& aq = {}) {
  return annulus_integral([&](Vec2 p) { const double v = t.dxx(p); return v * v; }, t.n(), aq);
}

namespace detail {

/// Largest compact support radius among the potential components; throws
/// for non-compact (Gaussian) components, which never separate from the
/// cutoff transition region.
inline double potential_support_radius(const Potential& p) {
  double radius = 0.0;
  for (const ScalarField2D* f : {&p.v11, &p.v22, &p.v12}) {
    const auto r = f->compact_support_radius();
    if (!r)
      throw std::invalid_argument(
          "qform: potential must be compactly supported (Gaussian tails never "
          "separate from the cutoff transition annulus)");
    radius = std::max(radius, *r);
  }
  return radius;
}

}  // namespace detail

/// The quadratic form Q_eps[psi_n^+-] = ||H_eps psi||^2 - delta^2 ||psi||^2.
/// With the potential supported strictly inside the plateau (support radius
/// < n, enforced), the delta^2 terms cancel exactly and
///   Q = ||dxx phi||^2 + 2 delta ||dx phi||^2 + ||dy phi||^2
///       + eps^2 ||V_diag||^2 + eps^2 ||V12||^2 + 2 delta eps <Re V12>,
/// with V_diag = V11 for the plus spinor and V22 for the minus one.
/// Derivative terms are integrated over the annulus; potential terms over
/// the support region (closed forms for disks, quadrature otherwise).
inline double qform(const Model& model, const RegularizedTestFunction& t,
                    const QuadControls& q = {}, const AnnulusQuad& aq = {}) {
  const double support = detail::potential_support_radius(model.potential);
  if (!(support < t.n()))
    throw std::invalid_argument(
        "qform: potential support radius " + std::to_string(support) +
        " must lie strictly inside the plateau radius n = " + std::to_string(t.n()));
  const double delta = model.delta;
  const double eps = model.epsilon;
  const double transition = annulus_integral(
      [&](Vec2 p) {
        const double gx = t.dx(p), gy = t.dy(p), gxx = t.dxx(p);
        return gxx * gxx + 2.0 * delta * gx * gx + gy * gy;
      },
      t.n(), aq);
  const ScalarField2D& diag =
      t.sign() == SpinorSign::Plus ? model.potential.v11 : model.potential.v22;
  const double pot = eps * eps * detail::field_norm2(diag, q) +
                     eps * eps * detail::field_norm2(model.potential.v12, q) +
                     2.0 * delta * eps * detail::field_mean_re(model.potential.v12);
  return transition + pot;
}

struct QformRow {
  double n;
  double q;
  double i_val;
  double diff;       // q - i_val
  double bound;      // c / log n
  bool within_bound;
};

struct QformConvergence {
  std::vector<QformRow> rows;
  bool decreasing;  // diff monotonically decreasing along the grid
  bool pass;        // all rows within bound and decreasing
  double c;         // the cutoff constant used for the bound column
};

/// Convergence study Q_eps[psi_n] -> I_eps along an increasing n grid,
/// checked against the |Q - I| <= c / log n estimate.
inline QformConvergence qform_convergence(const Model& model, const CutoffProfile& profile,
                                          const std::vector<double>& n_grid,
                                          SpinorSign sign = SpinorSign::Plus,
                                          const QuadControls& q = {},
                                          const AnnulusQuad& aq = {}) {
  if (n_grid.empty()) throw std::invalid_argument("qform_convergence: empty n grid");
  const double support = detail::potential_support_radius(model.potential);
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    if (k > 0 && !(n_grid[k] > n_grid[k - 1]))
      throw std::invalid_argument("qform_convergence: n grid must be strictly increasing");
    if (!(n_grid[k] > std::max(M_E, support)))
      throw std::invalid_argument("qform_convergence: every n must exceed max(e, support radius)");
  }
  const PotentialMoments m = potential_moments(model.potential, q);
  const auto [i_plus, i_minus] = i_eps(m, model.delta, model.epsilon);
  const double i_val = sign == SpinorSign::Plus ? i_plus : i_minus;
  const CutoffConstants cc = cutoff_constants(profile, model.delta);

  QformConvergence result;
  result.c = cc.c;
  for (double n : n_grid) {
    RegularizedTestFunction t(profile, n, sign);
    const double qv = qform(model, t, q, aq);
    QformRow row;
    row.n = n;
    row.q = qv;
    row.i_val = i_val;
    row.diff = qv - i_val;
    row.bound = cc.c / std::log(n);
    row.within_bound = std::abs(row.diff) <= row.bound;
    result.rows.push_back(row);
  }
  result.decreasing = true;
  for (std::size_t k = 1; k < result.rows.size(); ++k)
    if (!(result.rows[k].diff < result.rows[k - 1].diff)) result.decreasing = false;
  result.pass = result.decreasing;
  for (const auto& row : result.rows) result.pass = result.pass && row.within_bound;
  return result;
}

/// CSV serialisation of a convergence table (columns n,Q,I,diff,bound,pass).
inline std::string qform_table_csv(const QformConvergence& table) {
  std::string out = "n,Q,I,diff,bound,pass\n";
  char buf[256];
  for (const auto& row : table.rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", row.n, row.q,
                  row.i_val, row.diff, row.bound, row.within_bound ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace semidirac
