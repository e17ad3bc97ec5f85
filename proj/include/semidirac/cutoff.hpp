#pragma once

#include <cmath>
#include <stdexcept>

namespace semidirac {

/// Smooth transition profile xi on [0,1] with xi = 0 on [0, margin] and
/// xi = 1 on [1 - margin, 1].  The default is a degree-5 smoothstep rescaled
/// to the interior interval; it is C^2 with first and second derivatives
/// vanishing on the flat margins, which is all the regularisation estimates
/// use.  Sup norms of xi' and xi'' are computed by grid maximization.
class CutoffProfile {
 public:
  explicit CutoffProfile(double margin = 0.1, int sup_grid = 100000)
      : margin_(margin) {
    if (!(margin > 0.0) || !(margin < 0.5))
      throw std::invalid_argument("CutoffProfile: margin must lie in (0, 0.5)");
    sup1_ = max_abs_on_grid(&CutoffProfile::d1, sup_grid);
    sup2_ = max_abs_on_grid(&CutoffProfile::d2, sup_grid);
  }

  double margin() const { return margin_; }
  double sup1() const { return sup1_; }  // ||xi'||_inf
  double sup2() const { return sup2_; }  // ||xi''||_inf

  double value(double t) const {
    const double s = rescale(t);
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
  }

  double d1(double t) const {
    const double s = rescale(t);
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 30.0 * s * s * (1.0 - s) * (1.0 - s) / span();
  }

  double d2(double t) const {
    const double s = rescale(t);
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / (span() * span());
  }

  /// Max of |f| over a uniform grid on [0,1]; exposed so callers can
  /// cross-check the stored sup norms at other grid resolutions.
  double sup_on_grid(int points, bool second) const {
    return max_abs_on_grid(second ? &CutoffProfile::d2 : &CutoffProfile::d1, points);
  }

 private:
  double span() const { return 1.0 - 2.0 * margin_; }
  double rescale(double t) const { return (t - margin_) / span(); }

  double max_abs_on_grid(double (CutoffProfile::*f)(double) const, int points) const {
    double m = 0.0;
    for (int i = 0; i <= points; ++i) {
      const double t = static_cast<double>(i) / points;
      m = std::max(m, std::abs((this->*f)(t)));
    }
    return m;
  }

  double margin_;
  double sup1_;
  double sup2_;
};

/// The constants of the cutoff-derivative estimates:
///   c1 = pi ||xi'||^2,
///   c2 = (3 pi ||xi''||^2 / 4 + pi ||xi'||^2) / e^2   (valid for n >= e),
///   c  = c1 + 2 delta c1 + c2.
struct CutoffConstants {
  double c1;
  double c2;
  double c;
  double sup1;
  double sup2;
  double delta;
};

inline CutoffConstants cutoff_constants_from_sups(double sup1, double sup2, double delta) {
  const double c1 = M_PI * sup1 * sup1;
  const double c2 = (0.75 * M_PI * sup2 * sup2 + M_PI * sup1 * sup1) / (M_E * M_E);
  return {c1, c2, c1 + 2.0 * delta * c1 + c2, sup1, sup2, delta};
}

inline CutoffConstants cutoff_constants(const CutoffProfile& profile, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("cutoff_constants: delta must be > 0");
  return cutoff_constants_from_sups(profile.sup1(), profile.sup2(), delta);
}

}  // namespace semidirac
