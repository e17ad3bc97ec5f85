#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semidirac/geometry.hpp"

namespace semidirac {

using cplx = std::complex<double>;

/// Closed-form descriptor of a bounded coefficient function on the plane:
/// a disk indicator, a Gaussian bump, zero, or a finite sum of those.
/// Descriptors (rather than sampled grids) keep exact support information
/// and give every downstream integral a well-defined quadrature region.
class ScalarField2D {
 public:
  enum class Kind { Zero, DiskIndicator, GaussianDecay, Sum };

  static ScalarField2D zero() { return ScalarField2D(Kind::Zero); }

  /// amplitude * indicator of the disk |r - center| <= radius.
  static ScalarField2D disk_indicator(Vec2 center, double radius, cplx amplitude) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk_indicator: radius must be > 0");
    ScalarField2D f(Kind::DiskIndicator);
    f.center_ = center;
    f.scale_ = radius;
    f.amplitude_ = amplitude;
    return f;
  }

  /// amplitude * exp(-|r - center|^2 / width^2).
  static ScalarField2D gaussian_decay(Vec2 center, double width, cplx amplitude) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_decay: width must be > 0");
    ScalarField2D f(Kind::GaussianDecay);
    f.center_ = center;
    f.scale_ = width;
    f.amplitude_ = amplitude;
    return f;
  }

  static ScalarField2D sum(std::vector<ScalarField2D> terms) {
    ScalarField2D f(Kind::Sum);
    f.terms_ = std::move(terms);
    return f;
  }

  Kind kind() const { return kind_; }
  Vec2 center() const { return center_; }
  double radius() const { return scale_; }  // DiskIndicator
  double width() const { return scale_; }   // GaussianDecay
  cplx amplitude() const { return amplitude_; }
  const std::vector<ScalarField2D>& terms() const { return terms_; }

  cplx eval(Vec2 p) const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::DiskIndicator:
        return dist(p, center_) <= scale_ ? amplitude_ : cplx(0.0);
      case Kind::GaussianDecay:
        return amplitude_ * std::exp(-(p - center_).norm2() / (scale_ * scale_));
      case Kind::Sum: {
        cplx acc = 0.0;
        for (const auto& t : terms_) acc += t.eval(p);
        return acc;
      }
    }
    return 0.0;
  }

  /// Sum of |amplitude| over leaves; a pointwise bound on |eval|.
  double amplitude_bound() const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::DiskIndicator:
      case Kind::GaussianDecay:
        return std::abs(amplitude_);
      case Kind::Sum: {
        double acc = 0.0;
        for (const auto& t : terms_) acc += t.amplitude_bound();
        return acc;
      }
    }
    return 0.0;
  }

  /// True when the value has zero imaginary part everywhere.
  bool is_real() const {
    switch (kind_) {
      case Kind::Zero:
        return true;
      case Kind::DiskIndicator:
      case Kind::GaussianDecay:
        return amplitude_.imag() == 0.0;
      case Kind::Sum:
        for (const auto& t : terms_)
          if (!t.is_real()) return false;
        return true;
    }
    return true;
  }

  /// Radius R (about the origin) with eval == 0 for |r| > R, when the
  /// descriptor has compact support; nullopt for Gaussian tails.
  std::optional<double> compact_support_radius() const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::DiskIndicator:
        return center_.norm() + scale_;
      case Kind::GaussianDecay:
        return amplitude_ == cplx(0.0) ? std::optional<double>(0.0) : std::nullopt;
      case Kind::Sum: {
        double r = 0.0;
        for (const auto& t : terms_) {
          auto rt = t.compact_support_radius();
          if (!rt) return std::nullopt;
          r = std::max(r, *rt);
        }
        return r;
      }
    }
    return std::nullopt;
  }

  /// True when the descriptor is identically zero.
  bool is_identically_zero() const {
    switch (kind_) {
      case Kind::Zero:
        return true;
      case Kind::DiskIndicator:
      case Kind::GaussianDecay:
        return amplitude_ == cplx(0.0);
      case Kind::Sum:
        for (const auto& t : terms_)
          if (!t.is_identically_zero()) return false;
        return true;
    }
    return true;
  }

  /// Flattened leaf list (Sum nodes expanded, Zero leaves kept).
  std::vector<ScalarField2D> leaves() const {
    std::vector<ScalarField2D> out;
    collect_leaves(out);
    return out;
  }

  /// Radius about `center` beyond which |eval| < cut * amplitude_bound().
  /// Used to size quadrature regions for Gaussian tails.
  double effective_radius(double cut = 1e-18) const {
    switch (kind_) {
      case Kind::Zero:
        return 0.0;
      case Kind::DiskIndicator:
        return scale_;
      case Kind::GaussianDecay:
        return scale_ * std::sqrt(-std::log(cut));
      case Kind::Sum: {
        double r = 0.0;
        for (const auto& t : terms_)
          r = std::max(r, t.center().norm() + t.effective_radius(cut));
        return r;
      }
    }
    return 0.0;
  }

 private:
  explicit ScalarField2D(Kind kind) : kind_(kind) {}

  void collect_leaves(std::vector<ScalarField2D>& out) const {
    if (kind_ == Kind::Sum) {
      for (const auto& t : terms_) t.collect_leaves(out);
    } else {
      out.push_back(*this);
    }
  }

  Kind kind_;
  Vec2 center_{};
  double scale_ = 0.0;  // radius or width
  cplx amplitude_{};
  std::vector<ScalarField2D> terms_;
};

}  // namespace semidirac
