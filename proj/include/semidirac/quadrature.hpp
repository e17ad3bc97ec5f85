#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semidirac/geometry.hpp"

namespace semidirac {

using cplx = std::complex<double>;

/// Gauss-Legendre abscissas and weights on [-1,1], computed by Newton
/// iteration on the Legendre recurrence.  No tables, deterministic.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  const int n = order;
  std::vector<double> x(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi-style initial guess for the i-th root.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[half - 1] = 0.0;
  return {x, w};
}

/// One weighted node of a 2D rule.
struct QuadratureNode {
  Vec2 p;
  double w;
};

/// Deterministic 2D integration rule: either a tensor Gauss-Legendre grid on
/// a rectangle or a polar (Gauss-Legendre radial x uniform angular) rule on a
/// disk.  Nodes are precomputed at construction; rules are immutable.
class QuadratureRule {
 public:
  enum class Kind { TensorRect, PolarDisk };

  static QuadratureRule tensor_rect(const Rect& rect, int order) {
    if (order < 1) throw std::invalid_argument("tensor_rect: order must be >= 1");
    QuadratureRule rule(Kind::TensorRect, rect.area());
    auto [x, w] = gauss_legendre(order);
    rule.nodes_.reserve(static_cast<std::size_t>(order) * order);
    const double cx = 0.5 * (rect.xmin + rect.xmax), hx = 0.5 * rect.width();
    const double cy = 0.5 * (rect.ymin + rect.ymax), hy = 0.5 * rect.height();
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j)
        rule.nodes_.push_back({{cx + hx * x[i], cy + hy * x[j]}, hx * hy * w[i] * w[j]});
    return rule;
  }

  static QuadratureRule polar_disk(Vec2 center, double radius, int radial_order,
                                   int angular_count) {
    if (radius <= 0.0) throw std::invalid_argument("polar_disk: radius must be > 0");
    if (radial_order < 1 || angular_count < 1)
      throw std::invalid_argument("polar_disk: orders must be >= 1");
    QuadratureRule rule(Kind::PolarDisk, M_PI * radius * radius);
    auto [x, w] = gauss_legendre(radial_order);
    rule.nodes_.reserve(static_cast<std::size_t>(radial_order) * angular_count);
    const double dtheta = 2.0 * M_PI / angular_count;
    for (int i = 0; i < radial_order; ++i) {
      const double r = 0.5 * radius * (x[i] + 1.0);
      const double wr = 0.5 * radius * w[i] * r;  // r dr Jacobian
      for (int j = 0; j < angular_count; ++j) {
        const double theta = dtheta * (j + 0.5);
        rule.nodes_.push_back({{center.x + r * std::cos(theta), center.y + r * std::sin(theta)},
                               wr * dtheta});
      }
    }
    return rule;
  }

  Kind kind() const { return kind_; }
  const std::vector<QuadratureNode>& nodes() const { return nodes_; }
  double area() const { return area_; }

 private:
  QuadratureRule(Kind kind, double area) : kind_(kind), area_(area) {}
  Kind kind_;
  double area_;
  std::vector<QuadratureNode> nodes_;
};

/// Weighted sum of f over the rule's nodes, in fixed node order.
/// Throws if f is non-finite at a node, identifying the node.
template <typename F>
cplx integrate(F&& f, const QuadratureRule& rule) {
  cplx acc = 0.0;
  std::size_t idx = 0;
  for (const auto& node : rule.nodes()) {
    const cplx v = f(node.p);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::runtime_error("integrate: non-finite integrand at node " +
                               std::to_string(idx) + " (" + std::to_string(node.p.x) +
                               ", " + std::to_string(node.p.y) + ")");
    acc += node.w * v;
    ++idx;
  }
  return acc;
}

/// Value from the fine rule together with a coarse-vs-fine error estimate.
struct AdaptiveResult {
  cplx value;
  double error_estimate;

  bool converged(double tol) const { return error_estimate <= tol; }
};

/// Evaluates f on both rules; rule_high is expected to refine rule_low on the
/// same region.  The difference of the two values serves as the error
/// estimate for the fine value.
template <typename F>
AdaptiveResult adaptive_tolerance_check(F&& f, const QuadratureRule& rule_low,
                                        const QuadratureRule& rule_high) {
  const cplx lo = integrate(f, rule_low);
  const cplx hi = integrate(f, rule_high);
  return {hi, std::abs(hi - lo)};
}

/// Exception raised when a coarse/fine pair disagrees beyond tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : std::runtime_error(what + " (error estimate " + std::to_string(estimate) + ")"),
        error_estimate(estimate) {}
  double error_estimate;
};

/// integrate with a convergence check; throws QuadratureError on failure.
template <typename F>
cplx integrate_checked(F&& f, const QuadratureRule& rule_low,
                       const QuadratureRule& rule_high, double tol,
                       const std::string& context = "integral") {
  const AdaptiveResult r = adaptive_tolerance_check(f, rule_low, rule_high);
  const double scale = std::max(1.0, std::abs(r.value));
  if (r.error_estimate > tol * scale)
    throw QuadratureError("quadrature did not converge for " + context, r.error_estimate);
  return r.value;
}

/// Quadrature orders shared by the assembly and bounds integrals.
struct QuadControls {
  int radial_order = 24;
  int angular_count = 48;
  int tensor_order = 32;
  double tolerance = 1e-8;  // relative, for coarse/fine checks
};

}  // namespace semidirac
