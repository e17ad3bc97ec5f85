#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semidirac/field.hpp"
#include "semidirac/geometry.hpp"
#include "semidirac/quadrature.hpp"

namespace semidirac {

enum class NodeLayout { Halton, Grid };

/// Radical-inverse (van der Corput) value of index k in the given base;
/// the Halton sequence starts at k = 1.
inline double radical_inverse(int k, int base) {
  double inv = 1.0 / base, result = 0.0, f = inv;
  while (k > 0) {
    result += f * (k % base);
    k /= base;
    f *= inv;
  }
  return result;
}

/// Deterministic scattered-node generation inside a box: a (2,3)-Halton
/// sequence mapped affinely into the box, or a near-square cell-centered
/// lattice truncated to the requested count.
inline std::vector<Vec2> generate_nodes(const Rect& box, int count, NodeLayout layout) {
  if (count < 1) throw std::invalid_argument("generate_nodes: count must be >= 1");
  std::vector<Vec2> nodes;
  nodes.reserve(count);
  if (layout == NodeLayout::Halton) {
    for (int k = 1; k <= count; ++k)
      nodes.push_back({box.xmin + radical_inverse(k, 2) * box.width(),
                       box.ymin + radical_inverse(k, 3) * box.height()});
  } else {
    const double aspect = box.width() / box.height();
    int nx = std::max(1, static_cast<int>(std::ceil(std::sqrt(count * aspect))));
    int ny = std::max(1, static_cast<int>(std::ceil(static_cast<double>(count) / nx)));
    for (int iy = 0; iy < ny && static_cast<int>(nodes.size()) < count; ++iy)
      for (int ix = 0; ix < nx && static_cast<int>(nodes.size()) < count; ++ix)
        nodes.push_back({box.xmin + (ix + 0.5) * box.width() / nx,
                         box.ymin + (iy + 0.5) * box.height() / ny});
  }
  return nodes;
}

/// Fill distance: the largest distance from a point of the box to its
/// nearest node, estimated on a dense deterministic lattice.
inline double fill_distance(const std::vector<Vec2>& nodes, const Rect& box,
                            int samples_per_axis = 128) {
  if (nodes.empty()) throw std::invalid_argument("fill_distance: empty node set");
  double h = 0.0;
  for (int iy = 0; iy <= samples_per_axis; ++iy) {
    for (int ix = 0; ix <= samples_per_axis; ++ix) {
      const Vec2 p{box.xmin + box.width() * ix / samples_per_axis,
                   box.ymin + box.height() * iy / samples_per_axis};
      double nearest = std::numeric_limits<double>::infinity();
      for (const Vec2& node : nodes) nearest = std::min(nearest, dist(p, node));
      h = std::max(h, nearest);
    }
  }
  return h;
}

/// Gaussian radial basis phi_j(r) = exp(-s^2 |r - r_j|^2) on scattered nodes.
struct RbfBasis {
  std::vector<Vec2> nodes;
  double shape;  // s
  Rect box;

  int size() const { return static_cast<int>(nodes.size()); }

  double basis_value(int j, Vec2 p) const {
    const double s2 = shape * shape;
    return std::exp(-s2 * (p - nodes[j]).norm2());
  }
};

/// Builds a basis with the default shape s = 0.8 / fill distance unless
/// overridden.  Verifies the nodes are pairwise distinct.
inline RbfBasis make_basis(const Rect& box, int count, NodeLayout layout,
                           std::optional<double> shape_override = std::nullopt) {
  RbfBasis basis{generate_nodes(box, count, layout), 0.0, box};
  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < basis.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < basis.nodes.size(); ++j)
      min_sep = std::min(min_sep, dist(basis.nodes[i], basis.nodes[j]));
  if (basis.nodes.size() > 1 && !(min_sep > 0.0))
    throw std::invalid_argument("make_basis: nodes are not pairwise distinct");
  if (shape_override) {
    basis.shape = *shape_override;
  } else {
    basis.shape = 0.8 / fill_distance(basis.nodes, box);
  }
  if (!(basis.shape > 0.0)) throw std::invalid_argument("make_basis: shape must be > 0");
  return basis;
}

// ---------------------------------------------------------------------------
// Closed-form kernel integrals.  With phi_i(r) = exp(-s^2 |r - r_i|^2),
// the product phi_i phi_j = exp(-s^2 d^2 / 2) exp(-2 s^2 |r - m|^2) where
// m is the node midpoint and d the node distance; every integral below
// reduces to Gaussian moments about m.  Each closed form is unit-tested
// against the tensor quadrature oracle before assembly relies on it.
// ---------------------------------------------------------------------------

namespace detail {
inline double pair_prefactor(const RbfBasis& b, int i, int j) {
  const double s2 = b.shape * b.shape;
  return std::exp(-0.5 * s2 * (b.nodes[i] - b.nodes[j]).norm2());
}
}  // namespace detail

/// (phi_i, phi_j) = pi/(2 s^2) exp(-s^2 d^2 / 2).
inline double gram(const RbfBasis& b, int i, int j) {
  const double s2 = b.shape * b.shape;
  return M_PI / (2.0 * s2) * detail::pair_prefactor(b, i, j);
}

/// (phi_i, d_y phi_j) = -(pi/2) (y_i - y_j) exp(-s^2 d^2 / 2).
/// Antisymmetric; the -i factor of the Hamiltonian is applied at assembly.
inline double dy_moment(const RbfBasis& b, int i, int j) {
  return -0.5 * M_PI * (b.nodes[i].y - b.nodes[j].y) * detail::pair_prefactor(b, i, j);
}

/// (phi_i, (-d_x^2 + delta) phi_j)
///   = [ (pi/2)(1 - s^2 dx^2) + delta pi/(2 s^2) ] exp(-s^2 d^2 / 2),
/// obtained by parts from (d_x phi_i, d_x phi_j) + delta (phi_i, phi_j).
inline double kinetic_x(const RbfBasis& b, int i, int j, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("kinetic_x: delta must be >= 0");
  const double s2 = b.shape * b.shape;
  const double dx = b.nodes[i].x - b.nodes[j].x;
  return (0.5 * M_PI * (1.0 - s2 * dx * dx) + delta * M_PI / (2.0 * s2)) *
         detail::pair_prefactor(b, i, j);
}

/// Evaluates potential-weighted entries (phi_i, V phi_j) for one coefficient
/// field.  Gaussian leaves have closed forms; disk leaves are integrated
/// with a polar rule aligned to the disk, built once and shared across all
/// node pairs.  Pairs whose Gaussian product is below 1e-16 of its peak on
/// the field support are truncated to zero.
class PotentialMomentEvaluator {
 public:
  PotentialMomentEvaluator(const ScalarField2D& field, const QuadControls& q)
      : q_(q), leaves_(field.leaves()) {
    for (const auto& leaf : leaves_) {
      if (leaf.kind() == ScalarField2D::Kind::DiskIndicator) {
        rules_.push_back(QuadratureRule::polar_disk(leaf.center(), leaf.radius(),
                                                    q.radial_order, q.angular_count));
        fine_rules_.push_back(QuadratureRule::polar_disk(leaf.center(), leaf.radius(),
                                                         2 * q.radial_order,
                                                         2 * q.angular_count));
      } else {
        rules_.push_back(QuadratureRule::tensor_rect(Rect(-1, 1, -1, 1), 1));  // placeholder
        fine_rules_.push_back(QuadratureRule::tensor_rect(Rect(-1, 1, -1, 1), 1));
      }
    }
  }

  cplx entry(const RbfBasis& b, int i, int j, bool checked = false) const {
    const double s2 = b.shape * b.shape;
    const Vec2 m = 0.5 * (b.nodes[i] + b.nodes[j]);
    const double pref = detail::pair_prefactor(b, i, j);
    cplx acc = 0.0;
    for (std::size_t l = 0; l < leaves_.size(); ++l) {
      const ScalarField2D& leaf = leaves_[l];
      switch (leaf.kind()) {
        case ScalarField2D::Kind::Zero:
          break;
        case ScalarField2D::Kind::GaussianDecay: {
          const double alpha = 1.0 / (leaf.width() * leaf.width());
          const double beta = 2.0 * s2;
          const double d2 = (leaf.center() - m).norm2();
          acc += leaf.amplitude() * (M_PI / (alpha + beta)) *
                 std::exp(-alpha * beta / (alpha + beta) * d2);
          break;
        }
        case ScalarField2D::Kind::DiskIndicator: {
          const double gap = std::max(0.0, dist(m, leaf.center()) - leaf.radius());
          if (pref * std::exp(-2.0 * s2 * gap * gap) < 1e-16) break;  // truncation
          // Product effectively contained in the disk: the full-plane
          // Gaussian integral is exact to the same 1e-16 truncation level.
          const double reff = std::sqrt(-std::log(1e-16) / (2.0 * s2));
          if (dist(m, leaf.center()) + reff <= leaf.radius()) {
            acc += leaf.amplitude() * (M_PI / (2.0 * s2));
            break;
          }
          auto integrand = [&](Vec2 p) -> cplx { return std::exp(-2.0 * s2 * (p - m).norm2()); };
          const cplx val = integrate(integrand, rules_[l]);
          if (checked) {
            const cplx fine = integrate(integrand, fine_rules_[l]);
            if (std::abs(fine - val) > q_.tolerance * std::max(1.0, std::abs(fine)))
              throw QuadratureError("potential moment quadrature did not converge",
                                    std::abs(fine - val));
          }
          acc += leaf.amplitude() * val;
          break;
        }
        case ScalarField2D::Kind::Sum:
          break;  // leaves() never yields Sum nodes
      }
    }
    return pref * acc;
  }

 private:
  QuadControls q_;
  std::vector<ScalarField2D> leaves_;
  std::vector<QuadratureRule> rules_;
  std::vector<QuadratureRule> fine_rules_;
};

/// One-off entry (phi_i, V phi_j); prefer PotentialMomentEvaluator when
/// filling whole matrices.
inline cplx potential_moment(const RbfBasis& b, int i, int j, const ScalarField2D& field,
                             const QuadControls& q = {}, bool checked = false) {
  return PotentialMomentEvaluator(field, q).entry(b, i, j, checked);
}

}  // namespace semidirac
