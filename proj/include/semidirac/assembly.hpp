#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "semidirac/model.hpp"
#include "semidirac/quadrature.hpp"
#include "semidirac/rbf.hpp"

namespace semidirac {

/// The eps-independent Galerkin integrals of one (potential, basis) pair.
/// Sweeps assemble these once and materialise the pencil per coupling value.
struct KernelMatrices {
  Eigen::MatrixXd dy;    // (phi_k, d_y phi_j), antisymmetric
  Eigen::MatrixXd dxdx;  // (d_x phi_k, d_x phi_j), symmetric
  Eigen::MatrixXd gram;  // (phi_k, phi_j), symmetric positive definite
  Eigen::MatrixXcd p11, p12, p21, p22;  // (phi_k, V_ab phi_j)
};

/// The discrete generalized eigenvalue system C x = E D x with
/// C = [[C11, C12], [C21, C22]] Hermitian and D = diag(G, G) built from the
/// Gram matrix G.
struct BlockSystem {
  Eigen::MatrixXcd c_matrix;  // 2N x 2N
  Eigen::MatrixXd gram;       // N x N diagonal block of D
  RbfBasis basis;
  double delta;
  double epsilon;
  double hermiticity_defect;  // max-norm, relative

  int n_nodes() const { return static_cast<int>(gram.rows()); }

  Eigen::MatrixXd d_matrix() const {
    const int n = n_nodes();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    d.topLeftCorner(n, n) = gram;
    d.bottomRightCorner(n, n) = gram;
    return d;
  }
};

/// Pointwise complex conjugate of a descriptor (conjugated amplitudes).
inline ScalarField2D conjugate_field(const ScalarField2D& f) {
  using Kind = ScalarField2D::Kind;
  switch (f.kind()) {
    case Kind::Zero:
      return ScalarField2D::zero();
    case Kind::DiskIndicator:
      return ScalarField2D::disk_indicator(f.center(), f.radius(), std::conj(f.amplitude()));
    case Kind::GaussianDecay:
      return ScalarField2D::gaussian_decay(f.center(), f.width(), std::conj(f.amplitude()));
    case Kind::Sum: {
      std::vector<ScalarField2D> terms;
      for (const auto& t : f.terms()) terms.push_back(conjugate_field(t));
      return ScalarField2D::sum(std::move(terms));
    }
  }
  return ScalarField2D::zero();
}

inline KernelMatrices assemble_kernels(const Potential& potential, const RbfBasis& basis,
                                       const QuadControls& q = {}) {
  const int n = basis.size();
  KernelMatrices k;
  k.dy.resize(n, n);
  k.dxdx.resize(n, n);
  k.gram.resize(n, n);
  k.p11.resize(n, n);
  k.p12.resize(n, n);
  k.p21.resize(n, n);
  k.p22.resize(n, n);

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double g = gram(basis, i, j);
      const double dym = dy_moment(basis, i, j);
      const double kin = kinetic_x(basis, i, j, 0.0);  // pure (d_x, d_x) part
      k.gram(i, j) = g;
      k.gram(j, i) = g;
      k.dy(i, j) = dym;
      k.dy(j, i) = -dym;
      k.dxdx(i, j) = kin;
      k.dxdx(j, i) = kin;
    }
  }

  const ScalarField2D v21 = conjugate_field(potential.v12);
  const PotentialMomentEvaluator e11(potential.v11, q);
  const PotentialMomentEvaluator e12(potential.v12, q);
  const PotentialMomentEvaluator e21(v21, q);
  const PotentialMomentEvaluator e22(potential.v22, q);
  // The (i, j) entries are independent pure kernel evaluations; the loop is
  // a parallel map over the upper triangle (each field moment is symmetric
  // in the node pair).
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const cplx m11 = e11.entry(basis, i, j);
      const cplx m12 = e12.entry(basis, i, j);
      const cplx m21 = e21.entry(basis, i, j);
      const cplx m22 = e22.entry(basis, i, j);
      k.p11(i, j) = m11;
      k.p11(j, i) = m11;
      k.p12(i, j) = m12;
      k.p12(j, i) = m12;
      k.p21(i, j) = m21;
      k.p21(j, i) = m21;
      k.p22(i, j) = m22;
      k.p22(j, i) = m22;
    }
  }
  return k;
}

/// Builds the pencil for one coupling value from cached kernels:
///   C11 = -i DY + eps P11,          C12 = (DXDX + delta G) + eps P12,
///   C21 = (DXDX + delta G) + eps P21,   C22 = +i DY + eps P22.
/// C21 is assembled independently from the conjugated field and checked
/// against C12^H before being replaced by it exactly.
inline BlockSystem materialize(const KernelMatrices& k, const RbfBasis& basis, double delta,
                               double eps, double hermiticity_tol = 1e-12) {
  const int n = static_cast<int>(k.gram.rows());
  const cplx iu(0.0, 1.0);
  Eigen::MatrixXcd c(2 * n, 2 * n);
  const Eigen::MatrixXcd kin = (k.dxdx + delta * k.gram).cast<cplx>();
  c.topLeftCorner(n, n) = -iu * k.dy.cast<cplx>() + eps * k.p11;
  c.topRightCorner(n, n) = kin + eps * k.p12;
  c.bottomLeftCorner(n, n) = kin + eps * k.p21;
  c.bottomRightCorner(n, n) = iu * k.dy.cast<cplx>() + eps * k.p22;

  const double cmax = c.cwiseAbs().maxCoeff();
  const double conj_defect =
      (c.bottomLeftCorner(n, n) - c.topRightCorner(n, n).adjoint()).cwiseAbs().maxCoeff();
  if (cmax > 0.0 && conj_defect > hermiticity_tol * cmax)
    throw std::runtime_error(
        "materialize: C21 disagrees with C12^H beyond tolerance (kernel sign or "
        "conjugation bug); defect " +
        std::to_string(conj_defect / cmax));
  c.bottomLeftCorner(n, n) = c.topRightCorner(n, n).adjoint();

  const double herm_defect = cmax > 0.0 ? (c - c.adjoint()).cwiseAbs().maxCoeff() / cmax : 0.0;
  if (herm_defect > hermiticity_tol)
    throw std::runtime_error("materialize: assembled C is not Hermitian; relative defect " +
                             std::to_string(herm_defect));

  return {std::move(c), k.gram, basis, delta, eps, herm_defect};
}

/// One-shot assembly for a single model.
inline BlockSystem assemble(const Model& model, const RbfBasis& basis,
                            const QuadControls& q = {}) {
  const ValidationReport v = validate_potential(model.potential);
  if (!v.passed)
    throw std::invalid_argument("assemble: invalid potential (" + v.first_failure + ")");
  return materialize(assemble_kernels(model.potential, basis, q), basis, model.delta,
                     model.epsilon);
}

}  // namespace semidirac
