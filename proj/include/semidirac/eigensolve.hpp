#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "semidirac/assembly.hpp"
#include "semidirac/model.hpp"
#include "semidirac/rbf.hpp"

namespace semidirac {

struct SolveDiagnostics {
  double d_condition = 0.0;    // lambda_max / lambda_min of the Gram block
  int truncation_rank = 0;     // D-directions kept (per 2N system)
  int full_rank = 0;           // 2N
};

struct RawEigenpair {
  double e;
  Eigen::VectorXcd x;  // D-normalized, length 2N
};

struct RawSolution {
  std::vector<RawEigenpair> pairs;  // ascending in e
  SolveDiagnostics diag;
};

/// Solves C x = E D x by whitening: the Gram block is eigendecomposed,
/// directions with eigenvalue below truncation_tol * max are discarded
/// (Gaussian Gram matrices are catastrophically ill-conditioned and the
/// numerical null space must be removed), and the problem is transformed to
/// a standard Hermitian one in the kept subspace.  Returned vectors satisfy
/// x^H D x = 1.
inline RawSolution solve_pencil(const BlockSystem& sys, double truncation_tol = 1e-10) {
  if (!(truncation_tol > 0.0 && truncation_tol < 1.0))
    throw std::invalid_argument("solve_pencil: truncation_tol must lie in (0, 1)");
  const int n = sys.n_nodes();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(sys.gram);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("solve_pencil: Gram eigendecomposition failed");
  const Eigen::VectorXd lam = ges.eigenvalues();  // ascending
  const double lam_max = lam(n - 1);
  if (!(lam_max > 0.0)) throw std::runtime_error("solve_pencil: D is numerically rank-zero");

  int first_kept = 0;
  while (first_kept < n && lam(first_kept) < truncation_tol * lam_max) ++first_kept;
  const int m = n - first_kept;
  if (m == 0) throw std::runtime_error("solve_pencil: D is numerically rank-zero");

  // Whitening map per block: W = U_kept diag(lambda^{-1/2}).
  Eigen::MatrixXd w(n, m);
  for (int c = 0; c < m; ++c)
    w.col(c) = ges.eigenvectors().col(first_kept + c) / std::sqrt(lam(first_kept + c));

  const Eigen::MatrixXcd wc = w.cast<cplx>();
  Eigen::MatrixXcd reduced(2 * m, 2 * m);
  reduced.topLeftCorner(m, m) = wc.adjoint() * sys.c_matrix.topLeftCorner(n, n) * wc;
  reduced.topRightCorner(m, m) = wc.adjoint() * sys.c_matrix.topRightCorner(n, n) * wc;
  reduced.bottomLeftCorner(m, m) = wc.adjoint() * sys.c_matrix.bottomLeftCorner(n, n) * wc;
  reduced.bottomRightCorner(m, m) = wc.adjoint() * sys.c_matrix.bottomRightCorner(n, n) * wc;
  reduced = (0.5 * (reduced + reduced.adjoint())).eval();  // symmetrize roundoff

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(reduced);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_pencil: Hermitian eigensolver did not converge");

  RawSolution out;
  out.diag.d_condition = lam_max / lam(0);
  out.diag.truncation_rank = 2 * m;
  out.diag.full_rank = 2 * n;
  out.pairs.reserve(2 * m);
  for (int k = 0; k < 2 * m; ++k) {
    RawEigenpair p;
    p.e = es.eigenvalues()(k);
    p.x.resize(2 * n);
    p.x.head(n) = wc * es.eigenvectors().col(k).head(m);
    p.x.tail(n) = wc * es.eigenvectors().col(k).tail(m);
    out.pairs.push_back(std::move(p));
  }
  return out;
}

enum class DiscardReason { OutsideGap, Residual, NullSpaceTruncation };

inline const char* discard_reason_name(DiscardReason r) {
  switch (r) {
    case DiscardReason::OutsideGap: return "outside gap";
    case DiscardReason::Residual: return "residual";
    case DiscardReason::NullSpaceTruncation: return "null-space truncation";
  }
  return "?";
}

struct GapEigenpair {
  double e;
  double residual;
  Eigen::VectorXcd coeffs;  // (a, b), length 2N
};

struct DiscardedEigenvalue {
  double e;
  DiscardReason reason;
};

struct SpectralResult {
  std::vector<GapEigenpair> gap_eigenvalues;  // ascending in e, ties by residual
  std::vector<DiscardedEigenvalue> discarded;
  SolveDiagnostics diagnostics;
  double delta = 0.0;
  double residual_tol = 0.0;
};

/// Relative residual ||C x - E D x|| / (||C x|| + |E| ||D x||).
inline double pencil_residual(const BlockSystem& sys, double e, const Eigen::VectorXcd& x) {
  const int n = sys.n_nodes();
  Eigen::VectorXcd cx = sys.c_matrix * x;
  Eigen::VectorXcd dx(2 * n);
  dx.head(n) = sys.gram * x.head(n);
  dx.tail(n) = sys.gram * x.tail(n);
  const double denom = cx.norm() + std::abs(e) * dx.norm();
  return denom > 0.0 ? (cx - e * dx).norm() / denom : 0.0;
}

/// Keeps eigenvalues strictly inside the gap (-delta, delta) whose relative
/// residual passes the spurious-mode filter; everything else is recorded
/// with its discard reason.  Residuals are only evaluated for gap candidates.
inline SpectralResult gap_filter(const RawSolution& raw, const BlockSystem& sys, double delta,
                                 double residual_tol = 1e-6) {
  if (!(delta > 0.0)) throw std::invalid_argument("gap_filter: delta must be > 0");
  SpectralResult result;
  result.diagnostics = raw.diag;
  result.delta = delta;
  result.residual_tol = residual_tol;
  for (const auto& p : raw.pairs) {
    if (!(p.e > -delta && p.e < delta)) {
      result.discarded.push_back({p.e, DiscardReason::OutsideGap});
      continue;
    }
    const double res = pencil_residual(sys, p.e, p.x);
    if (res > residual_tol) {
      result.discarded.push_back({p.e, DiscardReason::Residual});
      continue;
    }
    result.gap_eigenvalues.push_back({p.e, res, p.x});
  }
  std::sort(result.gap_eigenvalues.begin(), result.gap_eigenvalues.end(),
            [](const GapEigenpair& a, const GapEigenpair& b) {
              if (a.e != b.e) return a.e < b.e;
              return a.residual < b.residual;
            });
  return result;
}

/// Sampled eigenfunction magnitude |psi| = sqrt(|psi_1|^2 + |psi_2|^2) on a
/// uniform grid over the box; values stored row-major with x fastest.
struct FieldGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> abs_psi;  // size xs.size() * ys.size()

  double at(int ix, int iy) const { return abs_psi[iy * xs.size() + ix]; }
};

inline FieldGrid eigenfunction_magnitude(const Eigen::VectorXcd& coeffs, const RbfBasis& basis,
                                         const Rect& box, int nx, int ny) {
  const int n = basis.size();
  if (coeffs.size() != 2 * n)
    throw std::invalid_argument("eigenfunction_magnitude: coefficient vector must have length 2N");
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("eigenfunction_magnitude: grid must be at least 2x2");
  FieldGrid grid;
  grid.xs.resize(nx);
  grid.ys.resize(ny);
  for (int i = 0; i < nx; ++i) grid.xs[i] = box.xmin + box.width() * i / (nx - 1);
  for (int j = 0; j < ny; ++j) grid.ys[j] = box.ymin + box.height() * j / (ny - 1);
  grid.abs_psi.resize(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Vec2 p{grid.xs[i], grid.ys[j]};
      cplx a = 0.0, b = 0.0;
      for (int k = 0; k < n; ++k) {
        const double phi = basis.basis_value(k, p);
        a += coeffs(k) * phi;
        b += coeffs(n + k) * phi;
      }
      grid.abs_psi[static_cast<std::size_t>(j) * nx + i] =
          std::sqrt(std::norm(a) + std::norm(b));
    }
  }
  return grid;
}

}  // namespace semidirac
