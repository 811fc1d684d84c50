#ifndef PHTK_ANTILINEAR_HPP
#define PHTK_ANTILINEAR_HPP

#include "phtk/metrics.hpp"

namespace phtk {

/// Antilinear operator x ↦ M·conj(x), stored by its matrix M.
template <typename Real>
struct AntilinearOperator {
  CMatrix<Real> matrix;

  Eigen::Index dim() const { return matrix.rows(); }

  CVector<Real> apply(const CVector<Real>& x) const {
    if (x.size() != matrix.cols()) throw Error(ErrorCode::ShapeMismatch, "vector does not match operator");
    return matrix * x.conjugate();
  }

  /// Applies column by column.
  CMatrix<Real> apply(const CMatrix<Real>& x) const {
    if (x.rows() != matrix.cols()) throw Error(ErrorCode::ShapeMismatch, "block does not match operator");
    return matrix * x.conjugate();
  }
};

/// a∘b is linear with matrix Ma·conj(Mb).
template <typename Real>
CMatrix<Real> compose(const AntilinearOperator<Real>& a, const AntilinearOperator<Real>& b) {
  require_same_shape(a.matrix, b.matrix, "antilinear composition");
  return a.matrix * b.matrix.conjugate();
}

/// L∘a is antilinear with matrix L·Ma.
template <typename Real>
AntilinearOperator<Real> compose(const CMatrix<Real>& l, const AntilinearOperator<Real>& a) {
  require_same_shape(l, a.matrix, "linear-antilinear composition");
  return {l * a.matrix};
}

/// a∘L is antilinear with matrix Ma·conj(L).
template <typename Real>
AntilinearOperator<Real> compose(const AntilinearOperator<Real>& a, const CMatrix<Real>& l) {
  require_same_shape(a.matrix, l, "antilinear-linear composition");
  return {a.matrix * l.conjugate()};
}

/// a⁻¹ has matrix conj(Ma⁻¹).
template <typename Real>
AntilinearOperator<Real> inverse(const AntilinearOperator<Real>& a) {
  require_square(a.matrix, "antilinear operator");
  if (!(detail::condition_number(a.matrix) < Real(1) / (Real(100) * std::numeric_limits<Real>::epsilon())))
    throw Error(ErrorCode::NotInvertible, "antilinear operator is singular");
  return {a.matrix.partialPivLu().inverse().conjugate()};
}

/// τ₊ = Σ |φ⟩⋆⟨φ|, matrix ΦΦᵀ.
template <typename Real>
AntilinearOperator<Real> tau_plus(const BiorthonormalSystem<Real>& sys) {
  return {sys.phi * sys.phi.transpose()};
}

/// τ_σ = Σ σ|φ⟩⋆⟨φ| over real slots plus the unweighted pair terms.
template <typename Real>
AntilinearOperator<Real> tau_sigma(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  const RVector<Real> d = detail::column_signs(sys, sigma);
  return {sys.phi * d.template cast<Complex<Real>>().asDiagonal() * sys.phi.transpose()};
}

/// τ₊⁻¹ = Σ |ψ⟩⋆⟨ψ|, matrix ΨΨᵀ.
template <typename Real>
AntilinearOperator<Real> tau_plus_inverse(const BiorthonormalSystem<Real>& sys) {
  return {sys.psi * sys.psi.transpose()};
}

/// H†τ = τH for antilinear τ, i.e. H†M = M·conj(H).
template <typename Real>
Verdict<Real> is_anti_pseudo_hermitian(const CMatrix<Real>& h, const AntilinearOperator<Real>& tau, Real tol) {
  require_square(h, "H");
  require_same_shape(h, tau.matrix, "antilinear operator does not match H");
  const Real r = relative_residual(h.adjoint() * tau.matrix, tau.matrix * h.conjugate(),
                                   max_abs(h) * max_abs(tau.matrix));
  return {r <= tol, r};
}

/// x = U·diag(s)·Uᵀ with U unitary, s ≥ 0 descending.
template <typename Real>
struct Takagi {
  CMatrix<Real> u;
  RVector<Real> singular_values;
};

/// Takagi factorization of a complex symmetric matrix through the real
/// symmetric embedding [[Re x, Im x], [Im x, −Re x]]. Its spectrum is ±s; the
/// eigenvector (p; q) of +s gives the Takagi vector p + iq.
template <typename Real>
Takagi<Real> takagi(const CMatrix<Real>& x) {
  require_square(x, "Takagi input");
  const Eigen::Index d = x.rows();
  RMatrix<Real> b(2 * d, 2 * d);
  b.topLeftCorner(d, d) = x.real();
  b.topRightCorner(d, d) = x.imag();
  b.bottomLeftCorner(d, d) = x.imag();
  b.bottomRightCorner(d, d) = -x.real();
  b = ((b + b.transpose()) / Real(2)).eval();
  Eigen::SelfAdjointEigenSolver<RMatrix<Real>> es(b);

  Takagi<Real> out;
  out.u.resize(d, d);
  out.singular_values.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index src = 2 * d - 1 - k;
    out.singular_values(k) = std::max(Real(0), es.eigenvalues()(src));
    CVector<Real> v(d);
    for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex<Real>(es.eigenvectors()(i, src), es.eigenvectors()(d + i, src));
    v /= v.norm();
    // only a real sign keeps x·conj(u) = s·u; pick it from the largest component
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const Complex<Real> c = v(big);
    if (c.real() < Real(0) || (c.real() == Real(0) && c.imag() < Real(0))) v = -v;
    out.u.col(k) = v;
  }
  return out;
}

/// Root a = diag(s)^{1/2}·Uᵀ with aᵀa = x.
template <typename Real>
CMatrix<Real> takagi_root(const CMatrix<Real>& x, Real tol) {
  const Takagi<Real> t = takagi(x);
  const Real floor = tol * std::max(Real(1), max_abs(x));
  if (t.singular_values.size() > 0 && t.singular_values.minCoeff() < floor)
    throw Error(ErrorCode::NotInvertible, "Takagi factor is singular");
  return t.singular_values.cwiseSqrt().template cast<Complex<Real>>().asDiagonal() * t.u.transpose();
}

/// Recovers invertible A with [A, H] = 0 and τ = A†τ₊A.
///
/// In ψ coordinates the conjugated Gram matrix xⁿ = ψⁿᵀ·conj(M)·ψⁿ is block
/// diagonal over spectral groups and each block is complex symmetric; its
/// Takagi root aⁿ (aⁿᵀaⁿ = xⁿ) builds A = Ψ·blkdiag(aⁿ)·Φ†.
template <typename Real>
CMatrix<Real> decompose_tau(const BiorthonormalSystem<Real>& sys, const AntilinearOperator<Real>& tau, Real tol) {
  const auto& m = tau.matrix;
  require_same_shape(sys.hamiltonian, m, "antilinear operator does not match H");
  if (!is_anti_pseudo_hermitian(sys.hamiltonian, tau, tol))
    throw Error(ErrorCode::PreconditionUnmet, "H is not anti-pseudo-Hermitian with respect to the given operator");

  const Eigen::Index n = sys.dim();
  const CMatrix<Real> x = sys.psi.transpose() * m.conjugate() * sys.psi;
  const Real scale = std::max(Real(1), max_abs(x));
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) block_of[j] = sys.slots[j].group;
  if (detail::off_block_residual(x, block_of) > Real(10) * tol * scale)
    throw Error(ErrorCode::BlockNotSymmetric, "operator couples distinct eigenvalues");

  CMatrix<Real> coef = CMatrix<Real>::Zero(n, n);
  const auto groups = detail::group_columns(sys);
  for (Eigen::Index g = 0; g < sys.group_count(); ++g) {
    const auto& cols = groups[g];
    CMatrix<Real> blk = detail::gather(x, cols, cols);
    if (max_abs(CMatrix<Real>(blk - blk.transpose())) > Real(10) * tol * scale)
      throw Error(ErrorCode::BlockNotSymmetric, "group " + std::to_string(g));
    blk = ((blk + blk.transpose()) / Real(2)).eval();
    const CMatrix<Real> a = takagi_root(blk, tol);
    for (std::size_t r = 0; r < cols.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c) coef(cols[r], cols[c]) = a(r, c);
  }
  return sys.psi * coef * sys.phi.adjoint();
}

}  // namespace phtk

#endif  // PHTK_ANTILINEAR_HPP
