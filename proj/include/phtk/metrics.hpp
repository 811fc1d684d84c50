#ifndef PHTK_METRICS_HPP
#define PHTK_METRICS_HPP

#include "phtk/spectra.hpp"

#include <string>
#include <vector>

namespace phtk {

/// Outcome of a residual-based predicate.
template <typename Real>
struct Verdict {
  bool holds = false;
  Real residual = Real(0);

  explicit operator bool() const { return holds; }
};

/// One sign σₙᵃ = ±1 per real-eigenvalue slot, in column order of the system.
/// Conjugate-pair slots carry no sign.
struct SignSequence {
  std::vector<int> signs;

  std::size_t size() const { return signs.size(); }
  bool operator==(const SignSequence&) const = default;
};

template <typename Real>
SignSequence all_plus(const BiorthonormalSystem<Real>& sys) {
  return SignSequence{std::vector<int>(sys.real_slots().size(), 1)};
}

/// σₙ = (−1)ⁿ with n the group index of the slot.
template <typename Real>
SignSequence alternating(const BiorthonormalSystem<Real>& sys) {
  SignSequence s;
  for (auto j : sys.real_slots()) s.signs.push_back(sys.slots[j].group % 2 == 0 ? 1 : -1);
  return s;
}

enum class MetricKind { Positive, Indefinite, General };

inline const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Positive: return "positive";
    case MetricKind::Indefinite: return "indefinite";
    case MetricKind::General: return "general";
  }
  return "?";
}

/// Hermitian invertible linear operator η with H† = ηHη⁻¹.
template <typename Real>
struct MetricOperator {
  CMatrix<Real> matrix;
  MetricKind kind = MetricKind::General;
};

namespace detail {

/// Per-column sign: σ on real slots, +1 on pair slots.
template <typename Real>
RVector<Real> column_signs(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  const auto real = sys.real_slots();
  if (sigma.size() != real.size())
    throw Error(ErrorCode::SignDomainMismatch, "expected " + std::to_string(real.size()) + " signs, got " +
                                                   std::to_string(sigma.size()));
  RVector<Real> d = RVector<Real>::Ones(sys.dim());
  for (std::size_t k = 0; k < real.size(); ++k) {
    const int s = sigma.signs[k];
    if (s != 1 && s != -1) throw Error(ErrorCode::SignDomainMismatch, "signs must be +1 or -1");
    d(real[k]) = Real(s);
  }
  return d;
}

/// Signed permutation W with W(j,j) = σⱼ on real slots and W(j,partner) = 1
/// on pair slots. η_σ = ΦWΦ†, η_σ⁻¹ = ΨWΨ†, 𝒳_σ = ΨWΦᵀ.
template <typename Real>
RMatrix<Real> pair_weights(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  require_paired(sys);
  const RVector<Real> d = column_signs(sys, sigma);
  RMatrix<Real> w = RMatrix<Real>::Zero(sys.dim(), sys.dim());
  for (Eigen::Index j = 0; j < sys.dim(); ++j) {
    if (sys.slots[j].cls == SlotClass::Real)
      w(j, j) = d(j);
    else
      w(j, sys.slots[j].partner) = Real(1);
  }
  return w;
}

/// Columns of the system grouped by spectral label.
template <typename Real>
std::vector<std::vector<Eigen::Index>> group_columns(const BiorthonormalSystem<Real>& sys) {
  std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(sys.group_count()));
  for (Eigen::Index j = 0; j < sys.dim(); ++j) out[sys.slots[j].group].push_back(j);
  return out;
}

template <typename Real>
CMatrix<Real> gather(const CMatrix<Real>& m, const std::vector<Eigen::Index>& rows,
                     const std::vector<Eigen::Index>& cols) {
  CMatrix<Real> out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

/// Zeroes the entries of `m` that couple different blocks; returns the
/// largest discarded modulus.
template <typename Real>
Real off_block_residual(const CMatrix<Real>& m, const std::vector<Eigen::Index>& block_of) {
  Real worst(0);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (block_of[i] != block_of[j]) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

}  // namespace detail

/// η_σ: σ-weighted φφ† on real slots plus φ₊φ₋† + φ₋φ₊† on every pair.
template <typename Real>
MetricOperator<Real> eta_sigma(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  const RMatrix<Real> w = detail::pair_weights(sys, sigma);
  MetricOperator<Real> eta;
  eta.matrix = sys.phi * w.template cast<Complex<Real>>() * sys.phi.adjoint();
  const bool all_real = sys.real_slots().size() == static_cast<std::size_t>(sys.dim());
  const bool all_plus = std::all_of(sigma.signs.begin(), sigma.signs.end(), [](int s) { return s == 1; });
  eta.kind = (all_real && all_plus) ? MetricKind::Positive : MetricKind::Indefinite;
  return eta;
}

/// η₊ = Σ φφ† for a real spectrum; the pair-crossed analogue otherwise.
template <typename Real>
MetricOperator<Real> eta_plus(const BiorthonormalSystem<Real>& sys) {
  return eta_sigma(sys, all_plus(sys));
}

/// η_σ⁻¹ assembled from ψ outer products, no matrix inversion.
template <typename Real>
MetricOperator<Real> eta_sigma_inverse(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  const RMatrix<Real> w = detail::pair_weights(sys, sigma);
  MetricOperator<Real> inv;
  inv.matrix = sys.psi * w.template cast<Complex<Real>>() * sys.psi.adjoint();
  inv.kind = eta_sigma(sys, sigma).kind;
  return inv;
}

/// H† η = η H in commutator form, normalized by max(1, ‖H‖·‖η‖).
template <typename Real>
Verdict<Real> is_pseudo_hermitian(const CMatrix<Real>& h, const CMatrix<Real>& eta, Real tol) {
  require_square(h, "H");
  require_same_shape(h, eta, "metric does not match H");
  const Real r = relative_residual(h.adjoint() * eta, eta * h, max_abs(h) * max_abs(eta));
  return {r <= tol, r};
}

template <typename Real>
Verdict<Real> is_pseudo_hermitian(const CMatrix<Real>& h, const MetricOperator<Real>& eta, Real tol) {
  return is_pseudo_hermitian(h, eta.matrix, tol);
}

/// ⟨x|ηy⟩.
template <typename Real>
Complex<Real> pseudo_inner(const CVector<Real>& x, const CVector<Real>& y, const CMatrix<Real>& eta) {
  if (x.size() != y.size() || eta.rows() != x.size() || eta.cols() != y.size())
    throw Error(ErrorCode::ShapeMismatch, "pseudo_inner dimensions differ");
  return x.dot(eta * y);
}

/// Smallest eigenvalue of the Hermitian part of m.
template <typename Real>
Real min_hermitian_eigenvalue(const CMatrix<Real>& m) {
  if (m.size() == 0) return Real(0);
  const CMatrix<Real> herm = (m + m.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Factorization η = A†η_σA with A an invertible symmetry of H.
template <typename Real>
struct EtaDecomposition {
  CMatrix<Real> a;
  SignSequence sigma;
};

/// Recovers (A, σ) with η = A†η_σA and [A, H] = 0.
///
/// Works in ψ coordinates: the Gram matrix Ψ†ηΨ is block diagonal over real
/// groups (Hermitian blocks xⁿ = uⁿ diag(λ) uⁿ†, giving aⁿ = |λ|^{1/2}uⁿ† and
/// σ = sign λ) and block off-diagonal over each conjugate pair (a₊ = 1,
/// a₋ = ψ₊†ηψ₋). Then A = Ψ·blkdiag(aⁿ)·Φ†.
template <typename Real>
EtaDecomposition<Real> decompose_eta(const BiorthonormalSystem<Real>& sys, const CMatrix<Real>& eta, Real tol) {
  require_paired(sys);
  const auto& h = sys.hamiltonian;
  if (!is_pseudo_hermitian(h, eta, tol))
    throw Error(ErrorCode::NotAMetric, "H is not pseudo-Hermitian with respect to the given operator");
  if (max_abs(eta - eta.adjoint()) > tol * std::max(Real(1), max_abs(eta)))
    throw Error(ErrorCode::NotAMetric, "operator is not Hermitian");

  const Eigen::Index n = sys.dim();
  const CMatrix<Real> gram = sys.psi.adjoint() * eta * sys.psi;
  const Real gram_scale = std::max(Real(1), max_abs(gram));

  // expected coupling pattern: a real group couples to itself, a pair group to its partner
  std::vector<Eigen::Index> block_of(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& s = sys.slots[j];
    block_of[j] = s.cls == SlotClass::Real ? s.group : std::min(s.group, sys.group_partner[s.group]);
  }
  const auto groups = detail::group_columns(sys);
  if (detail::off_block_residual(gram, block_of) > Real(10) * tol * gram_scale)
    throw Error(ErrorCode::NotAMetric, "metric couples distinct eigenvalues");

  CMatrix<Real> coef = CMatrix<Real>::Zero(n, n);
  EtaDecomposition<Real> out;
  std::vector<int> slot_sign(static_cast<std::size_t>(n), 1);

  for (Eigen::Index g = 0; g < sys.group_count(); ++g) {
    const auto& cols = groups[g];
    const auto d = static_cast<Eigen::Index>(cols.size());
    if (sys.labels[g] == SlotClass::Real) {
      CMatrix<Real> x = detail::gather(gram, cols, cols);
      if (max_abs(CMatrix<Real>(x - x.adjoint())) > Real(10) * tol * gram_scale)
        throw Error(ErrorCode::BlockNotHermitian, "group " + std::to_string(g));
      x = (x + x.adjoint()).eval() / Real(2);
      Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(x);
      CMatrix<Real> u = es.eigenvectors();
      for (Eigen::Index k = 0; k < d; ++k) detail::fix_phase<Real>(u.col(k));
      const RVector<Real> lambda = es.eigenvalues();
      for (Eigen::Index k = 0; k < d; ++k) {
        if (std::abs(lambda(k)) < tol * gram_scale)
          throw Error(ErrorCode::NotAMetric, "singular metric block in group " + std::to_string(g));
        slot_sign[cols[k]] = lambda(k) > 0 ? 1 : -1;
      }
      const CMatrix<Real> a = lambda.cwiseAbs().cwiseSqrt().template cast<Complex<Real>>().asDiagonal() * u.adjoint();
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) coef(cols[r], cols[c]) = a(r, c);
    } else if (sys.labels[g] == SlotClass::Plus) {
      const auto& partner_cols = groups[sys.group_partner[g]];
      const CMatrix<Real> y = detail::gather(gram, cols, partner_cols);
      const Real cond = detail::condition_number(y);
      if (!(cond < Real(1) / (Real(100) * std::numeric_limits<Real>::epsilon())))
        throw Error(ErrorCode::NotAMetric, "singular pair coupling in group " + std::to_string(g));
      for (Eigen::Index r = 0; r < d; ++r) {
        coef(cols[r], cols[r]) = Complex<Real>(1);
        for (Eigen::Index c = 0; c < d; ++c) coef(partner_cols[r], partner_cols[c]) = y(r, c);
      }
    }
  }

  for (auto j : sys.real_slots()) out.sigma.signs.push_back(slot_sign[j]);
  out.a = sys.psi * coef * sys.phi.adjoint();
  return out;
}

}  // namespace phtk

#endif  // PHTK_METRICS_HPP
