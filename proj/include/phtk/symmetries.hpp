#ifndef PHTK_SYMMETRIES_HPP
#define PHTK_SYMMETRIES_HPP

#include "phtk/antilinear.hpp"

namespace phtk {

/// 𝒳_σ = η_σ⁻¹τ₊ = η₊⁻¹τ_σ, matrix ΨWΦᵀ.
template <typename Real>
AntilinearOperator<Real> canonical_X(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  const RMatrix<Real> w = detail::pair_weights(sys, sigma);
  return {sys.psi * w.template cast<Complex<Real>>() * sys.phi.transpose()};
}

/// Largest of the cross-multiplied route residuals η_σ𝒳 − τ₊ and η₊𝒳 − τ_σ.
template <typename Real>
Real route_residual(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  const CMatrix<Real> x = canonical_X(sys, sigma).matrix;
  const CMatrix<Real> es = eta_sigma(sys, sigma).matrix;
  const CMatrix<Real> ep = eta_plus(sys).matrix;
  const CMatrix<Real> tp = tau_plus(sys).matrix;
  const CMatrix<Real> ts = tau_sigma(sys, sigma).matrix;
  return std::max(relative_residual(es * x, tp, max_abs(es) * max_abs(x)),
                  relative_residual(ep * x, ts, max_abs(ep) * max_abs(x)));
}

/// S_σ = η₊⁻¹η_σ. On a conjugate pair both metrics carry the same crossed
/// term, so S_σ acts there as the identity.
template <typename Real>
CMatrix<Real> S_sigma(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma) {
  require_paired(sys);
  const RVector<Real> d = detail::column_signs(sys, sigma);
  return sys.psi * d.template cast<Complex<Real>>().asDiagonal() * sys.phi.adjoint();
}

enum class ActionKind { Exact, Swap };

struct SymmetryAction {
  ActionKind kind = ActionKind::Exact;
  int sign = 1;                 // Exact only
  Eigen::Index partner = -1;    // Swap only
};

inline const char* to_string(ActionKind k) { return k == ActionKind::Exact ? "exact" : "swap"; }

namespace detail {

template <typename Real>
Real cosine(const CVector<Real>& a, const CVector<Real>& b) {
  const Real na = a.norm();
  const Real nb = b.norm();
  if (na == Real(0) || nb == Real(0)) return Real(0);
  return std::abs(a.dot(b)) / (na * nb);
}

}  // namespace detail

/// Classifies 𝒳ψ per column as ±ψ (Exact) or the conjugate partner (Swap).
template <typename Real>
std::vector<SymmetryAction> symmetry_action(const AntilinearOperator<Real>& x, const BiorthonormalSystem<Real>& sys,
                                            Real tol) {
  const auto& h = sys.hamiltonian;
  require_same_shape(h, x.matrix, "antilinear operator does not match H");
  const Real comm = relative_residual(x.matrix * h.conjugate(), h * x.matrix, max_abs(h) * max_abs(x.matrix));
  if (comm > Real(10) * tol)
    throw Error(ErrorCode::PreconditionUnmet, "operator does not commute with H");

  const Real cut = Real(1) - Real(10) * tol;
  const CMatrix<Real> image = x.apply(sys.psi);
  std::vector<SymmetryAction> out;
  for (Eigen::Index j = 0; j < sys.dim(); ++j) {
    const CVector<Real> v = image.col(j);
    const CVector<Real> self = sys.psi.col(j);
    SymmetryAction act;
    if (detail::cosine<Real>(self, v) >= cut) {
      act.kind = ActionKind::Exact;
      act.sign = (self.dot(v) / self.squaredNorm()).real() >= Real(0) ? 1 : -1;
    } else if (sys.slots[j].partner >= 0 && detail::cosine<Real>(sys.psi.col(sys.slots[j].partner), v) >= cut) {
      act.kind = ActionKind::Swap;
      act.partner = sys.slots[j].partner;
    } else {
      throw Error(ErrorCode::UnrecognizedAction, "column " + std::to_string(j) + " is not mapped onto a basis vector");
    }
    out.push_back(act);
  }
  return out;
}

/// ‖S² − I‖ / max(1, ‖S‖²).
template <typename Real>
Verdict<Real> is_involution_linear(const CMatrix<Real>& s, Real tol) {
  require_square(s, "operator");
  const Real a = max_abs(s);
  const Real r = relative_residual(s * s, identity<Real>(s.rows()), a * a);
  return {r <= tol, r};
}

/// ‖M·conj(M) − I‖ / max(1, ‖M‖²).
template <typename Real>
Verdict<Real> is_involution_antilinear(const AntilinearOperator<Real>& t, Real tol) {
  require_square(t.matrix, "operator");
  const Real a = max_abs(t.matrix);
  const Real r = relative_residual(compose(t, t), identity<Real>(t.matrix.rows()), a * a);
  return {r <= tol, r};
}

namespace detail {

template <typename Real>
Real gram_scale(const CMatrix<Real>& g_phi, const CMatrix<Real>& g_psi) {
  return std::max(max_abs(g_phi), max_abs(g_psi));
}

}  // namespace detail

/// ⟨φᵢ|φⱼ⟩ = dᵢdⱼ⟨ψⱼ|ψᵢ⟩ over all slot pairs, d = σ on real slots and 1 on
/// pair slots. Equivalent to τ_σ² = 1.
template <typename Real>
Verdict<Real> involution_conditions_tau(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma, Real tol) {
  const CMatrix<Real> d = detail::column_signs(sys, sigma).template cast<Complex<Real>>().asDiagonal();
  const CMatrix<Real> g_phi = sys.phi.adjoint() * sys.phi;
  const CMatrix<Real> g_psi = sys.psi.adjoint() * sys.psi;
  const Real r = relative_residual(g_phi, d * g_psi.transpose() * d, detail::gram_scale(g_phi, g_psi));
  return {r <= tol, r};
}

/// ⟨φᵢ|φⱼ⟩ = (W·G_ψ·W)ᵢⱼ with W the signed pair permutation of η_σ.
/// Equivalent to η_σ² = 1.
template <typename Real>
Verdict<Real> involution_conditions_eta(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma, Real tol) {
  const CMatrix<Real> w = detail::pair_weights(sys, sigma).template cast<Complex<Real>>();
  const CMatrix<Real> g_phi = sys.phi.adjoint() * sys.phi;
  const CMatrix<Real> g_psi = sys.psi.adjoint() * sys.psi;
  const Real r = relative_residual(g_phi, w * g_psi * w, detail::gram_scale(g_phi, g_psi));
  return {r <= tol, r};
}

/// [τ_σ, η_σ] = 0, i.e. M_τ·conj(η_σ) = η_σ·M_τ.
template <typename Real>
Verdict<Real> check_commu(const BiorthonormalSystem<Real>& sys, const SignSequence& sigma, Real tol) {
  if (!involution_conditions_tau(sys, sigma, tol) || !involution_conditions_eta(sys, sigma, tol))
    throw Error(ErrorCode::PreconditionUnmet, "tau_sigma and eta_sigma are not both involutions");
  const CMatrix<Real> m = tau_sigma(sys, sigma).matrix;
  const CMatrix<Real> eta = eta_sigma(sys, sigma).matrix;
  const Real r = relative_residual(m * eta.conjugate(), eta * m, max_abs(m) * max_abs(eta));
  return {r <= tol, r};
}

/// Σₙ ⟨ψₖ|(AA†)⁻¹|ψₙ⟩⟨ψₘ|(AA†)⁻¹|ψₙ⟩ = δₖₘ, i.e. K·Kᵀ = I with K = Ψ†(AA†)⁻¹Ψ.
template <typename Real>
Verdict<Real> check_corollary3(const BiorthonormalSystem<Real>& sys, const CMatrix<Real>& a, Real tol) {
  const auto& h = sys.hamiltonian;
  require_same_shape(h, a, "A does not match H");
  if (relative_residual(a * h, h * a, max_abs(a) * max_abs(h)) > Real(10) * tol)
    throw Error(ErrorCode::NotASymmetry, "A does not commute with H");
  if (!(detail::condition_number(a) < Real(1) / (Real(100) * std::numeric_limits<Real>::epsilon())))
    throw Error(ErrorCode::NotASymmetry, "A is not invertible");
  const CMatrix<Real> aa = a * a.adjoint();
  const CMatrix<Real> k = sys.psi.adjoint() * aa.partialPivLu().solve(sys.psi);
  const Real kk = max_abs(k);
  const Real r = relative_residual(k * k.transpose(), identity<Real>(k.rows()), kk * kk);
  return {r <= tol, r};
}

}  // namespace phtk

#endif  // PHTK_SYMMETRIES_HPP
