#ifndef PHTK_PTC_HPP
#define PHTK_PTC_HPP

#include "phtk/check.hpp"
#include "phtk/symmetries.hpp"

namespace phtk {

/// Generalized 𝒫, 𝒯, 𝒞 and their composites for one biorthonormal system,
/// with σₙ = (−1)ⁿ on real slots.
template <typename Real>
struct PTCSet {
  MetricOperator<Real> P;
  AntilinearOperator<Real> T;
  CMatrix<Real> C;
  AntilinearOperator<Real> PT;
  AntilinearOperator<Real> CPT;
  CMatrix<Real> Lambda;
  MetricOperator<Real> eta_plus;
};

/// 𝒫 = η_σ, 𝒯 = τ_σ, 𝒞 = η₊⁻¹𝒫 = S_σ, 𝒫𝒯 = 𝒳₊, 𝒞𝒫𝒯 = 𝒳_σ, Λ = ΨΨ†.
///
/// On conjugate pairs 𝒞 and 𝒯 carry no crossed terms: a ν₊↔ν₋ swap in either
/// would break [𝒞, H] = 0 and the anti-pseudo-Hermiticity of H under 𝒯.
template <typename Real>
PTCSet<Real> build_ptc(const BiorthonormalSystem<Real>& sys, const SignSequence& alt) {
  require_paired(sys);
  PTCSet<Real> out;
  out.P = eta_sigma(sys, alt);
  out.T = tau_sigma(sys, alt);
  out.C = S_sigma(sys, alt);
  out.PT = canonical_X(sys, all_plus(sys));
  out.CPT = canonical_X(sys, alt);
  out.Lambda = sys.psi * sys.psi.adjoint();
  out.eta_plus = eta_plus(sys);
  return out;
}

template <typename Real>
PTCSet<Real> build_ptc(const BiorthonormalSystem<Real>& sys) {
  return build_ptc(sys, alternating(sys));
}

/// ⟨x|η₊y⟩, positive definite for a real spectrum.
template <typename Real>
Complex<Real> cpt_inner(const CVector<Real>& x, const CVector<Real>& y, const BiorthonormalSystem<Real>& sys) {
  if (!classify_spectrum(sys).is_real())
    throw Error(ErrorCode::ComplexSpectrum, "the CPT inner product needs a real spectrum");
  return pseudo_inner(x, y, eta_plus(sys).matrix);
}

/// (𝒞𝒫𝒯x)ᵀy. Agrees with cpt_inner when 𝒯 is plain conjugation, as in a
/// PT-normalized model.
template <typename Real>
Complex<Real> cpt_inner_position(const CVector<Real>& x, const CVector<Real>& y, const AntilinearOperator<Real>& cpt) {
  if (y.size() != cpt.dim()) throw Error(ErrorCode::ShapeMismatch, "vector does not match operator");
  return cpt.apply(x).transpose() * y;
}

/// Itemized residual report over the seven structural items plus the
/// mixed-spectrum operators. Never throws for a paired system.
template <typename Real>
CheckReport verify_lemma1(const BiorthonormalSystem<Real>& sys, Real tol) {
  const PTCSet<Real> ops = build_ptc(sys);
  const auto& h = sys.hamiltonian;
  const auto& psi = sys.psi;
  const auto& phi = sys.phi;
  const Eigen::Index n = sys.dim();
  const auto I = identity<Real>(n);
  const double lin = 10.0 * double(tol);
  const double tri = 100.0 * double(tol);
  const bool real_spectrum = classify_spectrum(sys, tol).is_real();
  const SignSequence alt = alternating(sys);

  const Real nh = max_abs(h), npsi = max_abs(psi), nphi = max_abs(phi);
  const CMatrix<Real>& eta = ops.eta_plus.matrix;
  const CMatrix<Real>& P = ops.P.matrix;
  const CMatrix<Real>& C = ops.C;
  const CMatrix<Real>& mt = ops.T.matrix;
  const Real neta = max_abs(eta), nP = max_abs(P), nC = max_abs(C), nT = max_abs(mt);
  const CMatrix<Real> w_plus = detail::pair_weights(sys, all_plus(sys)).template cast<Complex<Real>>();
  const CMatrix<Real> w_alt = detail::pair_weights(sys, alt).template cast<Complex<Real>>();
  const CMatrix<Real> d_alt = detail::column_signs(sys, alt).template cast<Complex<Real>>().asDiagonal();

  const auto eta_inv = involution_conditions_eta(sys, alt, tol);
  const auto tau_inv = involution_conditions_tau(sys, alt, tol);

  CheckReport r;
  r.flags["real-spectrum"] = real_spectrum;

  // 1
  r.add("bi-ortho", 1, relative_residual(phi.adjoint() * psi, I, nphi * npsi), lin);
  r.add("complete", 1, relative_residual(psi * phi.adjoint(), I, npsi * nphi), lin);
  r.add("eigen", 1, relative_residual(h * psi, psi * sys.column_eigenvalues().asDiagonal(), nh * npsi), lin);

  // 2
  r.add("eta-plus", 2, relative_residual(eta * psi, phi * w_plus, neta * npsi), lin);
  r.add("eta-gram", 2, relative_residual(psi.adjoint() * eta * psi, w_plus, neta * npsi * npsi), lin);
  r.add("eta-herm", 2, relative_residual(eta, eta.adjoint(), neta), lin);
  if (real_spectrum)
    r.add_lower_bound("eta-pd", 2, min_hermitian_eigenvalue(eta), lin * neta, "smallest eigenvalue");
  else
    r.skip("eta-pd", 2, "indefinite for a complex spectrum");
  {
    const CMatrix<Real> tet = mt * eta.conjugate() * mt.conjugate();
    r.add_conditional("e=TeT", 2, relative_residual(eta * tet, I, neta * neta * nT * nT), tri, tau_inv.holds,
                      "needs T to be an involution");
  }

  // 3
  r.add("P-ph", 3, is_pseudo_hermitian(h, P, tol).residual, lin);
  r.add("T-anti-ph", 3, is_anti_pseudo_hermitian(h, ops.T, tol).residual, lin);
  r.add("eta-ph", 3, is_pseudo_hermitian(h, eta, tol).residual, lin);

  // 4
  const CMatrix<Real>& mpt = ops.PT.matrix;
  const CMatrix<Real>& mcpt = ops.CPT.matrix;
  const Real npt = max_abs(mpt), ncpt = max_abs(mcpt);
  r.add("C-comm", 4, relative_residual(C * h, h * C, nC * nh), lin);
  r.add("PT-comm", 4, relative_residual(mpt * h.conjugate(), h * mpt, npt * nh), lin);
  r.add("CPT-comm", 4, relative_residual(mcpt * h.conjugate(), h * mcpt, ncpt * nh), lin);
  r.add("PT-psi", 4, relative_residual(ops.PT.apply(psi), psi * w_plus, npt * npsi), lin);
  r.add("CPT-psi", 4, relative_residual(ops.CPT.apply(psi), psi * w_alt, ncpt * npsi), lin);
  r.add("C-psi", 4, relative_residual(C * psi, psi * d_alt, nC * npsi), lin);

  // 5
  r.add("nilp-PT", 5, is_involution_antilinear(ops.PT, tol).residual, lin);
  r.add("nilp-CPT", 5, is_involution_antilinear(ops.CPT, tol).residual, lin);
  r.add("nilp-C", 5, is_involution_linear(C, tol).residual, lin);
  r.add("C=eta", 5, relative_residual(eta * C, P, neta * nC), lin);
  {
    const CMatrix<Real> tetp = mt * eta.conjugate() * mt.conjugate() * P;
    r.add_conditional("C=TeTP", 5, relative_residual(C, tetp, nC * nT * nT * neta * nP), tri, tau_inv.holds,
                      "needs T to be an involution");
  }
  r.add_conditional("PT=P.T", 5, relative_residual(P * mt, mpt, nP * nT), lin, eta_inv.holds,
                    "needs P to be an involution");
  r.add("CPT=C.PT", 5, relative_residual(C * mpt, mcpt, nC * npt), lin);

  // 6
  {
    const auto p_sq = is_involution_linear(P, tol);
    const auto t_sq = is_involution_antilinear(ops.T, tol);
    r.flags["P-involution"] = eta_inv.holds;
    r.flags["T-involution"] = tau_inv.holds;
    auto& ep = r.add("inv-condi-P", 6, double(eta_inv.residual), lin,
                     eta_inv.holds ? "P is an involution" : "P is not an involution");
    ep.status = eta_inv.holds == p_sq.holds ? CheckStatus::Pass : CheckStatus::Fail;
    auto& et = r.add("inv-condi-T", 6, double(tau_inv.residual), lin,
                     tau_inv.holds ? "T is an involution" : "T is not an involution");
    et.status = tau_inv.holds == t_sq.holds ? CheckStatus::Pass : CheckStatus::Fail;
    if (eta_inv.holds && tau_inv.holds)
      r.add("commu", 6, check_commu(sys, alt, tol).residual, lin);
    else
      r.skip("commu", 6, "P and T are not both involutions");
  }

  // 7
  const Real nl = max_abs(ops.Lambda);
  if (real_spectrum)
    r.add("Lambda-P", 7, relative_residual(ops.Lambda * P, C, nl * nP), lin);
  else
    r.skip("Lambda-P", 7, "pair terms of P are crossed");
  r.add("Lambda-herm", 7, relative_residual(ops.Lambda, CMatrix<Real>(ops.Lambda.adjoint()), nl), lin);
  if (real_spectrum && max_abs(CMatrix<Real>(phi - psi)) <= tol * std::max(Real(1), npsi))
    r.add("C=P", 7, relative_residual(C, P, std::max(nC, nP)), lin);
  else
    r.skip("C=P", 7, "phi differs from psi");
  if (max_abs(CMatrix<Real>(h - h.adjoint())) <= tol * std::max(Real(1), nh)) {
    const CMatrix<Real> cp = C * P;
    r.add("CinvP-herm", 7, relative_residual(cp, CMatrix<Real>(cp.adjoint()), nC * nP), lin);
  } else {
    r.skip("CinvP-herm", 7, "H is not Hermitian");
  }
  return r;
}

}  // namespace phtk

#endif  // PHTK_PTC_HPP
