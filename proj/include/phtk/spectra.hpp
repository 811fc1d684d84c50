#ifndef PHTK_SPECTRA_HPP
#define PHTK_SPECTRA_HPP

#include "phtk/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace phtk {

/// Spectral class of one eigenvalue group: real (ν₀), Im > 0 (ν₊) or Im < 0 (ν₋).
enum class SlotClass { Real, Plus, Minus };

/// One eigenvector column of a biorthonormal system.
struct Slot {
  Eigen::Index group = 0;       ///< spectral label n; the ordering index used by (−1)ⁿ
  Eigen::Index degeneracy = 0;  ///< degeneracy label a, 0-based
  SlotClass cls = SlotClass::Real;
  Eigen::Index partner = -1;    ///< column of the conjugate-pair partner, −1 if none
};

/// Complete biorthonormal system {ψₙ,ₐ, φₙ,ₐ} of a diagonalizable matrix.
///
/// Columns of `psi` are right eigenvectors, columns of `phi` are the dual
/// vectors (eigenvectors of H†) with Φ†Ψ = I. Columns are ordered by group,
/// groups by ascending real part and then ascending imaginary part.
template <typename Real>
struct BiorthonormalSystem {
  CMatrix<Real> hamiltonian;
  CVector<Real> eigenvalues;                 // one per group
  std::vector<Eigen::Index> multiplicities;  // one per group
  std::vector<SlotClass> labels;             // one per group
  std::vector<Eigen::Index> group_partner;   // conjugate group, −1 for real or unpaired
  std::vector<Slot> slots;                   // one per column
  CMatrix<Real> psi;
  CMatrix<Real> phi;
  Real tol = Real(0);
  Real condition = Real(1);          // cond₂(Ψ)
  Real cluster_condition = Real(1);  // worst cond₂ of a degenerate column block

  Eigen::Index dim() const { return psi.cols(); }
  Eigen::Index group_count() const { return eigenvalues.size(); }

  /// Eigenvalue attached to every column.
  CVector<Real> column_eigenvalues() const {
    CVector<Real> e(dim());
    for (Eigen::Index j = 0; j < dim(); ++j) e(j) = eigenvalues(slots[j].group);
    return e;
  }

  std::vector<Eigen::Index> real_slots() const {
    std::vector<Eigen::Index> out;
    for (Eigen::Index j = 0; j < dim(); ++j)
      if (slots[j].cls == SlotClass::Real) out.push_back(j);
    return out;
  }

  bool all_paired() const {
    for (const auto& s : slots)
      if (s.cls != SlotClass::Real && s.partner < 0) return false;
    return true;
  }

  /// Scale used for clustering and reality decisions: tol·max(1, ‖H‖_max).
  Real spectral_scale() const { return tol * std::max(Real(1), max_abs(hamiltonian)); }
};

enum class SpectrumKind { Real, ConjugatePaired, Unpaired };

/// Result of classify_spectrum.
template <typename Real>
struct SpectralClass {
  SpectrumKind kind = SpectrumKind::Real;
  std::optional<Complex<Real>> witness;  // set when Unpaired

  bool is_real() const { return kind == SpectrumKind::Real; }
  bool is_paired() const { return kind == SpectrumKind::ConjugatePaired; }
  bool is_unpaired() const { return kind == SpectrumKind::Unpaired; }
};

inline const char* to_string(SlotClass c) {
  switch (c) {
    case SlotClass::Real: return "real";
    case SlotClass::Plus: return "plus";
    case SlotClass::Minus: return "minus";
  }
  return "?";
}

inline const char* to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::Real: return "Real";
    case SpectrumKind::ConjugatePaired: return "ConjugatePaired";
    case SpectrumKind::Unpaired: return "Unpaired";
  }
  return "?";
}

namespace detail {

template <typename Real>
Real condition_number(const CMatrix<Real>& m) {
  if (m.size() == 0) return Real(1);
  Eigen::BDCSVD<CMatrix<Real>> svd(m);
  const auto& s = svd.singularValues();
  const Real smin = s(s.size() - 1);
  if (smin == Real(0)) return std::numeric_limits<Real>::infinity();
  return s(0) / smin;
}

/// Single-linkage clustering of values with pairwise distance ≤ scale.
/// Returns a cluster id per value, ids numbered in order of first appearance.
template <typename Real>
std::vector<Eigen::Index> cluster(const CVector<Real>& values, Real scale) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index(0));
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(values(i) - values(j)) <= scale) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<Eigen::Index> id(static_cast<std::size_t>(n), -1), remap(static_cast<std::size_t>(n), -1);
  Eigen::Index next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = find(i);
    if (remap[r] < 0) remap[r] = next++;
    id[i] = remap[r];
  }
  return id;
}

/// Greedy nearest-conjugate matching of nonreal groups. Returns a partner
/// index per group (−1 when real or unmatched).
template <typename Real>
std::vector<Eigen::Index> pair_groups(const CVector<Real>& eig, const std::vector<Eigen::Index>& mult,
                                      const std::vector<SlotClass>& labels, Real scale) {
  const Eigen::Index g = eig.size();
  std::vector<Eigen::Index> partner(static_cast<std::size_t>(g), -1);
  for (Eigen::Index i = 0; i < g; ++i) {
    if (labels[i] != SlotClass::Plus) continue;
    Eigen::Index best = -1;
    Real best_d = std::numeric_limits<Real>::infinity();
    for (Eigen::Index j = 0; j < g; ++j) {
      if (labels[j] != SlotClass::Minus || partner[j] >= 0 || mult[j] != mult[i]) continue;
      const Real d = std::abs(eig(i) - std::conj(eig(j)));
      if (d <= scale && d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best >= 0) {
      partner[i] = best;
      partner[best] = i;
    }
  }
  return partner;
}

template <typename Real>
void fix_phase(Eigen::Ref<CVector<Real>> v) {
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > Real(0)) v *= std::conj(v(k)) / std::abs(v(k));
}

}  // namespace detail

/// Builds the biorthonormal system from given eigenvector columns of H.
///
/// The duals are Φ = (Ψ⁻¹)†. Columns are not rescaled, so hand-normalized
/// eigenvectors keep their normalization.
template <typename Real>
BiorthonormalSystem<Real> make_biorthonormal(const CMatrix<Real>& h, const CMatrix<Real>& psi, Real tol) {
  require_square(h, "H");
  require_same_shape(h, psi, "eigenvector matrix does not match H");
  const Eigen::Index n = h.rows();

  BiorthonormalSystem<Real> sys;
  sys.hamiltonian = h;
  sys.tol = tol;
  sys.condition = detail::condition_number(psi);
  const Real gate = Real(1) / (Real(100) * std::numeric_limits<Real>::epsilon());
  if (!(sys.condition <= gate))
    throw Error(ErrorCode::NotDiagonalizable, "cond(Psi) = " + std::to_string(double(sys.condition)));

  const CMatrix<Real> psi_inv = psi.partialPivLu().solve(CMatrix<Real>::Identity(n, n));
  const CMatrix<Real> phi = psi_inv.adjoint();

  CVector<Real> rayleigh(n);
  for (Eigen::Index j = 0; j < n; ++j) rayleigh(j) = phi.col(j).dot(h * psi.col(j));

  const Real scale = sys.spectral_scale();
  const auto id = detail::cluster(rayleigh, scale);
  const Eigen::Index groups = n == 0 ? 0 : *std::max_element(id.begin(), id.end()) + 1;

  CVector<Real> mean = CVector<Real>::Zero(groups);
  std::vector<Eigen::Index> mult(static_cast<std::size_t>(groups), 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    mean(id[j]) += rayleigh(j);
    ++mult[id[j]];
  }
  for (Eigen::Index g = 0; g < groups; ++g) mean(g) /= Real(mult[g]);

  // ascending real part; real parts within the cluster scale count as ties
  std::vector<Eigen::Index> order(static_cast<std::size_t>(groups));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (mean(a).real() != mean(b).real()) return mean(a).real() < mean(b).real();
    return mean(a).imag() < mean(b).imag();
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    for (std::size_t k = i; k > 0; --k) {
      const auto& lo = mean(order[k - 1]);
      const auto& hi = mean(order[k]);
      if (std::abs(lo.real() - hi.real()) <= scale && hi.imag() < lo.imag())
        std::swap(order[k - 1], order[k]);
      else
        break;
    }

  std::vector<Eigen::Index> rank(static_cast<std::size_t>(groups));
  for (Eigen::Index r = 0; r < groups; ++r) rank[order[r]] = r;

  sys.eigenvalues.resize(groups);
  sys.multiplicities.resize(static_cast<std::size_t>(groups));
  sys.labels.resize(static_cast<std::size_t>(groups));
  for (Eigen::Index r = 0; r < groups; ++r) {
    const auto g = order[r];
    sys.eigenvalues(r) = mean(g);
    sys.multiplicities[r] = mult[g];
    const Real im = mean(g).imag();
    sys.labels[r] = std::abs(im) <= scale ? SlotClass::Real : (im > 0 ? SlotClass::Plus : SlotClass::Minus);
  }
  sys.group_partner = detail::pair_groups(sys.eigenvalues, sys.multiplicities, sys.labels, scale);

  // reorder columns: by group rank, original order within a group
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), Eigen::Index(0));
  std::stable_sort(cols.begin(), cols.end(), [&](Eigen::Index a, Eigen::Index b) { return rank[id[a]] < rank[id[b]]; });

  sys.psi.resize(n, n);
  sys.phi.resize(n, n);
  sys.slots.resize(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> first_col(static_cast<std::size_t>(groups), -1);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto j = cols[k];
    const auto r = rank[id[j]];
    sys.psi.col(k) = psi.col(j);
    sys.phi.col(k) = phi.col(j);
    if (first_col[r] < 0) first_col[r] = k;
    sys.slots[k].group = r;
    sys.slots[k].degeneracy = k - first_col[r];
    sys.slots[k].cls = sys.labels[r];
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    auto& s = sys.slots[k];
    const auto pg = sys.group_partner[s.group];
    if (pg >= 0) s.partner = first_col[pg] + s.degeneracy;
  }

  for (Eigen::Index r = 0; r < groups; ++r)
    if (sys.multiplicities[r] > 1)
      sys.cluster_condition = std::max(sys.cluster_condition,
                                       detail::condition_number<Real>(sys.psi.middleCols(first_col[r], sys.multiplicities[r])));
  return sys;
}

/// Eigen-decomposes H and returns its complete biorthonormal system.
///
/// ψ columns have unit 2-norm with the largest component real positive.
/// Eigenvalues within tol·max(1,‖H‖_max) of each other form one degenerate
/// group; the vectors of a group are replaced by an orthonormal basis of the
/// numerical null space of H − λ̄ when the solver's vectors are nearly parallel.
template <typename Real>
BiorthonormalSystem<Real> eig_biorthonormal(const CMatrix<Real>& h, Real tol) {
  require_square(h, "H");
  const Eigen::Index n = h.rows();
  if (!h.allFinite()) throw Error(ErrorCode::ParseError, "H has non-finite entries");

  Eigen::ComplexEigenSolver<CMatrix<Real>> solver(h, true);
  CMatrix<Real> psi = solver.eigenvectors();
  const CVector<Real> values = solver.eigenvalues();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Real norm = psi.col(j).norm();
    if (norm > Real(0)) psi.col(j) /= norm;
    detail::fix_phase<Real>(psi.col(j));
  }

  const Real scale = tol * std::max(Real(1), max_abs(h));
  const auto id = detail::cluster(values, scale);
  const Eigen::Index groups = n == 0 ? 0 : *std::max_element(id.begin(), id.end()) + 1;
  for (Eigen::Index g = 0; g < groups; ++g) {
    std::vector<Eigen::Index> members;
    Complex<Real> mean(0);
    for (Eigen::Index j = 0; j < n; ++j)
      if (id[j] == g) {
        members.push_back(j);
        mean += values(j);
      }
    const auto d = static_cast<Eigen::Index>(members.size());
    if (d < 2) continue;
    mean /= Real(d);
    CMatrix<Real> block(n, d);
    for (Eigen::Index k = 0; k < d; ++k) block.col(k) = psi.col(members[k]);
    if (detail::condition_number(block) < Real(1e6)) continue;
    const CMatrix<Real> shifted = h - mean * CMatrix<Real>::Identity(n, n);
    Eigen::JacobiSVD<CMatrix<Real>> svd(shifted, Eigen::ComputeFullV);
    // a defective cluster has a smaller null space; keep its parallel vectors so the gate fires
    if (svd.singularValues()(n - d) > Real(10) * scale) continue;
    for (Eigen::Index k = 0; k < d; ++k) {
      psi.col(members[k]) = svd.matrixV().col(n - d + k);
      detail::fix_phase<Real>(psi.col(members[k]));
    }
  }
  return make_biorthonormal(h, psi, tol);
}

/// Classifies the spectrum as real, conjugate-paired or unpaired.
template <typename Real>
SpectralClass<Real> classify_spectrum(const BiorthonormalSystem<Real>& sys, Real tol) {
  const Real scale = tol * std::max(Real(1), max_abs(sys.hamiltonian));
  std::vector<SlotClass> labels(sys.labels.size());
  bool all_real = true;
  for (Eigen::Index g = 0; g < sys.group_count(); ++g) {
    const Real im = sys.eigenvalues(g).imag();
    labels[g] = std::abs(im) <= scale ? SlotClass::Real : (im > 0 ? SlotClass::Plus : SlotClass::Minus);
    all_real = all_real && labels[g] == SlotClass::Real;
  }
  SpectralClass<Real> out;
  if (all_real) return out;
  const auto partner = detail::pair_groups(sys.eigenvalues, sys.multiplicities, labels, scale);
  for (Eigen::Index g = 0; g < sys.group_count(); ++g)
    if (labels[g] != SlotClass::Real && partner[g] < 0) {
      out.kind = SpectrumKind::Unpaired;
      out.witness = sys.eigenvalues(g);
      return out;
    }
  out.kind = SpectrumKind::ConjugatePaired;
  return out;
}

template <typename Real>
SpectralClass<Real> classify_spectrum(const BiorthonormalSystem<Real>& sys) {
  return classify_spectrum(sys, sys.tol);
}

/// Σ Eₙ ψₙφₙ†.
template <typename Real>
CMatrix<Real> reconstruct(const BiorthonormalSystem<Real>& sys) {
  return sys.psi * sys.column_eigenvalues().asDiagonal() * sys.phi.adjoint();
}

template <typename Real>
void require_paired(const BiorthonormalSystem<Real>& sys) {
  for (Eigen::Index j = 0; j < sys.dim(); ++j)
    if (sys.slots[j].cls != SlotClass::Real && sys.slots[j].partner < 0) {
      const auto e = sys.eigenvalues(sys.slots[j].group);
      throw Error(ErrorCode::UnpairedSpectrum,
                  "eigenvalue " + std::to_string(double(e.real())) + (e.imag() < 0 ? "" : "+") +
                      std::to_string(double(e.imag())) + "i has no conjugate partner");
    }
}

}  // namespace phtk

#endif  // PHTK_SPECTRA_HPP
