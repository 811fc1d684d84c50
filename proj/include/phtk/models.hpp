#ifndef PHTK_MODELS_HPP
#define PHTK_MODELS_HPP

#include "phtk/check.hpp"
#include "phtk/ptc.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace phtk {

/// Truncated oscillator-basis discretization of p² + x²(ix)^ν on the real line.
/// Basis functions are real, so T is plain conjugation and P = diag((−1)ⁿ).
struct OscillatorModel {
  int N = 0;
  double nu = 0.0;
  int quadrature_nodes = 0;
  ComplexMatrix H;
  ComplexMatrix P;
  AntilinearOperator<double> T;
};

/// H = diag(1, 3, …, 2N−1).
OscillatorModel harmonic_oscillator(int N);

/// Kinetic term exact in the Hermite-function basis, potential
/// |x|^{ν+2}(cos(πν/2) + i·sign(x)·sin(πν/2)) by M-node Gauss–Hermite
/// quadrature. M = 0 selects the default 2N.
OscillatorModel bender_hamiltonian(double nu, int N, int M = 0);

/// Gauss–Hermite nodes (ascending, exactly antisymmetric) for weight e^{−x²}.
std::vector<double> gauss_hermite_nodes(int M);

/// Rescales every real-eigenvalue column so that PTψ = ψ and ⟨ψ|P|ψ⟩ = ±1,
/// then sets φ = s·conj(ψ) with s that sign. Pair columns are left as they are.
BiorthonormalSystem<double> pt_normalize(const BiorthonormalSystem<double>& sys, const OscillatorModel& model);

/// Measured ⟨ψ|P|ψ⟩ sign per column; 0 on pair columns.
std::vector<int> pt_signs(const BiorthonormalSystem<double>& sys, const OscillatorModel& model);

/// Column indices of the lowest `count` real-eigenvalue modes by |E|, in column order.
std::vector<Eigen::Index> lowest_modes(const BiorthonormalSystem<double>& sys, int count);

/// (−1)ⁿ per real slot, n counting real groups only. Truncation pairs do not shift it.
SignSequence real_rank_signs(const BiorthonormalSystem<double>& sys);

/// Identity residuals of the PT-normalized system restricted to the lowest
/// ⌊N/4⌋ real modes, with σ from real_rank_signs. Flag "pairs-below" marks
/// truncation pairs under the cut. The PT self-conjugacy entry comes first.
CheckReport verify_section4(const OscillatorModel& model, const BiorthonormalSystem<double>& sys, double tol);

/// Mode count used by verify_section4.
inline int section4_modes(const OscillatorModel& m) { return std::max(1, m.N / 4); }

// ---------------------------------------------------------------------------
// Seeded ensembles. Gaussian draws use Box–Muller over std::mt19937_64, whose
// output sequence is fixed by the standard, so members are reproducible
// across toolchains.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::complex<double> complex_normal();
  int sign() { return uniform() < 0.5 ? -1 : 1; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Independent per-member seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Complex Gaussian matrix with singular values clamped to [s_max/100, s_max].
ComplexMatrix random_similarity(int n, Rng& rng, double max_condition = 100.0);

/// A·diag(spectrum)·A⁻¹.
ComplexMatrix similarity_transform(const ComplexMatrix& a, const ComplexVector& spectrum);

/// A·diag(spectrum)·A⁻¹ with seeded A.
ComplexMatrix random_quasi_hermitian(int n, const std::vector<double>& spectrum, std::uint64_t seed);

/// Similarity transform of diag(reals, E₁, Ē₁, …) with seeded A.
ComplexMatrix random_pseudo_hermitian(const std::vector<double>& reals, const std::vector<std::complex<double>>& pairs,
                                      std::uint64_t seed);

/// As above with n_real real eigenvalues drawn from the seed.
ComplexMatrix random_pseudo_hermitian(int n_real, const std::vector<std::complex<double>>& pairs, std::uint64_t seed);

}  // namespace phtk

#endif  // PHTK_MODELS_HPP
