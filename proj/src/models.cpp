#include "phtk/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace phtk {

namespace {

using cd = std::complex<double>;

/// Exact p² in the Hermite-function basis: (2n+1)/2 on the diagonal,
/// −√(n(n−1))/2 two steps off it.
ComplexMatrix kinetic(int N) {
  ComplexMatrix t = ComplexMatrix::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    t(n, n) = 0.5 * (2 * n + 1);
    if (n + 2 < N) {
      const double off = -0.5 * std::sqrt(double(n + 1) * double(n + 2));
      t(n, n + 2) = off;
      t(n + 2, n) = off;
    }
  }
  return t;
}

cd potential(double x, double nu) {
  const double mag = std::pow(std::abs(x), nu + 2.0);
  const double half = 0.5 * std::numbers::pi * nu;
  const double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
  return {mag * std::cos(half), mag * s * std::sin(half)};
}

/// Hermite functions h_0..h_{count−1} at x up to one common positive factor;
/// the factor cancels in the Christoffel-weighted sums below.
void hermite_values(double x, int count, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(count), 0.0);
  out[0] = 1.0;
  if (count > 1) out[1] = std::sqrt(2.0) * x;
  for (int n = 1; n + 1 < count; ++n) {
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * x * out[n] - std::sqrt(double(n) / (n + 1)) * out[n - 1];
    if (std::abs(out[n + 1]) > 1e150) {
      for (int k = 0; k <= n + 1; ++k) out[k] *= 1e-150;
    }
  }
}

}  // namespace

std::vector<double> gauss_hermite_nodes(int M) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(M, M);
  for (int k = 1; k < M; ++k) {
    jacobi(k, k - 1) = std::sqrt(0.5 * k);
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi, Eigen::EigenvaluesOnly);
  std::vector<double> x(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) x[k] = 0.5 * (es.eigenvalues()(k) - es.eigenvalues()(M - 1 - k));
  if (M % 2 == 1) x[M / 2] = 0.0;
  return x;
}

OscillatorModel harmonic_oscillator(int N) {
  if (N < 2) throw Error(ErrorCode::RangeError, "basis size must be at least 2");
  OscillatorModel m;
  m.N = N;
  m.H = ComplexMatrix::Zero(N, N);
  m.P = ComplexMatrix::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    m.H(n, n) = 2.0 * n + 1.0;
    m.P(n, n) = n % 2 == 0 ? 1.0 : -1.0;
  }
  m.T = {ComplexMatrix::Identity(N, N)};
  return m;
}

OscillatorModel bender_hamiltonian(double nu, int N, int M) {
  if (!(nu >= 0.0 && nu < 2.0)) throw Error(ErrorCode::NuOutOfRange, "nu must lie in [0, 2)");
  if (N < 2) throw Error(ErrorCode::RangeError, "basis size must be at least 2");
  if (M == 0) M = 2 * N;
  if (M < 2 * N) throw Error(ErrorCode::QuadratureTooCoarse, "need at least 2N quadrature nodes");

  OscillatorModel m = harmonic_oscillator(N);
  m.nu = nu;
  m.quadrature_nodes = M;

  const auto nodes = gauss_hermite_nodes(M);
  ComplexMatrix v = ComplexMatrix::Zero(N, N);
  std::vector<double> h;
  Eigen::VectorXd col(N);
  for (int k = 0; k < M; ++k) {
    hermite_values(nodes[k], M, h);
    double christoffel = 0.0;
    for (double y : h) christoffel += y * y;
    for (int n = 0; n < N; ++n) col(n) = h[n];
    const cd weight = potential(nodes[k], nu) / christoffel;
    v.noalias() += weight * (col * col.transpose()).cast<cd>();
  }
  // parity: V_mn vanishes for odd m+n in the real part and even m+n in the imaginary part
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      if ((r + c) % 2 == 0)
        v(r, c) = v(r, c).real();
      else
        v(r, c) = cd(0.0, v(r, c).imag());
    }
  m.H = kinetic(N) + v;
  m.H = (0.5 * (m.H + m.H.transpose())).eval();
  return m;
}

std::vector<int> pt_signs(const BiorthonormalSystem<double>& sys, const OscillatorModel& model) {
  std::vector<int> s(static_cast<std::size_t>(sys.dim()), 0);
  for (Eigen::Index j = 0; j < sys.dim(); ++j) {
    if (sys.slots[j].cls != SlotClass::Real) continue;
    const double pn = sys.psi.col(j).dot(model.P * sys.psi.col(j)).real();
    s[j] = pn >= 0 ? 1 : -1;
  }
  return s;
}

BiorthonormalSystem<double> pt_normalize(const BiorthonormalSystem<double>& sys, const OscillatorModel& model) {
  require_same_shape(sys.hamiltonian, model.P, "system does not match model");
  const double tol = sys.tol;
  BiorthonormalSystem<double> out = sys;
  const cd i(0.0, 1.0);
  for (Eigen::Index j = 0; j < sys.dim(); ++j) {
    if (sys.slots[j].cls != SlotClass::Real) continue;
    if (sys.multiplicities[sys.slots[j].group] != 1)
      throw Error(ErrorCode::PTPhaseNotFound, "degenerate eigenvalue at column " + std::to_string(j));
    const ComplexVector v0 = sys.psi.col(j);
    const ComplexVector w = model.T.apply(ComplexVector(model.P * v0));
    const cd overlap = v0.dot(w);
    if (std::abs(overlap) < (1.0 - 10.0 * tol) * v0.norm() * w.norm())
      throw Error(ErrorCode::PTPhaseNotFound, "column " + std::to_string(j) + " is not PT self-conjugate");
    cd scale = std::polar(1.0, 0.5 * std::arg(overlap));
    ComplexVector v = scale * v0;

    // component k of a PT-symmetric vector lies on iᵏℝ; make the largest one positive there
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const cd ik = std::pow(i, static_cast<int>(big % 4));
    if ((v(big) / ik).real() < 0) scale = -scale;

    v = scale * v0;
    const double pn = v.dot(model.P * v).real();
    if (std::abs(pn) < 64 * std::numeric_limits<double>::epsilon() * v.squaredNorm()) {
      // truncation artifact near a pair collision: keep the exact dual instead
      scale /= v.norm();
      out.psi.col(j) = scale * v0;
      out.phi.col(j) = sys.phi.col(j) / std::conj(scale);
      continue;
    }
    v /= std::sqrt(std::abs(pn));
    out.psi.col(j) = v;
    out.phi.col(j) = (pn > 0 ? 1.0 : -1.0) * v.conjugate();
  }
  out.condition = detail::condition_number(out.psi);
  return out;
}

std::vector<Eigen::Index> lowest_modes(const BiorthonormalSystem<double>& sys, int count) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < sys.dim(); ++j)
    if (sys.slots[j].cls == SlotClass::Real) cols.push_back(j);
  const auto e = sys.column_eigenvalues();
  std::stable_sort(cols.begin(), cols.end(), [&](auto a, auto b) { return std::abs(e(a)) < std::abs(e(b)); });
  cols.resize(std::min<std::size_t>(cols.size(), static_cast<std::size_t>(std::max(0, count))));
  std::sort(cols.begin(), cols.end());
  return cols;
}

SignSequence real_rank_signs(const BiorthonormalSystem<double>& sys) {
  SignSequence s;
  int rank = -1, last = -1;
  for (auto j : sys.real_slots()) {
    if (sys.slots[j].group != last) {
      ++rank;
      last = sys.slots[j].group;
    }
    s.signs.push_back(rank % 2 == 0 ? 1 : -1);
  }
  return s;
}

CheckReport verify_section4(const OscillatorModel& model, const BiorthonormalSystem<double>& sys, double tol) {
  CheckReport r;
  const int want = section4_modes(model);
  const auto low = lowest_modes(sys, want);
  const auto k = static_cast<Eigen::Index>(low.size());
  const double lin = 10.0 * tol;
  const SignSequence sigma = real_rank_signs(sys);
  const auto real = sys.real_slots();
  const auto sign_of = [&](Eigen::Index col) {
    const auto at = std::find(real.begin(), real.end(), col) - real.begin();
    return sigma.signs[static_cast<std::size_t>(at)];
  };

  ComplexMatrix psi(sys.dim(), k), phi(sys.dim(), k);
  ComplexMatrix d = ComplexMatrix::Zero(k, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    psi.col(c) = sys.psi.col(low[c]);
    phi.col(c) = sys.phi.col(low[c]);
    d(c, c) = sign_of(low[c]);
  }
  // spurious complex pairs from truncation may sit below the selected modes
  bool clean = true;
  if (k > 0) {
    const auto e = sys.column_eigenvalues();
    double cut = 0.0;
    for (auto c : low) cut = std::max(cut, std::abs(e(c)));
    for (Eigen::Index j = 0; j < sys.dim(); ++j)
      if (sys.slots[j].cls != SlotClass::Real && std::abs(e(j)) < cut) clean = false;
  }
  r.flags["pairs-below"] = !clean;

  const ComplexMatrix& P = model.P;
  const ComplexMatrix id = ComplexMatrix::Identity(k, k);
  const double npsi = max_abs(psi), nphi = max_abs(phi);

  r.add("pt=", 0, relative_residual(model.T.apply(ComplexMatrix(P * psi)), psi, npsi), lin,
        "PT self-conjugacy of the low modes");
  r.add("low-real", 0, k == want ? 0.0 : 1.0, 0.0, "enough real modes");
  if (k != want) return r;

  r.add("ortho-1", 0, relative_residual(psi.adjoint() * P * psi, d, npsi * npsi), lin);
  {
    const auto s = pt_signs(sys, model);
    double worst = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) worst = std::max(worst, std::abs(s[low[c]] - d(c, c).real()));
    r.add("sigma=", 0, worst, 0.0, "PT-norm signs follow (-1)^n");
  }
  r.add("phi=", 0, relative_residual(phi, ComplexMatrix(psi.conjugate() * d), std::max(npsi, nphi)), lin);
  r.add("bi-ortho", 0, relative_residual(phi.adjoint() * psi, id, nphi * npsi), lin);
  {
    // Σ (−1)ⁿ ψₙψₙᵀ over real slots plus the pair terms of ΦΨ† conjugated
    ComplexMatrix comp = ComplexMatrix::Zero(sys.dim(), sys.dim());
    for (Eigen::Index j = 0; j < sys.dim(); ++j) {
      if (sys.slots[j].cls == SlotClass::Real) {
        comp += double(sign_of(j)) * sys.psi.col(j) * sys.psi.col(j).transpose();
      } else {
        comp += sys.phi.col(j).conjugate() * sys.psi.col(j).transpose();
      }
    }
    r.add("comp1", 0, relative_residual(comp * psi, psi, max_abs(comp) * npsi), lin);
  }

  const auto ops = build_ptc(sys, sigma);
  const ComplexMatrix& eta = ops.eta_plus.matrix;
  const ComplexMatrix& C = ops.C;
  const double neta = max_abs(eta), nP = max_abs(P), nC = max_abs(C);

  r.add("P-ph", 0, relative_residual(P * psi, ComplexMatrix(phi * d), nP * npsi), lin);
  r.add("T=", 0, relative_residual(model.T.apply(psi), ops.T.apply(psi), max_abs(ops.T.matrix) * npsi), lin);
  r.add("PT=", 0, relative_residual(model.T.apply(ComplexMatrix(P * psi)), ops.PT.apply(psi),
                                    std::max(nP, max_abs(ops.PT.matrix)) * npsi), lin);
  r.add("eta-inv", 0, relative_residual(ops.Lambda * eta * psi, psi, max_abs(ops.Lambda) * neta * npsi), lin);
  r.add("C", 0, relative_residual(C * psi, ComplexMatrix(psi * d), nC * npsi), lin);
  {
    const ComplexMatrix kernel = sys.psi * sys.psi.transpose();
    r.add("C2", 0, relative_residual(kernel * psi, ComplexMatrix(psi * d), max_abs(kernel) * npsi), lin);
  }
  r.add("C=def", 0, relative_residual(eta * C * psi, P * psi, neta * nC * npsi), lin);
  r.add("T-eta=CPT", 0, relative_residual(model.T.apply(ComplexMatrix(eta * psi)), ops.CPT.apply(psi),
                                     std::max(neta, max_abs(ops.CPT.matrix)) * npsi), lin);
  {
    const ComplexMatrix position = ops.CPT.apply(psi).transpose() * psi;
    const ComplexMatrix metric = psi.adjoint() * eta * psi;
    r.add("position-metric", 0, relative_residual(position, metric, neta * npsi * npsi), lin);
    r.add("ortho-cpt", 0, relative_residual(metric, id, neta * npsi * npsi), lin);
  }
  r.add("phi=P-psi", 0, relative_residual(phi, ComplexMatrix(P * psi * d), std::max(nphi, npsi)), lin);
  {
    const ComplexMatrix g = psi.adjoint() * psi;
    const ComplexMatrix gp = phi.adjoint() * phi;
    r.add("gram-sym", 0, relative_residual(g, ComplexMatrix(g.transpose()), max_abs(g)), lin);
    r.add("gram-P", 0, relative_residual(gp, ComplexMatrix(d * g * d), std::max(max_abs(g), max_abs(gp))), lin);
  }
  r.add("zz1", 0, relative_residual(ops.P.matrix * psi, P * psi, std::max(max_abs(ops.P.matrix), nP) * npsi), lin);
  r.add("zz2", 0, relative_residual(ops.T.apply(psi), model.T.apply(psi), max_abs(ops.T.matrix) * npsi), lin);
  return r;
}

// ---------------------------------------------------------------------------

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u == 0.0) u = uniform();
  const double v = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u));
  spare_ = rad * std::sin(2.0 * std::numbers::pi * v);
  has_spare_ = true;
  return rad * std::cos(2.0 * std::numbers::pi * v);
}

std::complex<double> Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix random_similarity(int n, Rng& rng, double max_condition) {
  ComplexMatrix g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) g(r, c) = rng.complex_normal();
  Eigen::JacobiSVD<ComplexMatrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  const double top = s(0);
  for (Eigen::Index k = 0; k < s.size(); ++k) s(k) = std::max(s(k), top / max_condition);
  return svd.matrixU() * s.cast<std::complex<double>>().asDiagonal() * svd.matrixV().adjoint();
}

ComplexMatrix similarity_transform(const ComplexMatrix& a, const ComplexVector& spectrum) {
  require_square(a, "A");
  if (a.rows() != spectrum.size()) throw Error(ErrorCode::ShapeMismatch, "spectrum length differs from A");
  return a * spectrum.asDiagonal() * a.partialPivLu().inverse();
}

ComplexMatrix random_quasi_hermitian(int n, const std::vector<double>& spectrum, std::uint64_t seed) {
  if (n != static_cast<int>(spectrum.size())) throw Error(ErrorCode::ShapeMismatch, "spectrum length differs from n");
  Rng rng(seed);
  const ComplexMatrix a = random_similarity(n, rng);
  ComplexVector e(n);
  for (int k = 0; k < n; ++k) e(k) = spectrum[k];
  return similarity_transform(a, e);
}

ComplexMatrix random_pseudo_hermitian(const std::vector<double>& reals, const std::vector<std::complex<double>>& pairs,
                                      std::uint64_t seed) {
  const int n = static_cast<int>(reals.size() + 2 * pairs.size());
  ComplexVector e(n);
  int k = 0;
  for (double x : reals) e(k++) = x;
  for (auto z : pairs) {
    if (!(z.imag() > 0)) throw Error(ErrorCode::RangeError, "pair representatives need Im > 0");
    e(k++) = z;
    e(k++) = std::conj(z);
  }
  Rng rng(seed);
  return similarity_transform(random_similarity(n, rng), e);
}

ComplexMatrix random_pseudo_hermitian(int n_real, const std::vector<std::complex<double>>& pairs, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0xC0FFEE));
  std::vector<double> reals;
  for (int k = 0; k < n_real; ++k) reals.push_back(k + rng.uniform(-0.3, 0.3));
  return random_pseudo_hermitian(reals, pairs, seed);
}

}  // namespace phtk
