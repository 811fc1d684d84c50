#include "phtk/suite.hpp"

#include "phtk/parallel.hpp"

namespace phtk {

namespace {

using cd = std::complex<double>;

int member_dim(const SuiteOptions& opt, int index) {
  if (!opt.vary_dim) return opt.dim;
  if (opt.ensemble == Ensemble::Pseudo) return opt.dim < 3 ? std::max(2, opt.dim) : 2 + index % (opt.dim - 1);
  return 1 + index % std::max(1, opt.dim);
}

ComplexMatrix real_signs(const BiorthonormalSystem<double>& sys, const SignSequence& s) {
  return detail::column_signs(sys, s).cast<cd>().asDiagonal();
}

SignSequence random_signs(const BiorthonormalSystem<double>& sys, Rng& rng) {
  SignSequence s;
  for (std::size_t k = 0; k < sys.real_slots().size(); ++k) s.signs.push_back(rng.sign());
  return s;
}

/// Ψ·diag(c)·Φ† with |c| ∈ [0.5, 2]; commutes with a nondegenerate H.
ComplexMatrix random_symmetry(const BiorthonormalSystem<double>& sys, Rng& rng) {
  ComplexVector c(sys.dim());
  for (Eigen::Index j = 0; j < sys.dim(); ++j)
    c(j) = std::polar(rng.uniform(0.5, 2.0), rng.uniform(-std::numbers::pi, std::numbers::pi));
  return sys.psi * c.asDiagonal() * sys.phi.adjoint();
}

void check_actions(CheckReport& r, const BiorthonormalSystem<double>& sys, const SignSequence& alt, double tol) {
  const auto expect = [&](const std::vector<SymmetryAction>& acts, const SignSequence& sigma) {
    const auto d = detail::column_signs(sys, sigma);
    int bad = 0;
    for (Eigen::Index j = 0; j < sys.dim(); ++j) {
      const auto& a = acts[j];
      if (sys.slots[j].cls == SlotClass::Real)
        bad += !(a.kind == ActionKind::Exact && a.sign == static_cast<int>(d(j)));
      else
        bad += !(a.kind == ActionKind::Swap && a.partner == sys.slots[j].partner);
    }
    return bad;
  };
  try {
    const int bad = expect(symmetry_action(canonical_X(sys, all_plus(sys)), sys, tol), all_plus(sys));
    r.add("action-X+", 0, bad, 0.0, "Exact(+) on real slots, Swap on pairs");
  } catch (const Error& e) {
    r.add("action-X+", 0, 1.0, 0.0, e.what());
  }
  try {
    const int bad = expect(symmetry_action(canonical_X(sys, alt), sys, tol), alt);
    r.add("action-Xalt", 0, bad, 0.0, "Exact(sigma) on real slots, Swap on pairs");
  } catch (const Error& e) {
    r.add("action-Xalt", 0, 1.0, 0.0, e.what());
  }
}

void check_roundtrip(CheckReport& r, const BiorthonormalSystem<double>& sys, Rng& rng, const SuiteThresholds& t) {
  const ComplexMatrix& h = sys.hamiltonian;
  const double nh = max_abs(h);
  const ComplexMatrix a0 = random_symmetry(sys, rng);
  const SignSequence s0 = random_signs(sys, rng);
  try {
    const ComplexMatrix eta = a0.adjoint() * eta_sigma(sys, s0).matrix * a0;
    const auto d = decompose_eta(sys, eta, t.tol);
    const ComplexMatrix es = eta_sigma(sys, d.sigma).matrix;
    const double na = max_abs(d.a);
    r.add("rt-eta", 6, relative_residual(d.a.adjoint() * es * d.a, eta, std::max(max_abs(eta), na * na * max_abs(es))),
          t.roundtrip);
    r.add("rt-eta-comm", 6, relative_residual(d.a * h, h * d.a, na * nh), t.roundtrip);
  } catch (const Error& e) {
    r.add("rt-eta", 6, 1.0, t.roundtrip, e.what());
  }
  try {
    const ComplexMatrix tp = tau_plus(sys).matrix;
    const AntilinearOperator<double> tau{a0.adjoint() * tp * a0.conjugate()};
    const ComplexMatrix a = decompose_tau(sys, tau, t.tol);
    const double na = max_abs(a);
    r.add("rt-tau", 6,
          relative_residual(a.adjoint() * tp * a.conjugate(), tau.matrix,
                            std::max(max_abs(tau.matrix), na * na * max_abs(tp))),
          t.roundtrip);
    r.add("rt-tau-comm", 6, relative_residual(a * h, h * a, na * nh), t.roundtrip);
  } catch (const Error& e) {
    r.add("rt-tau", 6, 1.0, t.roundtrip, e.what());
  }
}

/// Predicate against direct squaring for each sign choice; commu when both hold.
void check_predicates(CheckReport& r, const BiorthonormalSystem<double>& sys, Rng& rng, const SuiteThresholds& t,
                      const std::string& prefix) {
  const std::vector<std::pair<std::string, SignSequence>> choices = {
      {"plus", all_plus(sys)}, {"alt", alternating(sys)}, {"rand", random_signs(sys, rng)}};
  const double p = t.predicate;
  for (const auto& [name, sigma] : choices) {
    const auto ct = involution_conditions_tau(sys, sigma, p);
    const auto st = is_involution_antilinear(tau_sigma(sys, sigma), p);
    const auto ce = involution_conditions_eta(sys, sigma, p);
    const auto se = is_involution_linear(eta_sigma(sys, sigma).matrix, p);
    const auto verdicts = [](auto a, auto b) {
      return std::string("predicate ") + (a.holds ? "holds" : "fails") + ", squaring " + (b.holds ? "holds" : "fails");
    };
    r.add(prefix + "pred-tau/" + name, 7, ct.holds == st.holds ? 0.0 : 1.0, 0.0, verdicts(ct, st));
    r.add(prefix + "pred-eta/" + name, 7, ce.holds == se.holds ? 0.0 : 1.0, 0.0, verdicts(ce, se));
    r.flags[prefix + "tau-inv/" + name] = st.holds;
    r.flags[prefix + "eta-inv/" + name] = se.holds;
    if (ct.holds && ce.holds)
      r.add(prefix + "commu/" + name, 7, check_commu(sys, sigma, p).residual, t.identity);
    else
      r.skip(prefix + "commu/" + name, 7, "needs both involutions");
  }
}

}  // namespace

const char* to_string(Ensemble e) { return e == Ensemble::Quasi ? "quasi" : "pseudo"; }

Ensemble parse_ensemble(const std::string& s) {
  if (s == "quasi") return Ensemble::Quasi;
  if (s == "pseudo") return Ensemble::Pseudo;
  throw Error(ErrorCode::RangeError, "ensemble must be quasi or pseudo, got '" + s + "'");
}

Member make_member(const SuiteOptions& opt, int index) {
  if (opt.dim < 1 || opt.dim > 16) throw Error(ErrorCode::RangeError, "dim must lie in [1, 16]");
  Member m;
  m.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(index));
  const int n = member_dim(opt, index);
  Rng rng(derive_seed(m.seed, 1));
  if (opt.ensemble == Ensemble::Quasi || n < 2) {
    std::vector<double> spectrum;
    for (int k = 0; k < n; ++k) spectrum.push_back(k + rng.uniform(-0.3, 0.3));
    m.h = random_quasi_hermitian(n, spectrum, m.seed);
    return m;
  }
  m.pairs = 1 + static_cast<int>(rng.uniform() * (n / 2));
  m.pairs = std::min(m.pairs, n / 2);
  std::vector<cd> pairs;
  for (int k = 0; k < m.pairs; ++k) pairs.emplace_back(k + rng.uniform(-0.3, 0.3), rng.uniform(0.5, 2.5));
  m.h = random_pseudo_hermitian(n - 2 * m.pairs, pairs, m.seed);
  return m;
}

CheckReport check_member(const ComplexMatrix& h, Ensemble ensemble, std::uint64_t seed, const SuiteOptions& opt) {
  const SuiteThresholds& t = opt.thresholds;
  CheckReport r;
  try {
    const auto sys = eig_biorthonormal(h, t.tol);
    const auto cls = classify_spectrum(sys);
    // a scalar cannot carry a pair
    const bool want_real = ensemble == Ensemble::Quasi || h.rows() < 2;
    r.add("class", 0, cls.kind == (want_real ? SpectrumKind::Real : SpectrumKind::ConjugatePaired) ? 0.0 : 1.0, 0.0,
          to_string(cls.kind));
    if (cls.kind == SpectrumKind::Unpaired) return r;

    r.merge(verify_lemma1(sys, t.tol), "items:");

    const auto ops = build_ptc(sys);
    const SignSequence alt = alternating(sys);
    const ComplexMatrix& eta = ops.eta_plus.matrix;
    const ComplexMatrix& C = ops.C;
    const ComplexMatrix I = ComplexMatrix::Identity(sys.dim(), sys.dim());
    const double nh = max_abs(h), neta = max_abs(eta), nC = max_abs(C), npsi = max_abs(sys.psi);

    r.add("ph", 3, is_pseudo_hermitian(h, eta, t.ph).residual, t.ph);
    if (cls.is_real()) {
      r.add_lower_bound("eta-pd", 2, min_hermitian_eigenvalue(eta), 10 * t.tol * neta, "smallest eigenvalue");
      r.add("cpt-gram", 2, relative_residual(sys.psi.adjoint() * eta * sys.psi, I, neta * npsi * npsi), t.identity);
    }
    r.add("C2", 5, relative_residual(C * C, I, nC * nC), t.identity);
    {
      const double npt = max_abs(ops.PT.matrix);
      r.add("PT2", 5, relative_residual(compose(ops.PT, ops.PT), I, npt * npt), t.identity);
    }
    r.add("C-comm", 4, relative_residual(C * h, h * C, nC * nh), t.identity);
    r.add("C-psi", 4, relative_residual(C * sys.psi, ComplexMatrix(sys.psi * real_signs(sys, alt)), nC * npsi),
          t.identity, "C psi_n = (-1)^n psi_n, identity on pair slots");
    r.add("route", 0, route_residual(sys, alt), 100 * t.tol);
    {
      const auto x = canonical_X(sys, alt);
      const double nx = max_abs(x.matrix);
      r.add("X2", 0, relative_residual(compose(x, x), I, nx * nx), t.identity);
    }
    check_actions(r, sys, alt, t.tol);

    Rng rng(derive_seed(seed, 2));
    if (opt.roundtrip) check_roundtrip(r, sys, rng, t);
    check_predicates(r, sys, rng, t, "");

    if (opt.companion) {
      // same spectrum, unitary eigenbasis: both involution predicates hold
      const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(sys.psi).householderQ();
      const ComplexMatrix hu = q * sys.column_eigenvalues().asDiagonal() * q.adjoint();
      const auto uni = make_biorthonormal(hu, q, t.tol);
      check_predicates(r, uni, rng, t, "u:");
    }
  } catch (const std::exception& e) {
    r.add("error", 0, 1.0, 0.0, e.what());
  }
  return r;
}

std::size_t SuiteResult::passed() const {
  std::size_t k = 0;
  for (const auto& m : members) k += m.passed();
  return k;
}

std::map<std::string, TagSummary> SuiteResult::by_tag() const {
  std::map<std::string, TagSummary> out;
  for (const auto& m : members)
    for (const auto& e : m.report.entries) {
      if (e.status == CheckStatus::Skipped) continue;
      auto& s = out[e.tag];
      ++s.evaluated;
      s.failures += e.status == CheckStatus::Fail;
      s.threshold = e.threshold;
      // NaN residuals count as worst
      if (!(e.residual <= s.worst)) s.worst = e.residual;
    }
  return out;
}

SuiteResult run_suite(const SuiteOptions& opt) {
  if (opt.count < 0) throw Error(ErrorCode::RangeError, "count must be non-negative");
  if (opt.dim < 1 || opt.dim > 16) throw Error(ErrorCode::RangeError, "dim must lie in [1, 16]");
  SuiteResult res;
  res.options = opt;
  res.members.resize(static_cast<std::size_t>(opt.count));
  parallel_for(
      res.members.size(),
      [&](std::size_t i) {
        const Member m = make_member(opt, static_cast<int>(i));
        auto& out = res.members[i];
        out.index = static_cast<int>(i);
        out.seed = m.seed;
        out.dim = static_cast<int>(m.h.rows());
        out.pairs = m.pairs;
        out.report = check_member(m.h, opt.ensemble, m.seed, opt);
      },
      opt.threads > 0 ? opt.threads : thread_cap());
  return res;
}

}  // namespace phtk
