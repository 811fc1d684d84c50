#include "fixtures.hpp"

using namespace fx;

namespace {

M random_complex(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  M a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cd(g(rng), g(rng));
  return a;
}

}  // namespace

TEST_CASE("antilinear application and composition", "[antilinear]") {
  const AntilinearOperator<double> conj{M::Identity(2, 2)};
  CHECK(dist(conj.apply(vec({I1, 0})), vec({-I1, 0})) == 0.0);

  const AntilinearOperator<double> flip{mat({{1, 0}, {0, -1}})};
  CHECK(dist(flip.apply(vec({1, I1})), vec({1, I1})) == 0.0);

  const V x = vec({cd(1, 2), cd(-3, 0.5)});
  CHECK(dist(conj.apply(conj.apply(x)), x) == 0.0);
  CHECK(dist(compose(conj, conj), M::Identity(2, 2)) == 0.0);

  std::mt19937_64 rng(3);
  const AntilinearOperator<double> a{random_complex(rng, 3)}, b{random_complex(rng, 3)};
  const M l = random_complex(rng, 3);
  const V y = random_complex(rng, 3).col(0);
  CHECK(dist(compose(a, b) * y, a.apply(b.apply(y))) < 1e-12);
  CHECK(dist(compose(l, a).apply(y), l * a.apply(y)) < 1e-12);
  CHECK(dist(compose(a, l).apply(y), a.apply(V(l * y))) < 1e-12);
  CHECK(dist(inverse(a).apply(a.apply(y)), y) < 1e-12);
  CHECK_THROWS_AS(a.apply(vec({1})), Error);
}

TEST_CASE("tau_plus on the hand examples", "[antilinear]") {
  CHECK(dist(tau_plus(diag12()).matrix, M::Identity(2, 2)) == 0.0);

  const auto up = upper();
  const auto t = tau_plus(up);
  CHECK(dist(t.matrix, mat({{1, -1}, {-1, 2}})) < 1e-14);
  CHECK(is_anti_pseudo_hermitian(up.hamiltonian, t, 1e-14).holds);

  const auto pm = plus_minus_i();
  const auto tp = tau_plus(pm);
  CHECK(dist(tp.matrix, M(tp.matrix.transpose())) == 0.0);
  CHECK(is_anti_pseudo_hermitian(pm.hamiltonian, tp, 1e-14).holds);
}

TEST_CASE("tau_sigma keeps pair terms diagonal", "[antilinear]") {
  CHECK(dist(tau_sigma(upper(), signs({1, 1})).matrix, tau_plus(upper()).matrix) == 0.0);
  CHECK(dist(tau_sigma(diag12(), signs({1, -1})).matrix, mat({{1, 0}, {0, -1}})) == 0.0);

  const auto pm = plus_minus_i();
  const M diag_form = pm.phi.col(0) * pm.phi.col(0).transpose() + pm.phi.col(1) * pm.phi.col(1).transpose();
  const M cross_form = pm.phi.col(0) * pm.phi.col(1).transpose() + pm.phi.col(1) * pm.phi.col(0).transpose();
  const auto ts = tau_sigma(pm, SignSequence{});
  CHECK(dist(ts.matrix, diag_form) < 1e-15);
  CHECK(dist(ts.matrix, cross_form) > 0.1);
  CHECK(is_anti_pseudo_hermitian(pm.hamiltonian, ts, 1e-14).holds);
  CHECK_FALSE(is_anti_pseudo_hermitian(pm.hamiltonian, AntilinearOperator<double>{cross_form}, 1e-6).holds);
}

TEST_CASE("tau_plus_inverse composes to the identity", "[antilinear]") {
  CHECK(dist(tau_plus_inverse(diag12()).matrix, M::Identity(2, 2)) == 0.0);
  for (const auto& sys : {upper(), plus_minus_i()}) {
    const auto t = tau_plus(sys), ti = tau_plus_inverse(sys);
    CHECK(dist(compose(t, ti), M::Identity(2, 2)) < 1e-14);
    CHECK(dist(compose(ti, t), M::Identity(2, 2)) < 1e-14);
    CHECK(dist(ti.matrix, inverse(t).matrix) < 1e-14);
  }
}

TEST_CASE("anti-pseudo-Hermiticity predicate", "[antilinear]") {
  CHECK(is_anti_pseudo_hermitian<double>(mat({{1, 2}, {2, -1}}), {M::Identity(2, 2)}, kTol).holds);
  CHECK(is_anti_pseudo_hermitian<double>(mat({{1, 1}, {0, 2}}), {mat({{1, -1}, {-1, 2}})}, kTol).holds);
  // 1+i has no conjugate partner, so no symmetric invertible M fits
  const M h = mat({{cd(1, 1), 0}, {0, 2}});
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    M m = random_complex(rng, 2);
    m = (m + m.transpose()).eval();
    CHECK_FALSE(is_anti_pseudo_hermitian<double>(h, {m}, 1e-6).holds);
  }
  CHECK_THROWS_AS(is_anti_pseudo_hermitian<double>(h, {M::Identity(3, 3)}, kTol), Error);
}

TEST_CASE("Takagi factorization of random symmetric matrices", "[antilinear]") {
  std::mt19937_64 rng(17);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    M x = random_complex(rng, n);
    x = (x + x.transpose()).eval();
    const auto t = takagi(x);
    CHECK(dist(t.u.adjoint() * t.u, M::Identity(n, n)) < 1e-13);
    const M back = t.u * t.singular_values.cast<cd>().asDiagonal() * t.u.transpose();
    CHECK(max_abs(M(back - x)) <= 100 * eps * max_abs(x));
    const M a = takagi_root(x, kTol);
    CHECK(max_abs(M(a.transpose() * a - x)) <= 100 * eps * max_abs(x));
    // independent cross-check: Takagi values are the singular values
    Eigen::JacobiSVD<M> svd(x);
    CHECK((t.singular_values - svd.singularValues()).cwiseAbs().maxCoeff() <= 100 * eps * max_abs(x));
  }
}

TEST_CASE("decompose_tau on hand examples", "[antilinear]") {
  const auto up = upper();
  CHECK(dist(decompose_tau(up, tau_plus(up), kTol), M::Identity(2, 2)) < 1e-13);

  const auto d = diag12();
  CHECK(dist(decompose_tau<double>(d, {mat({{4, 0}, {0, 9}})}, kTol), mat({{2, 0}, {0, 3}})) < 1e-14);
  // principal branch: the square root of −1 is +i
  CHECK(dist(decompose_tau<double>(d, {mat({{-1, 0}, {0, 1}})}, kTol), mat({{I1, 0}, {0, 1}})) < 1e-14);
}

TEST_CASE("decompose_tau roundtrip and errors", "[antilinear]") {
  const auto pm = plus_minus_i();
  const M a0 = pm.psi * mat({{cd(2, 1), 0}, {0, cd(0.5, -1)}}) * pm.phi.adjoint();
  const AntilinearOperator<double> tau{a0.adjoint() * tau_plus(pm).matrix * a0.conjugate()};
  const M a = decompose_tau(pm, tau, kTol);
  CHECK(dist(a.adjoint() * tau_plus(pm).matrix * a.conjugate(), tau.matrix) < 1e-13);
  CHECK(dist(a * pm.hamiltonian, pm.hamiltonian * a) < 1e-13);

  const auto d = diag12();
  const auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::RangeError;
  };
  CHECK(code_of([&] { decompose_tau<double>(d, {mat({{1, 0}, {0, 0}})}, kTol); }) == ErrorCode::NotInvertible);
  // degenerate block: a skew part passes the commutation test but is not symmetric
  const auto deg = make_biorthonormal<double>(M::Identity(2, 2), M::Identity(2, 2), kTol);
  CHECK(code_of([&] { decompose_tau<double>(deg, {mat({{1, 1}, {-1, 1}})}, kTol); }) == ErrorCode::BlockNotSymmetric);
}
