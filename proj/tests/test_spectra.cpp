#include "fixtures.hpp"

using namespace fx;
using Catch::Matchers::WithinAbs;

TEST_CASE("diagonal input is its own eigenbasis", "[spectra]") {
  const auto sys = eig_biorthonormal<double>(mat({{1, 0}, {0, 2}}), kTol);
  REQUIRE(sys.group_count() == 2);
  CHECK(dist(sys.psi, M::Identity(2, 2)) < 1e-14);
  CHECK(dist(sys.phi, M::Identity(2, 2)) < 1e-14);
  CHECK_THAT(sys.eigenvalues(0).real(), WithinAbs(1.0, 1e-14));
  CHECK_THAT(sys.eigenvalues(1).real(), WithinAbs(2.0, 1e-14));
  CHECK(classify_spectrum(sys).is_real());
}

TEST_CASE("upper triangular example has the hand-inverted duals", "[spectra]") {
  const auto sys = upper();
  CHECK(dist(sys.phi, mat({{1, 0}, {-1, 1}})) < 1e-14);
  CHECK(dist(sys.phi.adjoint() * sys.psi, M::Identity(2, 2)) < 1e-14);
  CHECK(dist(reconstruct(sys), mat({{1, 1}, {0, 2}})) < 1e-14);

  // the solver's own eigenvectors are unit-norm rescalings of the same columns
  const auto solved = eig_biorthonormal<double>(mat({{1, 1}, {0, 2}}), kTol);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const V a = solved.psi.col(j), b = sys.psi.col(j);
    CHECK_THAT(std::abs(a.dot(b)) / (a.norm() * b.norm()), WithinAbs(1.0, 1e-14));
  }
  CHECK(dist(solved.phi.adjoint() * solved.psi, M::Identity(2, 2)) < 1e-13);
}

TEST_CASE("rotation generator gives a conjugate pair", "[spectra]") {
  const auto sys = plus_minus_i();
  REQUIRE(sys.group_count() == 2);
  // equal real parts: ascending imaginary part puts −i first
  CHECK_THAT(sys.eigenvalues(0).imag(), WithinAbs(-1.0, 1e-14));
  CHECK(sys.labels[0] == SlotClass::Minus);
  CHECK(sys.labels[1] == SlotClass::Plus);
  CHECK(sys.group_partner[0] == 1);
  CHECK(sys.slots[0].partner == 1);
  // φ± = (1/2, ±i/2)
  CHECK(dist(sys.phi.col(1), vec({0.5, 0.5 * I1})) < 1e-14);
  CHECK(dist(sys.phi.col(0), vec({0.5, -0.5 * I1})) < 1e-14);
  CHECK(classify_spectrum(sys).is_paired());
}

TEST_CASE("unmatched complex eigenvalue is unpaired", "[spectra]") {
  const auto sys = eig_biorthonormal<double>(mat({{cd(1, 1), 0}, {0, 2}}), kTol);
  const auto cls = classify_spectrum(sys);
  REQUIRE(cls.is_unpaired());
  REQUIRE(cls.witness.has_value());
  CHECK(std::abs(*cls.witness - cd(1, 1)) < 1e-14);
  CHECK_THROWS_AS(require_paired(sys), Error);
}

TEST_CASE("shape and diagonalizability gates", "[spectra]") {
  CHECK_THROWS_MATCHES(eig_biorthonormal<double>(M::Zero(2, 3), kTol), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::NonSquare; }));
  CHECK_THROWS_MATCHES(eig_biorthonormal<double>(mat({{1, 1}, {0, 1}}), kTol), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::NotDiagonalizable; }));
}

TEST_CASE("degenerate eigenvalues form one group", "[spectra]") {
  const auto sys = eig_biorthonormal<double>(mat({{2, 0, 0}, {0, 1, 0}, {0, 0, 2}}), kTol);
  REQUIRE(sys.group_count() == 2);
  CHECK(sys.multiplicities[0] == 1);
  CHECK(sys.multiplicities[1] == 2);
  CHECK(sys.slots[1].group == 1);
  CHECK(sys.slots[2].degeneracy == 1);
}

TEST_CASE("random similarity transforms satisfy the system invariants", "[spectra]") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 6;
    M a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = cd(g(rng), g(rng));
    V e(n);
    for (int k = 0; k < n; ++k) e(k) = cd(k + 0.5 * g(rng), 0.0);
    const M h = a * e.asDiagonal() * a.inverse();
    const auto sys = eig_biorthonormal<double>(h, kTol);
    CHECK(max_abs(M(sys.phi.adjoint() * sys.psi - M::Identity(n, n))) <= 10 * kTol);
    CHECK(max_abs(M(sys.psi * sys.phi.adjoint() - M::Identity(n, n))) <= 10 * kTol);
    CHECK(max_abs(M(reconstruct(sys) - h)) <= 10 * kTol * std::max(1.0, max_abs(h)));
    // determinism
    const auto again = eig_biorthonormal<double>(h, kTol);
    CHECK(again.labels == sys.labels);
    CHECK(dist(again.psi, sys.psi) == 0.0);
  }
}
