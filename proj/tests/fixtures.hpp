// Small hand-checked systems shared by the unit tests.
#pragma once

#include "phtk/ptc.hpp"

#include <catch_amalgamated.hpp>

#include <random>

namespace fx {

using namespace phtk;
using cd = std::complex<double>;
using M = ComplexMatrix;
using V = ComplexVector;

constexpr double kTol = 1e-10;
const cd I1{0.0, 1.0};

inline M mat(std::initializer_list<std::initializer_list<cd>> rows) {
  M m(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (auto r : rows) {
    Eigen::Index j = 0;
    for (auto v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline V vec(std::initializer_list<cd> v) {
  V out(v.size());
  Eigen::Index i = 0;
  for (auto x : v) out(i++) = x;
  return out;
}

/// H = diag(1, 2), Ψ = I.
inline BiorthonormalSystem<double> diag12() {
  return make_biorthonormal<double>(mat({{1, 0}, {0, 2}}), M::Identity(2, 2), kTol);
}

/// H = [[1,1],[0,2]], ψ₁ = (1,0), ψ₂ = (1,1); then φ₁ = (1,−1), φ₂ = (0,1).
inline BiorthonormalSystem<double> upper() {
  return make_biorthonormal<double>(mat({{1, 1}, {0, 2}}), mat({{1, 1}, {0, 1}}), kTol);
}

/// H = [[0,1],[−1,0]], ψ± = (1, ±i); sorted order puts −i first.
inline BiorthonormalSystem<double> plus_minus_i() {
  return make_biorthonormal<double>(mat({{0, 1}, {-1, 0}}), mat({{1, 1}, {I1, -I1}}), kTol);
}

inline SignSequence signs(std::initializer_list<int> s) { return SignSequence{std::vector<int>(s)}; }

inline double dist(const M& a, const M& b) { return max_abs(M(a - b)); }

}  // namespace fx
