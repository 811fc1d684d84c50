#ifndef PHTK_TYPES_HPP
#define PHTK_TYPES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

namespace phtk {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;

enum class ErrorCode {
  NonSquare,
  ShapeMismatch,
  NotDiagonalizable,
  UnpairedSpectrum,
  SignDomainMismatch,
  NotAMetric,
  BlockNotHermitian,
  BlockNotSymmetric,
  NotInvertible,
  UnrecognizedAction,
  PreconditionUnmet,
  NotASymmetry,
  ComplexSpectrum,
  NuOutOfRange,
  QuadratureTooCoarse,
  PTPhaseNotFound,
  ParseError,
  RangeError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::UnpairedSpectrum: return "UnpairedSpectrum";
    case ErrorCode::SignDomainMismatch: return "SignDomainMismatch";
    case ErrorCode::NotAMetric: return "NotAMetric";
    case ErrorCode::BlockNotHermitian: return "BlockNotHermitian";
    case ErrorCode::BlockNotSymmetric: return "BlockNotSymmetric";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::UnrecognizedAction: return "UnrecognizedAction";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::NotASymmetry: return "NotASymmetry";
    case ErrorCode::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorCode::NuOutOfRange: return "NuOutOfRange";
    case ErrorCode::QuadratureTooCoarse: return "QuadratureTooCoarse";
    case ErrorCode::PTPhaseNotFound: return "PTPhaseNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeError: return "RangeError";
  }
  return "Unknown";
}

/// Every failure raised by the toolkit carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Largest entry modulus, the norm used by every residual in the toolkit.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (m.size() == 0) return Real(0);
  return m.cwiseAbs().maxCoeff();
}

/// ‖lhs − rhs‖_max / max(1, scale).
template <typename A, typename B>
typename Eigen::NumTraits<typename A::Scalar>::Real relative_residual(
    const Eigen::MatrixBase<A>& lhs, const Eigen::MatrixBase<B>& rhs,
    typename Eigen::NumTraits<typename A::Scalar>::Real scale) {
  using Real = typename Eigen::NumTraits<typename A::Scalar>::Real;
  return max_abs(lhs - rhs) / std::max(Real(1), scale);
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::NonSquare, std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()));
}

template <typename A, typename B>
void require_same_shape(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch, what);
}

template <typename Real>
CMatrix<Real> identity(Eigen::Index n) {
  return CMatrix<Real>::Identity(n, n);
}

}  // namespace phtk

#endif  // PHTK_TYPES_HPP
