#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sshent {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx I_unit{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

// Error hierarchy. Every failure the library reports derives from Error so
// sweep drivers can turn any per-point failure into an undefined cell.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameters : public Error {
 public:
  using Error::Error;
};

class InvalidSymmetry : public Error {
 public:
  using Error::Error;
};

class GaplessSpectrum : public Error {
 public:
  using Error::Error;
};

// Quadrature residual too large to round the invariant to an integer.
class Unconverged : public Error {
 public:
  using Error::Error;
};

class EmptySector : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

// A quantity that must be non-negative came out clearly negative.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace tol {
// Roundoff below this magnitude is silently clamped away.
inline constexpr double clamp = 1e-10;
// Negative values beyond this are treated as bugs, not roundoff.
inline constexpr double hard_negative = 1e-6;
}  // namespace tol

/// Clamp a quantity that is non-negative in exact arithmetic.
/// Throws NumericalError below -tol::hard_negative.
inline double clamp_nonnegative(double x, const char* what = "value") {
  if (x < -tol::hard_negative) {
    throw NumericalError(std::string(what) + " is negative beyond roundoff: " + std::to_string(x));
  }
  return std::max(x, 0.0);
}

inline CMatrix dagger(const CMatrix& m) { return m.adjoint(); }

inline double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

/// Square root of a Hermitian positive semidefinite matrix, computed spectrally.
inline CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  RVector s = es.eigenvalues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::sqrt(clamp_nonnegative(s(i), "eigenvalue"));
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

/// Kronecker product of two dense complex matrices.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace sshent
