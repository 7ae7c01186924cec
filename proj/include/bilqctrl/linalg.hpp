#pragma once

#include <complex>

#include <Eigen/Dense>

#include "bilqctrl/errors.hpp"

namespace bilqctrl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Tolerance for validating that an input matrix is skew-Hermitian.
inline constexpr double kSkewHermitianTol = 1e-12;
// Tolerance for the unitarity of computed matrix exponentials.
inline constexpr double kUnitarityTol = 1e-10;

bool is_finite(const ComplexMatrix& m);
bool is_finite(const ComplexVector& v);
bool is_skew_hermitian(const ComplexMatrix& m, double tol = kSkewHermitianTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitarityTol);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v);

// Hermitian inner product <u, v>, conjugate-linear in the first argument.
Complex inner(const ComplexVector& u, const ComplexVector& v);

// Spectral decomposition of a skew-Hermitian m, stored through the Hermitian
// matrix i*m = basis * diag(omega) * basis^dagger with real omega.
struct SkewModes {
  Eigen::VectorXd omega;
  ComplexMatrix basis;
};

SkewModes skew_modes(const ComplexMatrix& m);

// exp(t*m) * v without forming the full exponential.
ComplexVector apply_exp(const SkewModes& modes, double t, const ComplexVector& v);

// exp(t*m) for skew-Hermitian m, computed by diagonalizing i*m. The result
// is unitary up to kUnitarityTol.
ComplexMatrix expm_skew(const ComplexMatrix& m, double t);

}  // namespace bilqctrl
