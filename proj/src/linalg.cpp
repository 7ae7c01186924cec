#include "bilqctrl/linalg.hpp"

#include <cmath>
#include <sstream>

namespace bilqctrl {

namespace {

void require_nonempty_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() == 0 || m.cols() == 0) {
    std::ostringstream msg;
    msg << who << ": matrix must have positive dimension";
    throw ValidationError(msg.str());
  }
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << who << ": matrix must be square, got " << m.rows() << "x" << m.cols();
    throw ValidationError(msg.str());
  }
}

}  // namespace

bool is_finite(const ComplexMatrix& m) { return m.allFinite(); }

bool is_finite(const ComplexVector& v) { return v.allFinite(); }

bool is_skew_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  return (m + m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (!m.allFinite()) return false;
  ComplexMatrix defect = m.adjoint() * m;
  defect -= ComplexMatrix::Identity(m.rows(), m.cols());
  return defect.cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

ComplexVector matvec(const ComplexMatrix& m, const ComplexVector& v) {
  if (m.cols() != v.size()) {
    std::ostringstream msg;
    msg << "matvec: dimension mismatch, matrix is " << m.rows() << "x" << m.cols()
        << " but vector has size " << v.size();
    throw ValidationError(msg.str());
  }
  return m * v;
}

Complex inner(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) {
    std::ostringstream msg;
    msg << "inner: dimension mismatch, " << u.size() << " vs " << v.size();
    throw ValidationError(msg.str());
  }
  return u.dot(v);
}

SkewModes skew_modes(const ComplexMatrix& m) {
  require_nonempty_square(m, "skew_modes");
  if (!m.allFinite()) {
    throw ValidationError("skew_modes: matrix has non-finite entries");
  }
  if (!is_skew_hermitian(m, kSkewHermitianTol)) {
    std::ostringstream msg;
    msg << "skew_modes: matrix is not skew-Hermitian within " << kSkewHermitianTol;
    throw ValidationError(msg.str());
  }
  // i*m is Hermitian, so its eigendecomposition is unitary and exact to
  // rounding; the exponential inherits unitarity from it.
  ComplexMatrix h = Complex(0.0, 1.0) * m;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("skew_modes: eigendecomposition failed");
  }
  return SkewModes{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexVector apply_exp(const SkewModes& modes, double t, const ComplexVector& v) {
  ComplexVector coeffs = modes.basis.adjoint() * v;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= std::polar(1.0, -modes.omega[k] * t);
  }
  return modes.basis * coeffs;
}

ComplexMatrix expm_skew(const ComplexMatrix& m, double t) {
  SkewModes modes = skew_modes(m);
  ComplexVector phases(modes.omega.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::polar(1.0, -modes.omega[k] * t);
  }
  return modes.basis * phases.asDiagonal() * modes.basis.adjoint();
}

}  // namespace bilqctrl
