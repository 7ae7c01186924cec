#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bilqctrl/errors.hpp"
#include "bilqctrl/linalg.hpp"
#include "helpers.hpp"

using namespace bilqctrl;

TEST_CASE("exponential of the zero matrix is the identity") {
  const ComplexMatrix z = ComplexMatrix::Zero(4, 4);
  const ComplexMatrix e = expm_skew(z, 1.7);
  CHECK((e - ComplexMatrix::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("exponential of a diagonal skew matrix gives exact phases") {
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = Complex(0.0, -1.0);
  d(1, 1) = Complex(0.0, -4.0);
  d(2, 2) = Complex(0.0, -9.0);
  const double t = 0.37;
  const ComplexMatrix e = expm_skew(d, t);
  for (int k = 0; k < 3; ++k) {
    const Complex expected = std::polar(1.0, -t * (k + 1.0) * (k + 1.0));
    CHECK(std::abs(e(k, k) - expected) < 1e-14);
  }
  CHECK(std::abs(e(0, 1)) < 1e-14);
  CHECK(std::abs(e(2, 0)) < 1e-14);
}

TEST_CASE("real antisymmetric generator produces a plane rotation") {
  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 1) = 1.0;
  g(1, 0) = -1.0;
  const double theta = 0.83;
  const ComplexMatrix e = expm_skew(g, theta);
  CHECK(std::abs(e(0, 0) - std::cos(theta)) < 1e-13);
  CHECK(std::abs(e(0, 1) - std::sin(theta)) < 1e-13);
  CHECK(std::abs(e(1, 0) + std::sin(theta)) < 1e-13);
  CHECK(std::abs(e(1, 1) - std::cos(theta)) < 1e-13);
}

TEST_CASE("exponential matches a Taylor series oracle on random generators") {
  std::mt19937_64 rng(12345);
  for (int n : {1, 2, 3, 5, 8}) {
    for (double t : {0.0, 0.1, 1.0, -2.5, 7.3}) {
      const ComplexMatrix m = testref::random_skew_hermitian(rng, n);
      const ComplexMatrix got = expm_skew(m, t);
      const ComplexMatrix want = testref::expm_taylor(m, t);
      CHECK((got - want).norm() < 1e-12);
    }
  }
}

TEST_CASE("exponential of a skew generator is unitary") {
  std::mt19937_64 rng(777);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix m = testref::random_skew_hermitian(rng, 6);
    const ComplexMatrix e = expm_skew(m, 3.0 * testref::uniform01(rng) - 1.5);
    CHECK(is_unitary(e, kUnitarityTol));
    CHECK((e.adjoint() * e - ComplexMatrix::Identity(6, 6)).norm() < 1e-12);
  }
}

TEST_CASE("group law holds: exp((s+t)m) = exp(sm) exp(tm)") {
  std::mt19937_64 rng(31);
  const ComplexMatrix m = testref::random_skew_hermitian(rng, 5);
  const ComplexMatrix lhs = expm_skew(m, 1.9);
  const ComplexMatrix rhs = expm_skew(m, 1.2) * expm_skew(m, 0.7);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("mode cache reproduces the full exponential") {
  std::mt19937_64 rng(99);
  const ComplexMatrix m = testref::random_skew_hermitian(rng, 4);
  const SkewModes modes = skew_modes(m);
  const ComplexVector v = testref::random_state(rng, 4);
  for (double t : {0.4, 2.0, -1.1}) {
    const ComplexVector via_modes = apply_exp(modes, t, v);
    const ComplexVector direct = expm_skew(m, t) * v;
    CHECK((via_modes - direct).norm() < 1e-12);
  }
}

TEST_CASE("non-skew input is rejected with the tolerance in the message") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;  // symmetric, not antisymmetric
  try {
    expm_skew(m, 1.0);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1e-12") != std::string::npos);
  }
}

TEST_CASE("tiny symmetric perturbations inside the tolerance are accepted") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex(0.0, -0.5 + 1e-14);
  m(1, 0) = Complex(0.0, -0.5 - 1e-14);
  CHECK(is_skew_hermitian(m, kSkewHermitianTol));
  CHECK_NOTHROW(expm_skew(m, 1.0));
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(expm_skew(ComplexMatrix::Zero(0, 0), 1.0), ValidationError);
  CHECK_THROWS_AS(expm_skew(ComplexMatrix::Zero(2, 3), 1.0), ValidationError);
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(expm_skew(bad, 1.0), ValidationError);
  CHECK_THROWS_AS(skew_modes(bad), ValidationError);
}

TEST_CASE("adjoint conjugates and transposes") {
  ComplexMatrix m(2, 2);
  m << Complex(1, 2), Complex(3, -4), Complex(0, 5), Complex(-6, 0);
  const ComplexMatrix a = adjoint(m);
  CHECK(a(0, 0) == Complex(1, -2));
  CHECK(a(0, 1) == Complex(0, -5));
  CHECK(a(1, 0) == Complex(3, 4));
  CHECK(a(1, 1) == Complex(-6, 0));
}

TEST_CASE("matvec matches an explicit loop") {
  std::mt19937_64 rng(5);
  const ComplexMatrix m = testref::random_skew_hermitian(rng, 3);
  const ComplexVector v = testref::random_state(rng, 3);
  const ComplexVector got = matvec(m, v);
  for (int r = 0; r < 3; ++r) {
    Complex want(0.0, 0.0);
    for (int c = 0; c < 3; ++c) {
      want += m(r, c) * v[c];
    }
    CHECK(std::abs(got[r] - want) < 1e-15);
  }
  CHECK_THROWS_AS(matvec(m, ComplexVector::Zero(4)), ValidationError);
}

TEST_CASE("inner product is conjugate-linear in the first argument") {
  ComplexVector u(2), v(2);
  u << Complex(1, 1), Complex(0, 2);
  v << Complex(2, 0), Complex(1, -1);
  const Complex alpha(0.5, -1.5);
  CHECK(std::abs(inner(alpha * u, v) - std::conj(alpha) * inner(u, v)) < 1e-15);
  CHECK(std::abs(inner(u, alpha * v) - alpha * inner(u, v)) < 1e-15);
  CHECK(std::abs(inner(u, u).imag()) < 1e-15);
  CHECK(inner(u, u).real() == doctest::Approx(u.squaredNorm()).epsilon(1e-14));
  CHECK_THROWS_AS(inner(u, ComplexVector::Zero(3)), ValidationError);
}

TEST_CASE("mode frequencies of the molecule drift term are its level energies") {
  // -i diag(1, 4, 9) has modes exp(-i k^2 t)
  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = Complex(0.0, -1.0);
  d(1, 1) = Complex(0.0, -4.0);
  d(2, 2) = Complex(0.0, -9.0);
  SkewModes modes = skew_modes(d);
  std::vector<double> omega(modes.omega.data(), modes.omega.data() + 3);
  std::sort(omega.begin(), omega.end());
  CHECK(omega[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(omega[1] == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(omega[2] == doctest::Approx(9.0).epsilon(1e-13));
}
