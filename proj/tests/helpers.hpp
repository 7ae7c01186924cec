#pragma once

// Test-side reference implementations, deliberately independent of the
// library's algorithm choices.

#include <cmath>
#include <complex>
#include <random>

#include "bilqctrl/controls.hpp"
#include "bilqctrl/linalg.hpp"
#include "bilqctrl/propagation.hpp"

namespace testref {

// exp(t*m) by scaling-and-squaring a plain Taylor series. No spectral
// decomposition anywhere, so agreement with the library is meaningful.
inline bilqctrl::ComplexMatrix expm_taylor(const bilqctrl::ComplexMatrix& m, double t) {
  bilqctrl::ComplexMatrix x = m * t;
  int squarings = 0;
  double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    x *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  bilqctrl::ComplexMatrix term =
      bilqctrl::ComplexMatrix::Identity(m.rows(), m.cols());
  bilqctrl::ComplexMatrix sum = term;
  for (int k = 1; k <= 26; ++k) {
    term = (term * x) / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) {
    sum = sum * sum;
  }
  return sum;
}

// Final state under a piecewise-constant control, composing Taylor
// exponentials piece by piece.
inline bilqctrl::ComplexVector
propagate_taylor(const bilqctrl::ComplexMatrix& a, const bilqctrl::ComplexMatrix& b,
                 const bilqctrl::PiecewiseConstantControl& u, const bilqctrl::ComplexVector& psi0) {
  bilqctrl::ComplexVector state = psi0;
  for (int i = 0; i < u.n_pieces(); ++i) {
    const double width = u.breakpoints[i + 1] - u.breakpoints[i];
    state = expm_taylor(a + u.values[i] * b, width) * state;
  }
  return state;
}

// integral over [lo, hi] of f(t) dt, composite Simpson
template <typename Fn>
inline bilqctrl::Complex simpson_segment(Fn f, double lo, double hi, int panels) {
  const double h = (hi - lo) / (2.0 * panels);
  bilqctrl::Complex sum = f(lo) + f(hi);
  for (int i = 1; i < 2 * panels; ++i) {
    sum += f(lo + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return sum * (h / 3.0);
}

// one-period Fourier integral by quadrature; duty pulses integrate the
// carrier over the on-window only, so the discontinuity never enters the
// Simpson stencil
inline bilqctrl::Complex fourier_quadrature(const bilqctrl::PeriodicPulse& pulse, double omega,
                                            int panels = 4000) {
  if (pulse.shape == bilqctrl::PulseShape::kDuty) {
    auto carrier = [&](double t) { return pulse.amplitude * std::polar(1.0, omega * t); };
    return simpson_segment(carrier, 0.0, pulse.eta, panels);
  }
  auto f = [&](double t) { return pulse.value(t) * std::polar(1.0, omega * t); };
  return simpson_segment(f, 0.0, pulse.period, panels);
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bilqctrl::StateVector random_state(std::mt19937_64& rng, int n) {
  bilqctrl::StateVector v(n);
  for (int k = 0; k < n; ++k) {
    v[k] = bilqctrl::Complex(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
  }
  v /= v.norm();
  return v;
}

inline bilqctrl::ComplexMatrix random_skew_hermitian(std::mt19937_64& rng, int n) {
  bilqctrl::ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    m(r, r) = bilqctrl::Complex(0.0, 2.0 * uniform01(rng) - 1.0);
    for (int c = r + 1; c < n; ++c) {
      const bilqctrl::Complex z(2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0);
      m(r, c) = z;
      m(c, r) = -std::conj(z);
    }
  }
  return m;
}

}  // namespace testref
