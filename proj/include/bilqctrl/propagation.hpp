#pragma once

#include <map>
#include <vector>

#include "bilqctrl/controls.hpp"
#include "bilqctrl/system.hpp"

namespace bilqctrl {

using StateVector = ComplexVector;

// Allowed drift of the state norm away from 1.
inline constexpr double kNormTol = 1e-9;

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  PiecewiseConstantControl control;
};

// Exact piecewise-constant flow for one (system, control) pair. The
// generator A + u B is diagonalized once per distinct control value and the
// decomposition cached, keyed by the value's bit pattern.
class Propagator {
 public:
  Propagator(const GalerkinSystem& sys, PiecewiseConstantControl control);

  const PiecewiseConstantControl& control() const { return control_; }
  double duration() const { return control_.duration(); }

  // Evolves psi from time `from` to time `to`, 0 <= from <= to <= duration.
  StateVector evolve(const StateVector& psi, double from, double to) const;

 private:
  const SkewModes& modes_for(double u) const;

  int n_levels_;
  ComplexMatrix a_;
  ComplexMatrix b_;
  PiecewiseConstantControl control_;
  mutable std::map<double, SkewModes> cache_;
};

StateVector basis_state(int n_levels, int level);
std::vector<double> linspace(double lo, double hi, int count);

// Evolves psi0 and records the state at each sample time. Sample times must
// be non-decreasing and lie in [0, duration]. psi0 must have unit norm
// within kNormTol.
Trajectory propagate(const GalerkinSystem& sys, const PiecewiseConstantControl& u,
                     const StateVector& psi0, const std::vector<double>& sample_times);

StateVector propagate_final(const GalerkinSystem& sys, const PiecewiseConstantControl& u,
                            const StateVector& psi0);

// E(psi) = sum_k spectrum[k] |psi_k|^2, the quadratic form of i*A.
double energy(const GalerkinSystem& sys, const StateVector& psi);

// dE/dt along the flow with control value u: 2 u Re<iA psi, B psi>.
double energy_rate(const GalerkinSystem& sys, double u, const StateVector& psi);

struct EnergyRateCheck {
  double lhs = 0.0;  // centered finite difference of E at t
  double rhs = 0.0;  // analytic rate at t
};

// Compares the finite-difference energy slope against the analytic rate at
// an interior time t. The stencil [t-dt, t+dt] must not cross a control
// breakpoint.
EnergyRateCheck energy_rate_check(const GalerkinSystem& sys, const PiecewiseConstantControl& u,
                                  const StateVector& psi0, double t, double dt);

// (sum_k spectrum[k]^s |psi_k|^2)^(1/2). Requires s >= 0; s > 0 rejects
// systems with a zero eigenvalue.
double sobolev_norm(const GalerkinSystem& sys, const StateVector& psi, double s);

// Propagates psi0_small under both truncations and returns the largest
// distance max_t || psi_large(t) - embed(psi_small(t)) || over the sample
// times. sys_small must be an exact truncation of sys_large.
double galerkin_compare(const GalerkinSystem& sys_small, const GalerkinSystem& sys_large,
                        const PiecewiseConstantControl& u, const StateVector& psi0_small,
                        const std::vector<double>& sample_times);

// Frobenius distance between the adjoint of the propagator of (A, B) under u
// and the propagator of (-A, -B) under the time-reversed control.
double time_reversal_check(const GalerkinSystem& sys, const PiecewiseConstantControl& u);

}  // namespace bilqctrl
