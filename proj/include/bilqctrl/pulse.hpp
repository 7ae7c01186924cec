#pragma once

#include "bilqctrl/propagation.hpp"
#include "bilqctrl/transitions.hpp"

namespace bilqctrl {

// A Fourier coefficient below this magnitude counts as vanishing.
inline constexpr double kResonanceVanishTol = 1e-12;

// |lambda_j - lambda_k|; levels must differ.
double transition_gap(const GalerkinSystem& sys, int j, int k);

// Period-matched pulse prototypes for the (j, k) transition: the pulse
// period is 2*pi / gap, so the carrier sits exactly on the transition line.
PeriodicPulse make_cosine_pulse(const GalerkinSystem& sys, int j, int k, double amplitude = 1.0);
PeriodicPulse make_duty_pulse(const GalerkinSystem& sys, int j, int k, double eta,
                              double amplitude = 1.0);

// integral over one period of pulse(t) * exp(i * omega * t) dt, closed form.
Complex fourier_coefficient(const PeriodicPulse& pulse, double omega);

// True iff the pulse's coefficient vanishes (within kResonanceVanishTol) at
// every gap frequency in the resonance set.
bool check_resonance_vanishing(const PeriodicPulse& pulse, const ResonanceSet& resonances,
                               const GalerkinSystem& sys);

// T* = pi * T / (2 |b_jk| |c|) with c the pulse coefficient at the
// transition frequency. The averaged two-level dynamics completes the
// population swap at this time.
double critical_time(const GalerkinSystem& sys, int j, int k, const PeriodicPulse& pulse);

struct PulseSchedule {
  LevelPair pair{0, 0};
  double period = 0.0;
  Complex fourier_coeff{0.0, 0.0};
  double t_star = 0.0;
  int n = 1;
  double window_lo = 0.0;  // n*T* - T
  double window_hi = 0.0;  // n*T* + T
  double t_star_n = 0.0;   // argmax of fidelity inside the window
  double fidelity = 0.0;   // |<phi_k, state at t_star_n>| starting from phi_j
  double l1_cost = 0.0;    // L1 norm of the applied control over [0, t_star_n]
  int steps_per_period = kDefaultStepsPerPeriod;
};

struct FidelityScan {
  std::vector<double> times;
  std::vector<double> fidelities;
};

// Discretizes pulse/n over [0, n*T* + T], scans the transfer fidelity on a
// dense grid inside the window and refines the peak by golden-section
// search. Requires (j, k) non-degenerate, the pulse period matched to the
// transition, and vanishing coefficients on the resonance set.
PulseSchedule find_optimal_time(const GalerkinSystem& sys, int j, int k,
                                const PeriodicPulse& pulse, int n,
                                int steps_per_period = kDefaultStepsPerPeriod,
                                FidelityScan* scan = nullptr);

// The control a schedule actually applied: pulse scaled by 1/n, discretized
// over [0, window_hi].
PiecewiseConstantControl schedule_control(const PeriodicPulse& pulse, const PulseSchedule& s);

}  // namespace bilqctrl
