#include "bilqctrl/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bilqctrl {

namespace {

constexpr double kPi = std::numbers::pi;

// integral over [0, T] of exp(i*mu*t) dt
Complex phase_integral(double mu, double period) {
  if (mu == 0.0) return Complex(period, 0.0);
  return (std::polar(1.0, mu * period) - Complex(1.0, 0.0)) / Complex(0.0, mu);
}

}  // namespace

double transition_gap(const GalerkinSystem& sys, int j, int k) {
  sys.validate();
  if (j < 1 || k < 1 || j > sys.n_levels || k > sys.n_levels) {
    std::ostringstream msg;
    msg << "transition_gap: pair (" << j << "," << k << ") outside 1.." << sys.n_levels;
    throw ValidationError(msg.str());
  }
  if (j == k) {
    throw ValidationError("transition_gap: levels must differ");
  }
  return std::abs(sys.spectrum[j - 1] - sys.spectrum[k - 1]);
}

PeriodicPulse make_cosine_pulse(const GalerkinSystem& sys, int j, int k, double amplitude) {
  const double gap = transition_gap(sys, j, k);
  if (!(gap > 0.0)) {
    throw ValidationError("make_cosine_pulse: transition gap must be positive");
  }
  PeriodicPulse pulse;
  pulse.shape = PulseShape::kCosine;
  pulse.period = 2.0 * kPi / gap;
  pulse.amplitude = amplitude;
  pulse.validate();
  return pulse;
}

PeriodicPulse make_duty_pulse(const GalerkinSystem& sys, int j, int k, double eta,
                              double amplitude) {
  const double gap = transition_gap(sys, j, k);
  if (!(gap > 0.0)) {
    throw ValidationError("make_duty_pulse: transition gap must be positive");
  }
  PeriodicPulse pulse;
  pulse.shape = PulseShape::kDuty;
  pulse.period = 2.0 * kPi / gap;
  pulse.eta = eta;
  pulse.amplitude = amplitude;
  pulse.validate();
  return pulse;
}

Complex fourier_coefficient(const PeriodicPulse& pulse, double omega) {
  pulse.validate();
  if (!std::isfinite(omega)) {
    throw ValidationError("fourier_coefficient: frequency must be finite");
  }
  switch (pulse.shape) {
    case PulseShape::kConstant:
      return pulse.amplitude * phase_integral(omega, pulse.period);
    case PulseShape::kCosine: {
      // cos(w0 t) e^{i w t} splits into half-weight lines at w +- w0
      const double w0 = 2.0 * kPi / pulse.period;
      return 0.5 * pulse.amplitude *
             (phase_integral(omega + w0, pulse.period) + phase_integral(omega - w0, pulse.period));
    }
    case PulseShape::kDuty: {
      if (omega == 0.0) return Complex(pulse.amplitude * pulse.eta, 0.0);
      return pulse.amplitude * (std::polar(1.0, omega * pulse.eta) - Complex(1.0, 0.0)) /
             Complex(0.0, omega);
    }
  }
  throw ValidationError("fourier_coefficient: unknown pulse shape");
}

bool check_resonance_vanishing(const PeriodicPulse& pulse, const ResonanceSet& resonances,
                               const GalerkinSystem& sys) {
  sys.validate();
  for (const LevelPair& pair : resonances.pairs) {
    const double omega = sys.spectrum[pair.first - 1] - sys.spectrum[pair.second - 1];
    if (std::abs(fourier_coefficient(pulse, omega)) > kResonanceVanishTol) {
      return false;
    }
  }
  return true;
}

double critical_time(const GalerkinSystem& sys, int j, int k, const PeriodicPulse& pulse) {
  const TransitionRecord rec = is_nondegenerate(sys, j, k);
  if (!rec.nondegenerate()) {
    std::ostringstream msg;
    msg << "critical_time: transition (" << rec.pair.first << "," << rec.pair.second
        << ") is not non-degenerate";
    throw ValidationError(msg.str());
  }
  const double coupling_mod =
      std::abs(sys.coupling(rec.pair.first - 1, rec.pair.second - 1));
  const double omega = sys.spectrum[rec.pair.first - 1] - sys.spectrum[rec.pair.second - 1];
  const double coeff_mod = std::abs(fourier_coefficient(pulse, omega));
  if (coeff_mod <= kResonanceVanishTol) {
    throw ValidationError("critical_time: pulse does not drive the transition");
  }
  return kPi * pulse.period / (2.0 * coupling_mod * coeff_mod);
}

PulseSchedule find_optimal_time(const GalerkinSystem& sys, int j, int k,
                                const PeriodicPulse& pulse, int n, int steps_per_period,
                                FidelityScan* scan) {
  if (n < 1) {
    throw ValidationError("find_optimal_time: n must be at least 1");
  }
  if (steps_per_period < 1) {
    throw ValidationError("find_optimal_time: steps_per_period must be at least 1");
  }
  const TransitionRecord rec = is_nondegenerate(sys, j, k);
  if (!rec.nondegenerate()) {
    std::ostringstream msg;
    msg << "find_optimal_time: transition (" << rec.pair.first << "," << rec.pair.second
        << ") is not non-degenerate";
    throw ValidationError(msg.str());
  }
  const double expected_period = 2.0 * kPi / rec.gap;
  if (std::abs(pulse.period - expected_period) > 1e-9 * expected_period) {
    std::ostringstream msg;
    msg << "find_optimal_time: pulse period " << pulse.period
        << " does not match the transition period " << expected_period;
    throw ValidationError(msg.str());
  }
  if (!check_resonance_vanishing(pulse, resonance_set(sys, j, k), sys)) {
    throw ValidationError("find_optimal_time: pulse excites a resonant transition");
  }

  PulseSchedule sched;
  sched.pair = rec.pair;
  sched.period = pulse.period;
  sched.n = n;
  sched.steps_per_period = steps_per_period;
  const double omega = sys.spectrum[j - 1] - sys.spectrum[k - 1];
  sched.fourier_coeff = fourier_coefficient(pulse, omega);
  sched.t_star = critical_time(sys, j, k, pulse);
  sched.window_lo = n * sched.t_star - pulse.period;
  sched.window_hi = n * sched.t_star + pulse.period;
  if (!(sched.window_hi > sched.window_lo && sched.window_hi > 0.0)) {
    throw ValidationError("find_optimal_time: degenerate search window");
  }

  PeriodicPulse scaled = pulse;
  scaled.amplitude = pulse.amplitude / static_cast<double>(n);
  const PiecewiseConstantControl control = discretize_pulse(scaled, sched.window_hi,
                                                            steps_per_period);
  const Propagator prop(sys, control);

  // one pass over the horizon, sampling the window on a dense grid
  const double scan_lo = std::max(0.0, sched.window_lo);
  const int grid_points = 257;
  const std::vector<double> times = linspace(scan_lo, sched.window_hi, grid_points);
  std::vector<StateVector> states;
  states.reserve(times.size());
  std::vector<double> fidelities(times.size());
  StateVector state = basis_state(sys.n_levels, j);
  double t_prev = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    state = prop.evolve(state, t_prev, times[i]);
    t_prev = times[i];
    states.push_back(state);
    fidelities[i] = std::abs(state[k - 1]);
  }
  if (scan != nullptr) {
    scan->times = times;
    scan->fidelities = fidelities;
  }

  size_t best = 0;
  for (size_t i = 1; i < times.size(); ++i) {
    if (fidelities[i] > fidelities[best]) best = i;
  }

  // golden-section refinement inside the bracket around the grid peak
  const size_t lo_idx = best == 0 ? 0 : best - 1;
  const size_t hi_idx = std::min(best + 1, times.size() - 1);
  const StateVector& anchor = states[lo_idx];
  const double anchor_t = times[lo_idx];
  const auto fidelity_at = [&](double t) {
    return std::abs(prop.evolve(anchor, anchor_t, t)[k - 1]);
  };
  double a = times[lo_idx];
  double b = times[hi_idx];
  double best_t = times[best];
  double best_f = fidelities[best];
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - golden * (b - a);
  double d = a + golden * (b - a);
  double fc = fidelity_at(c);
  double fd = fidelity_at(d);
  while (b - a > 1e-10 * std::max(1.0, sched.window_hi)) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - golden * (b - a);
      fc = fidelity_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + golden * (b - a);
      fd = fidelity_at(d);
    }
    const double t_mid = 0.5 * (a + b);
    const double f_mid = fidelity_at(t_mid);
    if (f_mid > best_f) {
      best_f = f_mid;
      best_t = t_mid;
    }
  }

  sched.t_star_n = best_t;
  sched.fidelity = best_f;
  sched.l1_cost = 0.0;
  {
    const PiecewiseConstantControl head = restrict_control(control, sched.t_star_n);
    for (int i = 0; i < head.n_pieces(); ++i) {
      sched.l1_cost += std::abs(head.values[i]) * (head.breakpoints[i + 1] - head.breakpoints[i]);
    }
  }
  return sched;
}

PiecewiseConstantControl schedule_control(const PeriodicPulse& pulse, const PulseSchedule& s) {
  PeriodicPulse scaled = pulse;
  scaled.amplitude = pulse.amplitude / static_cast<double>(s.n);
  return discretize_pulse(scaled, s.window_hi, s.steps_per_period);
}

}  // namespace bilqctrl
