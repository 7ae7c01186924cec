#pragma once

#include <vector>

#include "bilqctrl/errors.hpp"

namespace bilqctrl {

// u(t) = values[i] for t in (breakpoints[i], breakpoints[i+1]).
// breakpoints[0] must be 0 and the sequence strictly increasing.
struct PiecewiseConstantControl {
  std::vector<double> breakpoints;
  std::vector<double> values;

  double duration() const { return breakpoints.empty() ? 0.0 : breakpoints.back(); }
  int n_pieces() const { return static_cast<int>(values.size()); }
  // Index of the piece containing t; boundaries resolve to the later piece.
  int piece_at(double t) const;

  void validate() const;
};

PiecewiseConstantControl constant_control(double value, double duration);

// Restriction of u to [0, t_end]; t_end must lie in (0, duration].
PiecewiseConstantControl restrict_control(const PiecewiseConstantControl& u, double t_end);

// Extends u with a zero piece up to new_duration.
PiecewiseConstantControl zero_pad(const PiecewiseConstantControl& u, double new_duration);

// The control t -> u(T - t) on the same horizon.
PiecewiseConstantControl reverse_control(const PiecewiseConstantControl& u);

enum class PulseShape { kConstant, kCosine, kDuty };

// T-periodic prototype pulse.
//   constant: amplitude everywhere
//   cosine:   amplitude * cos(2*pi*t / period)
//   duty:     amplitude on [0, eta), 0 on [eta, period)
struct PeriodicPulse {
  PulseShape shape = PulseShape::kCosine;
  double period = 0.0;
  double eta = 0.0;  // duty window, must lie in (0, period) for duty pulses
  double amplitude = 1.0;

  double value(double t) const;
  void validate() const;
};

inline constexpr int kDefaultStepsPerPeriod = 64;

// Piecewise-constant sampling of the pulse on a uniform grid with
// steps_per_period pieces per period, each piece taking the pulse value at
// its midpoint. Duty discontinuities are inserted as extra breakpoints, so
// duty pulses are reproduced exactly at any resolution. Adjacent pieces with
// equal values are merged.
PiecewiseConstantControl discretize_pulse(const PeriodicPulse& pulse, double duration,
                                          int steps_per_period = kDefaultStepsPerPeriod);

}  // namespace bilqctrl
