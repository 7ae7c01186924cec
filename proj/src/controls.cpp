#include "bilqctrl/controls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bilqctrl {

void PiecewiseConstantControl::validate() const {
  if (breakpoints.size() < 2) {
    throw ValidationError("control: needs at least one piece");
  }
  if (values.size() + 1 != breakpoints.size()) {
    std::ostringstream msg;
    msg << "control: " << values.size() << " values do not match " << breakpoints.size()
        << " breakpoints";
    throw ValidationError(msg.str());
  }
  if (breakpoints.front() != 0.0) {
    throw ValidationError("control: first breakpoint must be 0");
  }
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) {
      throw ValidationError("control: breakpoints must be finite");
    }
    if (i > 0 && !(breakpoints[i] > breakpoints[i - 1])) {
      std::ostringstream msg;
      msg << "control: breakpoints must be strictly increasing, violated at index " << i;
      throw ValidationError(msg.str());
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw ValidationError("control: values must be finite");
    }
  }
}

int PiecewiseConstantControl::piece_at(double t) const {
  if (!(t >= 0.0 && t <= duration())) {
    std::ostringstream msg;
    msg << "control: time " << t << " outside [0, " << duration() << "]";
    throw ValidationError(msg.str());
  }
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  int idx = static_cast<int>(it - breakpoints.begin()) - 1;
  idx = std::clamp(idx, 0, n_pieces() - 1);
  return idx;
}

PiecewiseConstantControl constant_control(double value, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("constant_control: duration must be positive");
  }
  PiecewiseConstantControl u;
  u.breakpoints = {0.0, duration};
  u.values = {value};
  u.validate();
  return u;
}

PiecewiseConstantControl restrict_control(const PiecewiseConstantControl& u, double t_end) {
  u.validate();
  if (!(t_end > 0.0 && t_end <= u.duration())) {
    std::ostringstream msg;
    msg << "restrict_control: t_end " << t_end << " outside (0, " << u.duration() << "]";
    throw ValidationError(msg.str());
  }
  PiecewiseConstantControl out;
  out.breakpoints.push_back(0.0);
  for (size_t i = 0; i < u.values.size(); ++i) {
    const double end = std::min(u.breakpoints[i + 1], t_end);
    if (!(end > out.breakpoints.back())) break;
    out.breakpoints.push_back(end);
    out.values.push_back(u.values[i]);
    if (end >= t_end) break;
  }
  out.validate();
  return out;
}

PiecewiseConstantControl zero_pad(const PiecewiseConstantControl& u, double new_duration) {
  u.validate();
  if (!(new_duration >= u.duration())) {
    std::ostringstream msg;
    msg << "zero_pad: new duration " << new_duration << " shorter than " << u.duration();
    throw ValidationError(msg.str());
  }
  PiecewiseConstantControl out = u;
  if (new_duration == u.duration()) return out;
  if (out.values.back() == 0.0) {
    out.breakpoints.back() = new_duration;
  } else {
    out.breakpoints.push_back(new_duration);
    out.values.push_back(0.0);
  }
  return out;
}

PiecewiseConstantControl reverse_control(const PiecewiseConstantControl& u) {
  u.validate();
  PiecewiseConstantControl out;
  out.breakpoints.push_back(0.0);
  for (int i = u.n_pieces() - 1; i >= 0; --i) {
    const double width = u.breakpoints[i + 1] - u.breakpoints[i];
    out.breakpoints.push_back(out.breakpoints.back() + width);
    out.values.push_back(u.values[i]);
  }
  // pin the horizon exactly; the summed widths can drift in the last digit
  out.breakpoints.back() = u.duration();
  out.validate();
  return out;
}

double PeriodicPulse::value(double t) const {
  switch (shape) {
    case PulseShape::kConstant:
      return amplitude;
    case PulseShape::kCosine:
      return amplitude * std::cos(2.0 * std::numbers::pi * t / period);
    case PulseShape::kDuty: {
      double tau = std::fmod(t, period);
      if (tau < 0.0) tau += period;
      return tau < eta ? amplitude : 0.0;
    }
  }
  throw ValidationError("pulse: unknown shape");
}

void PeriodicPulse::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw ValidationError("pulse: period must be positive");
  }
  if (!std::isfinite(amplitude)) {
    throw ValidationError("pulse: amplitude must be finite");
  }
  if (shape == PulseShape::kDuty && !(eta > 0.0 && eta < period)) {
    std::ostringstream msg;
    msg << "pulse: duty window " << eta << " must lie in (0, " << period << ")";
    throw ValidationError(msg.str());
  }
}

PiecewiseConstantControl discretize_pulse(const PeriodicPulse& pulse, double duration,
                                          int steps_per_period) {
  pulse.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("discretize_pulse: duration must be positive");
  }
  if (steps_per_period < 1) {
    throw ValidationError("discretize_pulse: steps_per_period must be at least 1");
  }

  const double period = pulse.period;
  const double tiny = 1e-12 * period;

  // Breakpoint offsets within one period. Piece values are computed from
  // these offsets, not from absolute time, so every period discretizes to
  // bit-identical values.
  std::vector<double> offsets;
  offsets.reserve(static_cast<size_t>(steps_per_period) + 1);
  for (int i = 0; i < steps_per_period; ++i) {
    offsets.push_back(period * static_cast<double>(i) / static_cast<double>(steps_per_period));
  }
  if (pulse.shape == PulseShape::kDuty) {
    offsets.push_back(pulse.eta);
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end(),
                              [tiny](double a, double b) { return std::abs(a - b) <= tiny; }),
                  offsets.end());
  }

  PiecewiseConstantControl u;
  u.breakpoints.push_back(0.0);
  for (int m = 0;; ++m) {
    const double base = static_cast<double>(m) * period;
    if (base >= duration - tiny) break;
    for (size_t i = 0; i < offsets.size(); ++i) {
      const double start = base + offsets[i];
      if (start >= duration - tiny) break;
      const double local_end = (i + 1 < offsets.size()) ? offsets[i + 1] : period;
      const double end = std::min(base + local_end, duration);
      const double mid = 0.5 * (offsets[i] + std::min(local_end, duration - base));
      const double value = pulse.value(mid);
      if (!u.values.empty() && u.values.back() == value) {
        u.breakpoints.back() = end;
      } else {
        u.breakpoints.push_back(end);
        u.values.push_back(value);
      }
      if (end >= duration) break;
    }
    if (u.breakpoints.back() >= duration) break;
  }
  u.breakpoints.back() = duration;
  u.validate();
  return u;
}

}  // namespace bilqctrl
