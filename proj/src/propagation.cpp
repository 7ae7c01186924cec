#include "bilqctrl/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bilqctrl {

namespace {

void require_state(const GalerkinSystem& sys, const StateVector& psi, const char* who) {
  if (psi.size() != sys.n_levels) {
    std::ostringstream msg;
    msg << who << ": state has size " << psi.size() << ", system has " << sys.n_levels
        << " levels";
    throw ValidationError(msg.str());
  }
  if (!psi.allFinite()) {
    std::ostringstream msg;
    msg << who << ": state has non-finite entries";
    throw ValidationError(msg.str());
  }
}

void require_unit_norm(const StateVector& psi, const char* who) {
  const double n = psi.norm();
  if (std::abs(n - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << who << ": state norm " << n << " deviates from 1 beyond " << kNormTol;
    throw ValidationError(msg.str());
  }
}

}  // namespace

Propagator::Propagator(const GalerkinSystem& sys, PiecewiseConstantControl control)
    : n_levels_(sys.n_levels), control_(std::move(control)) {
  sys.validate();
  control_.validate();
  a_ = a_matrix(sys);
  b_ = sys.coupling;
}

const SkewModes& Propagator::modes_for(double u) const {
  auto it = cache_.find(u);
  if (it != cache_.end()) return it->second;
  SkewModes modes = skew_modes(a_ + u * b_);
  return cache_.emplace(u, std::move(modes)).first->second;
}

StateVector Propagator::evolve(const StateVector& psi, double from, double to) const {
  if (psi.size() != n_levels_) {
    throw ValidationError("evolve: state size does not match system");
  }
  if (!(from >= 0.0 && to >= from && to <= duration())) {
    std::ostringstream msg;
    msg << "evolve: need 0 <= from <= to <= " << duration() << ", got from=" << from
        << " to=" << to;
    throw ValidationError(msg.str());
  }
  StateVector state = psi;
  if (to == from) return state;
  int i = control_.piece_at(from);
  double t = from;
  while (true) {
    const double piece_end = control_.breakpoints[i + 1];
    const double seg_end = std::min(piece_end, to);
    const double dt = seg_end - t;
    if (dt > 0.0) {
      state = apply_exp(modes_for(control_.values[i]), dt, state);
    }
    t = seg_end;
    if (t >= to) break;
    ++i;
  }
  return state;
}

StateVector basis_state(int n_levels, int level) {
  if (level < 1 || level > n_levels) {
    std::ostringstream msg;
    msg << "basis_state: level " << level << " outside 1.." << n_levels;
    throw ValidationError(msg.str());
  }
  StateVector psi = StateVector::Zero(n_levels);
  psi[level - 1] = Complex(1.0, 0.0);
  return psi;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2 || !(hi >= lo)) {
    throw ValidationError("linspace: need count >= 2 and hi >= lo");
  }
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

Trajectory propagate(const GalerkinSystem& sys, const PiecewiseConstantControl& u,
                     const StateVector& psi0, const std::vector<double>& sample_times) {
  require_state(sys, psi0, "propagate");
  require_unit_norm(psi0, "propagate");
  if (sample_times.empty()) {
    throw ValidationError("propagate: needs at least one sample time");
  }
  Propagator prop(sys, u);
  const double horizon = prop.duration();
  for (size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    if (!(t >= 0.0 && t <= horizon)) {
      std::ostringstream msg;
      msg << "propagate: sample time " << t << " outside [0, " << horizon << "]";
      throw ValidationError(msg.str());
    }
    if (i > 0 && t < sample_times[i - 1]) {
      throw ValidationError("propagate: sample times must be non-decreasing");
    }
  }

  Trajectory traj;
  traj.control = prop.control();
  traj.times = sample_times;
  traj.states.reserve(sample_times.size());
  StateVector state = psi0;
  double t_prev = 0.0;
  for (double t : sample_times) {
    state = prop.evolve(state, t_prev, t);
    t_prev = t;
    traj.states.push_back(state);
  }
  return traj;
}

StateVector propagate_final(const GalerkinSystem& sys, const PiecewiseConstantControl& u,
                            const StateVector& psi0) {
  require_state(sys, psi0, "propagate");
  require_unit_norm(psi0, "propagate");
  Propagator prop(sys, u);
  return prop.evolve(psi0, 0.0, prop.duration());
}

double energy(const GalerkinSystem& sys, const StateVector& psi) {
  require_state(sys, psi, "energy");
  double e = 0.0;
  for (int k = 0; k < sys.n_levels; ++k) {
    e += sys.spectrum[k] * std::norm(psi[k]);
  }
  return e;
}

double energy_rate(const GalerkinSystem& sys, double u, const StateVector& psi) {
  require_state(sys, psi, "energy_rate");
  // d/dt <psi, iA psi> = u <psi, [iA, B] psi> = 2 u Re<iA psi, B psi>
  ComplexVector ia_psi(sys.n_levels);
  for (int k = 0; k < sys.n_levels; ++k) {
    ia_psi[k] = sys.spectrum[k] * psi[k];
  }
  const ComplexVector b_psi = sys.coupling * psi;
  return 2.0 * u * inner(ia_psi, b_psi).real();
}

EnergyRateCheck energy_rate_check(const GalerkinSystem& sys, const PiecewiseConstantControl& u,
                                  const StateVector& psi0, double t, double dt) {
  require_state(sys, psi0, "energy_rate_check");
  require_unit_norm(psi0, "energy_rate_check");
  u.validate();
  if (!(dt > 0.0)) {
    throw ValidationError("energy_rate_check: dt must be positive");
  }
  if (!(t - dt >= 0.0 && t + dt <= u.duration())) {
    throw ValidationError("energy_rate_check: stencil leaves [0, duration]");
  }
  const int piece = u.piece_at(t);
  if (!(t - dt >= u.breakpoints[piece] && t + dt <= u.breakpoints[piece + 1])) {
    std::ostringstream msg;
    msg << "energy_rate_check: stencil [" << t - dt << ", " << t + dt
        << "] crosses a control breakpoint";
    throw ValidationError(msg.str());
  }

  Propagator prop(sys, u);
  const StateVector psi_minus = prop.evolve(psi0, 0.0, t - dt);
  const StateVector psi_t = prop.evolve(psi_minus, t - dt, t);
  const StateVector psi_plus = prop.evolve(psi_t, t, t + dt);

  EnergyRateCheck out;
  out.lhs = (energy(sys, psi_plus) - energy(sys, psi_minus)) / (2.0 * dt);
  out.rhs = energy_rate(sys, u.values[piece], psi_t);
  return out;
}

double sobolev_norm(const GalerkinSystem& sys, const StateVector& psi, double s) {
  require_state(sys, psi, "sobolev_norm");
  if (!(s >= 0.0)) {
    throw ValidationError("sobolev_norm: order s must be non-negative");
  }
  double total = 0.0;
  for (int k = 0; k < sys.n_levels; ++k) {
    if (s > 0.0 && sys.spectrum[k] == 0.0) {
      throw ValidationError("sobolev_norm: zero eigenvalue admits no positive-order weight");
    }
    total += std::pow(sys.spectrum[k], s) * std::norm(psi[k]);
  }
  return std::sqrt(total);
}

double galerkin_compare(const GalerkinSystem& sys_small, const GalerkinSystem& sys_large,
                        const PiecewiseConstantControl& u, const StateVector& psi0_small,
                        const std::vector<double>& sample_times) {
  if (!is_truncation_of(sys_small, sys_large)) {
    throw ValidationError("galerkin_compare: first system is not a truncation of the second");
  }
  require_state(sys_small, psi0_small, "galerkin_compare");
  StateVector psi0_large = StateVector::Zero(sys_large.n_levels);
  psi0_large.head(sys_small.n_levels) = psi0_small;

  const Trajectory small = propagate(sys_small, u, psi0_small, sample_times);
  const Trajectory large = propagate(sys_large, u, psi0_large, sample_times);

  double worst = 0.0;
  for (size_t i = 0; i < sample_times.size(); ++i) {
    StateVector diff = large.states[i];
    diff.head(sys_small.n_levels) -= small.states[i];
    worst = std::max(worst, diff.norm());
  }
  return worst;
}

double time_reversal_check(const GalerkinSystem& sys, const PiecewiseConstantControl& u) {
  sys.validate();
  u.validate();
  const ComplexMatrix a = a_matrix(sys);
  const ComplexMatrix& b = sys.coupling;
  const int n = sys.n_levels;

  ComplexMatrix forward = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < u.n_pieces(); ++i) {
    const double width = u.breakpoints[i + 1] - u.breakpoints[i];
    forward = expm_skew(a + u.values[i] * b, width) * forward;
  }

  const PiecewiseConstantControl rev = reverse_control(u);
  ComplexMatrix backward = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < rev.n_pieces(); ++i) {
    const double width = rev.breakpoints[i + 1] - rev.breakpoints[i];
    backward = expm_skew(-(a + rev.values[i] * b), width) * backward;
  }

  return (forward.adjoint() - backward).norm();
}

}  // namespace bilqctrl
