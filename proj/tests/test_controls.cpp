#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bilqctrl/controls.hpp"
#include "bilqctrl/errors.hpp"

using namespace bilqctrl;

TEST_CASE("control validation") {
  PiecewiseConstantControl u;
  u.breakpoints = {0.0, 1.0, 2.5};
  u.values = {1.0, -0.5};
  CHECK_NOTHROW(u.validate());
  CHECK(u.duration() == 2.5);
  CHECK(u.n_pieces() == 2);

  SUBCASE("first breakpoint must be zero") {
    u.breakpoints[0] = 0.5;
    CHECK_THROWS_AS(u.validate(), ValidationError);
  }
  SUBCASE("breakpoints strictly increasing") {
    u.breakpoints[2] = 1.0;
    CHECK_THROWS_AS(u.validate(), ValidationError);
  }
  SUBCASE("count mismatch") {
    u.values.push_back(2.0);
    CHECK_THROWS_AS(u.validate(), ValidationError);
  }
  SUBCASE("non-finite value") {
    u.values[0] = std::nan("");
    CHECK_THROWS_AS(u.validate(), ValidationError);
  }
  SUBCASE("empty control") {
    PiecewiseConstantControl empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);
  }
}

TEST_CASE("piece lookup resolves boundaries to the later piece") {
  PiecewiseConstantControl u;
  u.breakpoints = {0.0, 1.0, 2.0};
  u.values = {3.0, 4.0};
  CHECK(u.piece_at(0.0) == 0);
  CHECK(u.piece_at(0.999) == 0);
  CHECK(u.piece_at(1.0) == 1);
  CHECK(u.piece_at(2.0) == 1);  // the final time belongs to the last piece
  CHECK_THROWS_AS(u.piece_at(-0.1), ValidationError);
  CHECK_THROWS_AS(u.piece_at(2.1), ValidationError);
}

TEST_CASE("constant control") {
  const PiecewiseConstantControl u = constant_control(0.7, 3.0);
  CHECK(u.n_pieces() == 1);
  CHECK(u.values[0] == 0.7);
  CHECK(u.duration() == 3.0);
  CHECK_THROWS_AS(constant_control(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(constant_control(1.0, -1.0), ValidationError);
}

TEST_CASE("restriction cuts at interior times and keeps piece values") {
  PiecewiseConstantControl u;
  u.breakpoints = {0.0, 1.0, 2.0, 3.0};
  u.values = {1.0, 2.0, 3.0};

  const PiecewiseConstantControl r = restrict_control(u, 1.5);
  CHECK(r.duration() == 1.5);
  CHECK(r.values == std::vector<double>{1.0, 2.0});
  CHECK(r.breakpoints == std::vector<double>{0.0, 1.0, 1.5});

  const PiecewiseConstantControl exact = restrict_control(u, 2.0);
  CHECK(exact.values == std::vector<double>{1.0, 2.0});

  const PiecewiseConstantControl full = restrict_control(u, 3.0);
  CHECK(full.breakpoints == u.breakpoints);

  CHECK_THROWS_AS(restrict_control(u, 0.0), ValidationError);
  CHECK_THROWS_AS(restrict_control(u, 3.5), ValidationError);
}

TEST_CASE("zero padding appends or merges a zero tail") {
  PiecewiseConstantControl u;
  u.breakpoints = {0.0, 1.0};
  u.values = {2.0};

  const PiecewiseConstantControl p = zero_pad(u, 4.0);
  CHECK(p.duration() == 4.0);
  CHECK(p.values == std::vector<double>{2.0, 0.0});

  // a trailing zero piece extends instead of stacking
  const PiecewiseConstantControl pp = zero_pad(p, 9.0);
  CHECK(pp.values == std::vector<double>{2.0, 0.0});
  CHECK(pp.breakpoints == std::vector<double>{0.0, 1.0, 9.0});

  CHECK(zero_pad(u, 1.0).breakpoints == u.breakpoints);
  CHECK_THROWS_AS(zero_pad(u, 0.5), ValidationError);
}

TEST_CASE("reversal flips piece order and preserves widths") {
  PiecewiseConstantControl u;
  u.breakpoints = {0.0, 1.0, 4.0};
  u.values = {5.0, 6.0};

  const PiecewiseConstantControl r = reverse_control(u);
  CHECK(r.duration() == u.duration());
  CHECK(r.values == std::vector<double>{6.0, 5.0});
  CHECK(r.breakpoints == std::vector<double>{0.0, 3.0, 4.0});

  const PiecewiseConstantControl rr = reverse_control(r);
  CHECK(rr.breakpoints == u.breakpoints);
  CHECK(rr.values == u.values);
}

TEST_CASE("pulse values match their defining formulas") {
  PeriodicPulse cosine{PulseShape::kCosine, 2.0, 0.0, 1.5};
  CHECK(cosine.value(0.0) == doctest::Approx(1.5));
  CHECK(cosine.value(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(cosine.value(1.0) == doctest::Approx(-1.5));
  CHECK(cosine.value(7.0) == doctest::Approx(-1.5));  // periodic wrap

  PeriodicPulse duty{PulseShape::kDuty, 2.0, 0.3, 2.0};
  CHECK(duty.value(0.1) == 2.0);
  CHECK(duty.value(0.3) == 0.0);
  CHECK(duty.value(1.9) == 0.0);
  CHECK(duty.value(2.1) == 2.0);

  PeriodicPulse flat{PulseShape::kConstant, 2.0, 0.0, -0.25};
  CHECK(flat.value(0.4) == -0.25);
}

TEST_CASE("pulse validation") {
  PeriodicPulse p{PulseShape::kDuty, 2.0, 0.3, 1.0};
  CHECK_NOTHROW(p.validate());
  SUBCASE("period positive") {
    p.period = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("duty window inside the period") {
    p.eta = 2.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.eta = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
  SUBCASE("finite amplitude") {
    p.amplitude = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), ValidationError);
  }
}

TEST_CASE("discretized constant pulse collapses to one piece") {
  PeriodicPulse flat{PulseShape::kConstant, 1.0, 0.0, 0.8};
  const PiecewiseConstantControl u = discretize_pulse(flat, 5.0, 16);
  CHECK(u.n_pieces() == 1);
  CHECK(u.values[0] == 0.8);
  CHECK(u.duration() == 5.0);
}

TEST_CASE("duty pulses are discretized exactly at any resolution") {
  const double period = 2.0;
  const double eta = 0.3;
  PeriodicPulse duty{PulseShape::kDuty, period, eta, 1.0};
  for (int steps : {1, 4, 64}) {
    const PiecewiseConstantControl u = discretize_pulse(duty, 3.0 * period, steps);
    CHECK(u.duration() == 3.0 * period);
    // on/off value at every original cell midpoint
    for (double t = 0.01; t < u.duration(); t += 0.037) {
      const double tau = std::fmod(t, period);
      const double want = (tau < eta) ? 1.0 : 0.0;
      CHECK(u.values[u.piece_at(t)] == want);
    }
    // exactly two pieces per period survive merging
    CHECK(u.n_pieces() == 6);
  }
}

TEST_CASE("discretized cosine takes midpoint values in every period") {
  const double period = 2.0 * std::numbers::pi;
  PeriodicPulse cosine{PulseShape::kCosine, period, 0.0, 1.0};
  const int steps = 32;
  const PiecewiseConstantControl u = discretize_pulse(cosine, 4.0 * period, steps);
  CHECK(u.duration() == doctest::Approx(4.0 * period).epsilon(1e-15));
  const double h = period / steps;
  for (int cell = 0; cell < 4 * steps; ++cell) {
    const double mid = (cell + 0.5) * h;
    const double want = std::cos(2.0 * std::numbers::pi * std::fmod(mid, period) / period);
    CHECK(u.values[u.piece_at(mid)] == doctest::Approx(want).epsilon(1e-12));
  }
  // piece values repeat bit-identically from period to period
  for (int cell = 0; cell < steps; ++cell) {
    const double mid = (cell + 0.5) * h;
    CHECK(u.values[u.piece_at(mid)] == u.values[u.piece_at(mid + 2.0 * period)]);
  }
}

TEST_CASE("discretization rejects bad arguments") {
  PeriodicPulse cosine{PulseShape::kCosine, 1.0, 0.0, 1.0};
  CHECK_THROWS_AS(discretize_pulse(cosine, 0.0, 8), ValidationError);
  CHECK_THROWS_AS(discretize_pulse(cosine, 1.0, 0), ValidationError);
}
