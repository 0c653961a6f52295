#pragma once

#include <array>

#include "rydsim/pulses.h"

namespace rydsim {

/// Phase changes picked up by the (n_c, n_1) sectors during the composite
/// pulse, ordered (00, 10, 01, 11) where the first index is the control.
struct PhaseDeltas {
  double d00 = 0.0;
  double d10 = 0.0;
  double d01 = 0.0;
  double d11 = 0.0;
};

/// Three equal-duration constant pulses between `ground` and `rydberg`:
///   1: rabi = omega_t, phase 0, no detuning
///   2: rabi = 2 pi sin x / sqrt(1 + cos^2 x), detuning = -2 sqrt2 pi cos x / sqrt(1 + cos^2 x), phase pi/2
///   3: rabi = omega_t, phase pi, no detuning
/// with x = sqrt2 omega_t and unit durations. A negative second Rabi amplitude
/// is folded into its phase. Throws DomainError when sin x vanishes.
std::array<Pulse, 3> composite_phase_pulse(const LevelScheme &scheme, Level ground, Level rydberg, double omega_t);

/// Closed-form phase changes for the composite pulse. d10 = d01 = pi - x_c and
/// d11 = sqrt2 pi (1 - cos) / sqrt(1 + cos^2), with x_c = sqrt2 pi cos / sqrt(1 + cos^2)
/// and cos = cos(sqrt2 omega_t).
PhaseDeltas analytic_phase_deltas(double omega_t);

/// Light-shift angle x_c = sqrt2 pi cos / sqrt(1 + cos^2) that the gate applies
/// to the control and to the target level.
double phase_gate_light_shift(double omega_t);

/// Phase changes of the four (n_c, n_1) sectors obtained by simulating the
/// composite pulse on a one-register-level scheme with a Rydberg level r.
/// The control's excitation is represented by an atom already in r.
/// `max_leak` is the largest population left outside the starting configuration.
struct SimulatedPhases {
  PhaseDeltas deltas;
  double max_leak = 0.0;
};
SimulatedPhases simulate_phase_deltas(double omega_t);

/// |a - b| reduced modulo 2 pi into [0, pi].
double phase_distance(double a, double b);

/// omega_t in (0, pi/sqrt2) with cos(sqrt2 omega_t) = c. Throws DomainError unless |c| < 1.
double omega_t_for_cos(double c);

}  // namespace rydsim
