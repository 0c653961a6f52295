#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/fock_space.h"

namespace rydsim {

enum class PulseKind { kRaman, kRydbergDrive, kLightShift };

std::string_view pulse_kind_name(PulseKind kind);

/// One piecewise-constant drive segment.
///
/// Drives couple `a` (may be the reservoir) to `b` with
///   H = (rabi/2)(e^{i phase} a_b^dag a_a + h.c.) - detuning n_b
/// for `duration`. A light shift touches level `a` only and multiplies each
/// amplitude by exp(i phase n_a); its other fields are unused.
struct Pulse {
  PulseKind kind = PulseKind::kRaman;
  Level a;
  Level b;
  double rabi = 0.0;
  double phase = 0.0;
  double detuning = 0.0;
  double duration = 0.0;
  /// Occupancy the area was calibrated against (0 = uncalibrated).
  std::int64_t reference = 0;
  std::string label;

  bool operator==(const Pulse &) const = default;
};

/// Ordered pulse list; executed front to back.
struct Schedule {
  std::vector<Pulse> pulses;

  void append(const Pulse &p) { pulses.push_back(p); }
  void append(const Schedule &s) { pulses.insert(pulses.end(), s.pulses.begin(), s.pulses.end()); }
  bool operator==(const Schedule &) const = default;
};

Pulse light_shift(Level level, double phase, std::string label = {});

/// Drive of nominal area `area` on (a, b), calibrated so the manifold whose
/// single-atom matrix element is enhanced by sqrt(reference) sees exactly that
/// area: rabi = 1/sqrt(reference), duration = area.
Pulse area_pulse(
    const LevelScheme &scheme,
    Level a,
    Level b,
    std::int64_t reference,
    double area,
    double phase = 0.0,
    std::string label = {});

/// area_pulse with area pi.
Pulse pi_pulse(
    const LevelScheme &scheme, Level a, Level b, std::int64_t reference, double phase = 0.0, std::string label = {});

/// The rotating-frame Hamiltonian of `pulse` over `basis`, including soft-blockade shifts.
Eigen::MatrixXcd build_hamiltonian(const OccupationBasis &basis, const Pulse &pulse);

/// exp(-i H t) over the full basis (light shifts give the diagonal phase operator).
Eigen::MatrixXcd pulse_unitary(const OccupationBasis &basis, const Pulse &pulse);

/// Applies one pulse. Throws DomainError if populated amplitude would be driven
/// past the tracked cap S_max, NumericalError if an eigendecomposition fails or
/// the propagator misses unitarity by more than 1e-12.
StateVector evolve(const StateVector &state, const Pulse &pulse);
StateVector run_schedule(const StateVector &state, const Schedule &schedule);

}  // namespace rydsim
