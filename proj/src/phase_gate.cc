#include "rydsim/phase_gate.h"

#include <algorithm>
#include <cmath>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

constexpr double kSingularSine = 1e-9;

}  // namespace

std::array<Pulse, 3> composite_phase_pulse(const LevelScheme &scheme, Level ground, Level rydberg, double omega_t) {
  if (!(omega_t > 0.0) || !std::isfinite(omega_t)) {
    throw DomainError("composite pulse needs a positive, finite Omega t");
  }
  const double x = std::sqrt(2.0) * omega_t;
  const double s = std::sin(x);
  const double c = std::cos(x);
  if (std::abs(s) < kSingularSine) {
    throw DomainError("composite pulse is singular where sin(sqrt2 Omega t) = 0");
  }
  if (!scheme.is_rydberg(rydberg) || scheme.is_rydberg(ground)) {
    throw ConfigError("composite pulse couples a ground level to a Rydberg level");
  }
  const double root = std::sqrt(1.0 + c * c);
  double rabi2 = 2.0 * M_PI * s / root;
  double phase2 = M_PI / 2.0;
  if (rabi2 < 0.0) {
    rabi2 = -rabi2;
    phase2 += M_PI;
  }

  std::array<Pulse, 3> out;
  for (Pulse &p : out) {
    p.kind = PulseKind::kRydbergDrive;
    p.a = ground;
    p.b = rydberg;
    p.duration = 1.0;
  }
  out[0].rabi = omega_t;
  out[0].label = "composite 1/3";
  out[1].rabi = rabi2;
  out[1].detuning = -2.0 * std::sqrt(2.0) * M_PI * c / root;
  out[1].phase = phase2;
  out[1].label = "composite 2/3";
  out[2].rabi = omega_t;
  out[2].phase = M_PI;
  out[2].label = "composite 3/3";
  return out;
}

double phase_gate_light_shift(double omega_t) {
  const double c = std::cos(std::sqrt(2.0) * omega_t);
  return std::sqrt(2.0) * M_PI * c / std::sqrt(1.0 + c * c);
}

PhaseDeltas analytic_phase_deltas(double omega_t) {
  const double c = std::cos(std::sqrt(2.0) * omega_t);
  const double root = std::sqrt(1.0 + c * c);
  PhaseDeltas d;
  d.d10 = M_PI - std::sqrt(2.0) * M_PI * c / root;
  d.d01 = d.d10;
  d.d11 = std::sqrt(2.0) * M_PI * (1.0 - c) / root;
  return d;
}

SimulatedPhases simulate_phase_deltas(double omega_t) {
  const LevelScheme scheme(1, {ExtraRole::kRydberg}, 2, 2);
  const BasisPtr basis = build_basis(scheme);
  const Level one = scheme.register_level(1);
  const Level r = scheme.level(ExtraRole::kRydberg);
  Schedule composite;
  for (const Pulse &p : composite_phase_pulse(scheme, one, r, omega_t)) {
    composite.append(p);
  }
  SimulatedPhases out;
  // Sector (n_c, n_1) starts as (n_1, n_r = n_c).
  auto sector = [&](int n_c, int n_1) {
    const Occupation start{n_1, n_c};
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    amps(static_cast<Eigen::Index>(basis->index(start))) = 1.0;
    StateVector final = run_schedule(StateVector(basis, amps), composite);
    Complex a = final.amplitude(start);
    out.max_leak = std::max(out.max_leak, 1.0 - std::norm(a));
    return std::arg(a);
  };
  out.deltas.d00 = sector(0, 0);
  out.deltas.d10 = sector(1, 0);
  out.deltas.d01 = sector(0, 1);
  out.deltas.d11 = sector(1, 1);
  return out;
}

double phase_distance(double a, double b) {
  double d = std::remainder(a - b, 2.0 * M_PI);
  return std::abs(d);
}

double omega_t_for_cos(double c) {
  if (!(std::abs(c) < 1.0)) {
    throw DomainError("cos(sqrt2 Omega t) must lie strictly inside (-1, 1)");
  }
  return std::acos(c) / std::sqrt(2.0);
}

}  // namespace rydsim
