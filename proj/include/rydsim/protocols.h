#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rydsim/pulse_search.h"
#include "rydsim/report.h"

namespace rydsim {

/// Physical settings shared by every protocol. Soft blockade uses V = V_cross
/// = v_over_omega in units of the calibrated (collectively enhanced) Rabi frequency.
struct ProtocolConfig {
  std::int64_t atoms = 1000000;
  BlockadeMode blockade = BlockadeMode::kHard;
  double v_over_omega = 1000.0;
  /// Replaces each protocol's own S_max when set. Too small a cap surfaces as
  /// a DomainError from the first pulse that truncates population.
  std::optional<int> tracked_cap;

  BlockadeConfig blockade_config() const;
};

enum class BoxVariant { kTwoRydberg, kSingleRydberg };
enum class GateVariant { kTwoRydberg, kSingleRydberg };

std::string_view box_variant_name(BoxVariant v);
std::string_view gate_variant_name(GateVariant v);

/// Plaquette states over register levels 1..4 of `basis`.
StateVector phi_minus_state(const BasisPtr &basis);
StateVector phi_plus_state(const BasisPtr &basis);
/// (|1010> + |0101>)/sqrt2.
StateVector box_state(const BasisPtr &basis);

/// Moves one atom from the reservoir into `level` through r: pi(reservoir -> r,
/// calibrated for `reservoir_occupancy` atoms), then pi(r -> level). The
/// reservoir pulse uses laser phase pi so that the two pulses compose to +1.
/// Throws ConfigError if `level` is not a register or control level.
Schedule load_one_atom(const LevelScheme &scheme, Level level, std::int64_t reservoir_occupancy);

/// Raman pulse on (from, to) that maps one atom in `from` to
/// cos(t)|from> + e^{i phase} sin(t)|to> with tan(t) = |b| / |a|.
Pulse raman_split(const LevelScheme &scheme, Level from, Level to, Complex a, Complex b, const std::string &label);

/// Collective sigma^x on register level i: pi(i <-> r), pi(reservoir <-> r,
/// calibrated for `reference_occupancy`), pi(i <-> r). Exact (up to a global
/// sign) when every branch has `reference_occupancy` reservoir atoms while the
/// flip is made; otherwise the mismatch shows up as infidelity.
Schedule sigma_x(const LevelScheme &scheme, int i, std::int64_t reference_occupancy);

/// sigma^z on register level i as a pi light shift.
Pulse sigma_z(const LevelScheme &scheme, int i);

/// Controlled phase between the control level c and register level 1 with
/// phases (0, pi, pi, pi) on (n_c, n_1) = (0,0), (0,1), (1,0), (1,1) up to
/// one global sign. two_rydberg needs r and r2; single_rydberg needs r and
/// uses the composite pulse at cos(sqrt2 omega_t) = 2 - sqrt3.
Schedule controlled_phase(const LevelScheme &scheme, GateVariant variant);

/// (0, pi, pi, pi)-table check: simulated phases of the four sectors
/// relative to (0,0), with the largest leak out of each sector.
struct GateTable {
  PhaseDeltas phases;
  double max_leak = 0.0;
};
GateTable controlled_phase_table(GateVariant variant);

ExperimentReport prepare_phi_minus(const ProtocolConfig &config);
ExperimentReport prepare_phi_plus(const ProtocolConfig &config);
ExperimentReport prepare_box(const ProtocolConfig &config, BoxVariant variant);

/// Schedule that takes the vacuum of `scheme` to |box> (up to a global phase),
/// and the state it produces.
struct Preparation {
  Schedule schedule;
  StateVector state;
};
Preparation box_preparation(const LevelScheme &scheme, BoxVariant variant);

struct BraidingOptions {
  bool with_flux = true;
  BoxVariant box = BoxVariant::kTwoRydberg;
  GateVariant gate = GateVariant::kTwoRydberg;
};

/// Control in (|0>+|1>)/sqrt2, controlled sigma_1^z, x-string on all four
/// qubits, controlled sigma_1^z, control rotated and measured. The report
/// holds the probabilities of (+|0>+|1>)/sqrt2 ("value.p_plus") and
/// (-|0>+|1>)/sqrt2 ("value.p_minus").
ExperimentReport braiding_experiment(const ProtocolConfig &config, const BraidingOptions &options = {});

/// sigma_1^x on |box> at K atoms with the reference occupancy K - 2, against
/// the exact flip. Returns 1 - fidelity.
double sigma_x_infidelity(std::int64_t atoms);

/// Spinon states (1,-1,0)/sqrt2, (-1,0,1)/sqrt2, (0,1,-1)/sqrt2 and the
/// symmetric (1,1,1)/sqrt3 over levels (2,3,4), each transformed by the
/// two-factor rotation and measured on level 2.
ExperimentReport spinon_demo(const ProtocolConfig &config);

/// The four input vectors of spinon_demo, in run order.
std::array<Eigen::Vector3d, 4> spinon_inputs();

}  // namespace rydsim
