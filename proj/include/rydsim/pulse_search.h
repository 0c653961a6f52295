#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rydsim/nelder_mead.h"
#include "rydsim/phase_gate.h"
#include "rydsim/pulses.h"

namespace rydsim {

/// One constant drive segment on the (1, r) transition, unit duration:
/// rabi = omega_t, detuning = delta_t, laser phase `phase`.
struct SegmentParams {
  double omega_t = 0.0;
  double delta_t = 0.0;
  double phase = 0.0;
  bool operator==(const SegmentParams &) const = default;
};

/// Scheme used for the transfer problems: register level 1 and a Rydberg
/// level r, two atoms, hard blockade.
LevelScheme transfer_scheme();

/// Segments as pulses from `ground` to `rydberg` (rabi folded non-negative).
Schedule segments_to_schedule(
    const LevelScheme &scheme, Level ground, Level rydberg, const std::vector<SegmentParams> &segments,
    const std::string &label = "transfer");

/// Amplitudes of the two transfer branches under a segment sequence:
///   transfer = <n1=2, nr=0| U |n1=1, nr=1>   (sqrt2-enhanced branch)
///   stay     = <n1=0, nr=1| U |n1=0, nr=1>   (must return with unit population)
struct TransferAmplitudes {
  Complex transfer;
  Complex stay;
  double transfer_fidelity() const { return std::norm(transfer); }
  /// 1 - |stay|^2, the return-constraint violation.
  double violation() const { return 1.0 - std::norm(stay); }
};
TransferAmplitudes transfer_amplitudes(const std::vector<SegmentParams> &segments);

enum class ReturnConstraint {
  /// Free (omega_t, delta_t, phase) per segment; violation penalized by 1e6.
  kPenalty,
  /// Each segment performs whole generalized Rabi cycles on the stay branch
  /// (sqrt(omega_t^2 + delta_t^2) = 2 pi m), so the constraint holds exactly.
  kPerSegmentReturn,
};

struct TransferSearchOptions {
  int segments = 2;
  int restarts = 1000;
  std::uint64_t seed = 1;
  double omega_t_max = 4.0 * M_PI;
  double delta_t_max = 4.0 * M_PI;
  ReturnConstraint constraint = ReturnConstraint::kPenalty;
  int max_evaluations = 3000;
  /// Feasibility threshold on the return violation.
  double feasibility = 1e-10;
};

/// Distinct local optimum (fidelities equal to 1e-4 are merged).
struct LocalOptimum {
  double fidelity = 0.0;
  int count = 0;
};

struct TransferSearchResult {
  double fidelity = 0.0;
  double violation = 0.0;
  std::vector<SegmentParams> segments;
  TransferAmplitudes amplitudes;
  int feasible_restarts = 0;
  int evaluations = 0;
  /// Feasible local optima, best first.
  std::vector<LocalOptimum> local_optima;
};

/// Maximizes the transfer fidelity over `options.segments` constant segments
/// with omega_t in (0, omega_t_max], |delta_t| <= delta_t_max, phase in [0, 2 pi),
/// subject to the stay branch returning with unit population. Deterministic
/// given the seed. Throws ConfigError for fewer than 200 restarts or no
/// segments, NumericalError if no restart ends feasible.
TransferSearchResult optimize_transfer(const TransferSearchOptions &options);

/// optimize_transfer with two segments.
TransferSearchResult optimize_two_pulse_transfer(TransferSearchOptions options);

/// Three-segment parameters with both branches transferred to within
/// 1 - 1e-8, plus their phases theta_a = arg(transfer), theta_b = arg(stay)
/// for the compensating light shift.
struct CompositeTransfer {
  std::vector<SegmentParams> segments;
  double transfer_fidelity = 0.0;
  double stay_population = 0.0;
  double theta_a = 0.0;
  double theta_b = 0.0;
};
CompositeTransfer derive_composite_transfer_params(int restarts = 200, std::uint64_t seed = 1);

/// A fixed, previously derived three-segment solution (verified on use).
CompositeTransfer default_composite_transfer();

struct PhaseScanRow {
  double omega_t = 0.0;
  double cos_x = 0.0;
  PhaseDeltas simulated;
  PhaseDeltas analytic;
  /// |simulated - analytic| modulo 2 pi per sector.
  double dev10 = 0.0;
  double dev01 = 0.0;
  double dev11 = 0.0;
  double max_leak = 0.0;
};

struct PhaseScan {
  std::vector<PhaseScanRow> rows;
  double max_dev_single = 0.0;  // over d10 and d01
  double max_dev_double = 0.0;  // over d11
  double max_leak = 0.0;
};

/// Simulated vs closed-form composite-pulse phases on a grid. Throws
/// DomainError for grid points with sin(sqrt2 omega_t) = 0.
PhaseScan scan_phase_gate(const std::vector<double> &omega_t_grid);

/// `count` evenly spaced points in [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int count);

std::string phase_scan_to_csv(const PhaseScan &scan);
std::string transfer_result_to_csv(const TransferSearchResult &result);

}  // namespace rydsim
