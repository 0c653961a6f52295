#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydsim/fock_space.h"
#include "rydsim/pulses.h"

namespace rydsim {

/// Occupation-measurement statistics of one level.
struct Distribution {
  std::string level;
  std::vector<std::pair<int, double>> outcomes;  // (value, probability)
  bool operator==(const Distribution &) const = default;
};

/// One simulated pipeline: initial state, schedule, resulting state, and what
/// was measured on it. `values` holds named scalars (branch phases, checkpoint
/// fidelities, calibration inputs) in insertion order.
struct ReportRun {
  std::string name;
  std::string target;
  StateVector initial;
  StateVector final_state;
  Schedule schedule;
  /// When present, `fidelity` is |<target_state|final_state>|^2.
  std::optional<StateVector> target_state;
  std::optional<double> fidelity;
  std::vector<std::pair<std::string, double>> values;
  std::vector<Distribution> distributions;

  ReportRun(std::string name, StateVector initial, StateVector final_state, Schedule schedule);
  void set(const std::string &key, double value);
  /// Throws std::out_of_range for unknown keys.
  double value(const std::string &key) const;
};

struct ExperimentReport {
  std::string protocol;
  LevelScheme scheme;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<ReportRun> runs;

  /// Throws std::out_of_range for unknown names.
  const ReportRun &run(const std::string &name) const;
  void note(const std::string &key, const std::string &value) { notes.emplace_back(key, value); }
};

/// Full distribution of n_level on `state`.
Distribution occupation_distribution(const StateVector &state, Level level);

/// Throws DomainError unless every probability is in [0, 1] and each
/// distribution sums to one within 1e-12.
void check_report(const ExperimentReport &report);

/// Text layout (all floats %.17g):
///
///   [experiment]          protocol = NAME, note.KEY = VALUE
///   [scheme]              registers, extras, atoms, tracked_cap, blockade, v, v_cross, soft_rydberg_cap
///   [run]                 name, target, fidelity, value.KEY, distribution.LEVEL = "v:p v:p ..."
///   [schedule]            schedule_io lines of the preceding run
///   [initial_state]       state_to_text lines
///   [final_state]         state_to_text lines
///   [target_state]        state_to_text lines (optional)
///
/// '#' lines are comments. Each [run] owns the raw sections that follow it.
std::string report_to_text(const ExperimentReport &report);
ExperimentReport report_from_text(const std::string &text);

/// Same content as a JSON object (schedule lines and state lines kept as string arrays).
std::string report_to_json(const ExperimentReport &report);
ExperimentReport report_from_json(const std::string &text);

/// Picks the JSON or text reader from the first non-blank character.
ExperimentReport parse_report(const std::string &text);

std::string scheme_to_text(const LevelScheme &scheme);

struct ReplayResult {
  std::string run;
  /// |replayed - recorded| over the final amplitudes.
  double state_deviation = 0.0;
  /// |recomputed - recorded| for the fidelity and every outcome probability.
  double number_deviation = 0.0;
  double max_deviation() const { return std::max(state_deviation, number_deviation); }
};

/// Re-runs every recorded schedule from its recorded initial state and
/// recomputes the fidelity and the distributions from the replayed state.
std::vector<ReplayResult> replay_report(const ExperimentReport &report);

}  // namespace rydsim
