#include "rydsim/protocols.h"

#include <cmath>

#include "rydsim/errors.h"
#include "rydsim/plaquette_states.h"
#include "rydsim/raman_compiler.h"
#include "rydsim/schedule_io.h"

namespace rydsim {

namespace {

// A state together with the schedule that produced it from `initial`.
class Pipeline {
 public:
  explicit Pipeline(StateVector initial) : initial_(initial), state_(std::move(initial)) {}

  void apply(const Pulse &p) {
    state_ = evolve(state_, p);
    schedule_.append(p);
  }
  void apply(const Schedule &s) {
    for (const Pulse &p : s.pulses) {
      apply(p);
    }
  }
  const StateVector &state() const { return state_; }
  const Schedule &schedule() const { return schedule_; }
  ReportRun run(const std::string &name) const { return ReportRun(name, initial_, state_, schedule_); }

 private:
  StateVector initial_;
  StateVector state_;
  Schedule schedule_;
};

// Reservoir occupancy of the most populated basis state.
std::int64_t dominant_reservoir(const StateVector &s) {
  Eigen::Index k = 0;
  s.amplitudes().cwiseAbs2().maxCoeff(&k);
  return s.basis().reservoir_occupancy(static_cast<std::size_t>(k));
}

double population_with(const StateVector &s, Level level) {
  double p = 0.0;
  for (std::size_t k = 0; k < s.basis().size(); ++k) {
    if (s.basis().occupation(k, level) > 0) {
      p += std::norm(s.amplitudes()(static_cast<Eigen::Index>(k)));
    }
  }
  return p;
}

void load(Pipeline &pipe, Level level) {
  const LevelScheme &scheme = pipe.state().scheme();
  // Finite blockade leaves ~(Omega/V)^2 behind in r; only a real occupant counts.
  if (population_with(pipe.state(), scheme.level(ExtraRole::kRydberg)) > 0.5) {
    throw DomainError("loading an atom needs an empty Rydberg level");
  }
  pipe.apply(load_one_atom(scheme, level, dominant_reservoir(pipe.state())));
}

Occupation occupation_of(const LevelScheme &scheme, const std::vector<int> &registers) {
  Occupation occ(static_cast<std::size_t>(scheme.mode_count()), 0);
  for (std::size_t i = 0; i < registers.size(); ++i) {
    occ[i] = registers[i];
  }
  return occ;
}

// Light shift on `level` that rotates branch `b` onto the phase of branch `a`.
// The level must be occupied exactly once in b and empty in a.
Pulse align_branch(const StateVector &s, const Occupation &a, const Occupation &b, Level level, const std::string &label) {
  const double phase = std::remainder(std::arg(s.amplitude(a)) - std::arg(s.amplitude(b)), 2.0 * M_PI);
  return light_shift(level, phase, label);
}

LevelScheme protocol_scheme(const ProtocolConfig &config, std::vector<ExtraRole> extras, int hard_cap, int soft_cap) {
  const BlockadeConfig b = config.blockade_config();
  const int cap = config.tracked_cap.value_or(b.mode == BlockadeMode::kHard ? hard_cap : soft_cap);
  return LevelScheme(4, std::move(extras), config.atoms, cap, b);
}

void add_config_notes(ExperimentReport &report, const ProtocolConfig &config) {
  report.note("atoms", std::to_string(config.atoms));
  report.note("blockade", config.blockade == BlockadeMode::kHard ? "hard" : "soft");
  if (config.blockade == BlockadeMode::kSoft) {
    report.note("v_over_omega", format_double(config.v_over_omega));
  }
}

std::vector<Level> registers_of(const LevelScheme &scheme) {
  std::vector<Level> out;
  for (int i = 1; i <= scheme.register_count(); ++i) {
    out.push_back(scheme.register_level(i));
  }
  return out;
}

}  // namespace

BlockadeConfig ProtocolConfig::blockade_config() const {
  if (atoms < 4) {
    throw ConfigError("protocols need at least four atoms");
  }
  if (blockade == BlockadeMode::kHard) {
    return BlockadeConfig::hard();
  }
  if (!(v_over_omega > 0.0) || !std::isfinite(v_over_omega)) {
    throw ConfigError("soft blockade needs a finite V/Omega > 0");
  }
  return BlockadeConfig::soft(v_over_omega, v_over_omega);
}

std::string_view box_variant_name(BoxVariant v) {
  return v == BoxVariant::kTwoRydberg ? "two_rydberg" : "single_rydberg";
}

std::string_view gate_variant_name(GateVariant v) {
  return v == GateVariant::kTwoRydberg ? "two_rydberg" : "single_rydberg";
}

StateVector phi_minus_state(const BasisPtr &basis) {
  return two_excitation_state(basis, SymmetricCoeffs(phi_minus_coeffs()));
}

StateVector phi_plus_state(const BasisPtr &basis) {
  return two_excitation_state(basis, SymmetricCoeffs(phi_plus_coeffs()));
}

StateVector box_state(const BasisPtr &basis) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 2) = c(2, 0) = c(1, 3) = c(3, 1) = 1.0;
  return two_excitation_state(basis, SymmetricCoeffs(c));
}

Schedule load_one_atom(const LevelScheme &scheme, Level level, std::int64_t reservoir_occupancy) {
  if (!(scheme.is_register(level) || scheme.find(ExtraRole::kControl) == level)) {
    throw ConfigError("atoms can only be loaded into register or control levels");
  }
  const Level r = scheme.level(ExtraRole::kRydberg);
  Schedule s;
  s.append(pi_pulse(scheme, Level::reservoir(), r, reservoir_occupancy, M_PI, "load reservoir->r"));
  s.append(pi_pulse(scheme, level, r, 1, 0.0, "load r->" + scheme.level_name(level)));
  return s;
}

Pulse raman_split(const LevelScheme &scheme, Level from, Level to, Complex a, Complex b, const std::string &label) {
  const double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double phase = std::remainder(std::arg(b) - std::arg(a) + M_PI / 2.0, 2.0 * M_PI);
  Pulse p = area_pulse(scheme, from, to, 1, theta, phase, label);
  p.kind = PulseKind::kRaman;
  return p;
}

Schedule sigma_x(const LevelScheme &scheme, int i, std::int64_t reference_occupancy) {
  const Level level = scheme.register_level(i);
  const Level r = scheme.level(ExtraRole::kRydberg);
  const std::string tag = "sigma_x " + std::to_string(i);
  Schedule s;
  s.append(pi_pulse(scheme, level, r, 1, 0.0, tag + " out"));
  s.append(pi_pulse(scheme, Level::reservoir(), r, reference_occupancy, 0.0, tag + " exchange"));
  s.append(pi_pulse(scheme, level, r, 1, 0.0, tag + " in"));
  return s;
}

Pulse sigma_z(const LevelScheme &scheme, int i) {
  return light_shift(scheme.register_level(i), M_PI, "sigma_z " + std::to_string(i));
}

Schedule controlled_phase(const LevelScheme &scheme, GateVariant variant) {
  const Level c = scheme.level(ExtraRole::kControl);
  const Level r = scheme.level(ExtraRole::kRydberg);
  const Level one = scheme.register_level(1);
  Schedule s;
  if (variant == GateVariant::kTwoRydberg) {
    if (!scheme.find(ExtraRole::kRydberg2)) {
      throw ConfigError("the two-Rydberg controlled phase needs a level r2");
    }
    const Level r2 = scheme.level(ExtraRole::kRydberg2);
    s.append(pi_pulse(scheme, c, r, 1, 0.0, "cz c->r"));
    s.append(area_pulse(scheme, one, r2, 1, 2.0 * M_PI, 0.0, "cz 2pi 1-r2"));
    s.append(pi_pulse(scheme, c, r, 1, 0.0, "cz r->c"));
    return s;
  }
  // Working point with the table (0, pi, pi, pi) once the light shifts are added.
  const double omega_t = omega_t_for_cos(2.0 - std::sqrt(3.0));
  const double x = phase_gate_light_shift(omega_t);
  s.append(pi_pulse(scheme, c, r, 1, 0.0, "cz c->r"));
  for (const Pulse &p : composite_phase_pulse(scheme, one, r, omega_t)) {
    s.append(p);
  }
  s.append(pi_pulse(scheme, c, r, 1, M_PI, "cz r->c"));
  s.append(light_shift(c, x, "cz shift c"));
  s.append(light_shift(one, x, "cz shift 1"));
  return s;
}

GateTable controlled_phase_table(GateVariant variant) {
  std::vector<ExtraRole> extras{ExtraRole::kRydberg};
  if (variant == GateVariant::kTwoRydberg) {
    extras.push_back(ExtraRole::kRydberg2);
  }
  extras.push_back(ExtraRole::kControl);
  const LevelScheme scheme(1, extras, 2, 2);
  const BasisPtr basis = build_basis(scheme);
  const Schedule gate = controlled_phase(scheme, variant);
  const Level c = scheme.level(ExtraRole::kControl);
  GateTable table;
  auto sector = [&](int n_c, int n_1) {
    Occupation occ(static_cast<std::size_t>(scheme.mode_count()), 0);
    occ[0] = n_1;
    occ[static_cast<std::size_t>(c.mode)] = n_c;
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    amps(static_cast<Eigen::Index>(basis->index(occ))) = 1.0;
    StateVector out = run_schedule(StateVector(basis, amps), gate);
    Complex a = out.amplitude(occ);
    table.max_leak = std::max(table.max_leak, 1.0 - std::norm(a));
    return std::arg(a);
  };
  const double base = sector(0, 0);
  table.phases.d00 = 0.0;
  table.phases.d10 = std::remainder(sector(1, 0) - base, 2.0 * M_PI);
  table.phases.d01 = std::remainder(sector(0, 1) - base, 2.0 * M_PI);
  table.phases.d11 = std::remainder(sector(1, 1) - base, 2.0 * M_PI);
  return table;
}

ExperimentReport prepare_phi_minus(const ProtocolConfig &config) {
  const LevelScheme scheme = protocol_scheme(config, {ExtraRole::kRydberg}, 4, 4);
  const BasisPtr basis = build_basis(scheme);
  Pipeline pipe(vacuum_state(basis));
  load(pipe, scheme.register_level(1));
  load(pipe, scheme.register_level(2));
  const StateVector pair = register_state(basis, {1, 1, 0, 0});
  const double loaded = fidelity(pair, pipe.state());
  pipe.apply(compile_unitary(scheme, phi_minus_transform(), registers_of(scheme)));

  ExperimentReport report{"phi_minus", scheme, {}, {}};
  add_config_notes(report, config);
  ReportRun run = pipe.run("phi_minus");
  run.target = "(|1001>+|0110>-|0011>-|1100>)/2";
  run.target_state = phi_minus_state(basis);
  run.fidelity = fidelity(*run.target_state, run.final_state);
  run.set("loaded_pair_fidelity", loaded);
  report.runs.push_back(std::move(run));
  return report;
}

ExperimentReport prepare_phi_plus(const ProtocolConfig &config) {
  const LevelScheme scheme = protocol_scheme(config, {ExtraRole::kRydberg}, 4, 4);
  const BasisPtr basis = build_basis(scheme);
  const Level one = scheme.register_level(1);
  const Level r = scheme.level(ExtraRole::kRydberg);
  const CompositeTransfer transfer = default_composite_transfer();

  Pipeline pipe(vacuum_state(basis));
  load(pipe, one);
  pipe.apply(raman_split(scheme, one, scheme.register_level(2), std::sqrt(2.0 / 3.0), std::sqrt(1.0 / 3.0), "split 1-2"));
  pipe.apply(pi_pulse(scheme, Level::reservoir(), r, dominant_reservoir(pipe.state()), M_PI, "excite reservoir->r"));
  pipe.apply(segments_to_schedule(scheme, one, r, transfer.segments, "composite 1-r"));
  pipe.apply(pi_pulse(scheme, scheme.register_level(3), r, 1, 0.0, "r->3"));
  const Occupation doubly = occupation_of(scheme, {2, 0, 0, 0});
  const Occupation pair = occupation_of(scheme, {0, 1, 1, 0});
  const Pulse fix = align_branch(pipe.state(), doubly, pair, scheme.register_level(3), "branch phase 3");
  pipe.apply(fix);
  const double split = fidelity(two_excitation_state(basis, SymmetricCoeffs(split_coeffs())), pipe.state());
  pipe.apply(compile_unitary(scheme, phi_plus_transform(), registers_of(scheme)));

  ExperimentReport report{"phi_plus", scheme, {}, {}};
  add_config_notes(report, config);
  report.note("composite", "three-segment transfer on (1,r), unit durations");
  ReportRun run = pipe.run("phi_plus");
  run.target = "(|1001>+|0110>+|1100>+|0011>-2|0101>-2|1010>)/sqrt12";
  run.target_state = phi_plus_state(basis);
  run.fidelity = fidelity(*run.target_state, run.final_state);
  run.set("split_state_fidelity", split);
  run.set("theta_a", transfer.theta_a);
  run.set("theta_b", transfer.theta_b);
  run.set("branch_correction", fix.phase);
  report.runs.push_back(std::move(run));
  return report;
}

Preparation box_preparation(const LevelScheme &scheme, BoxVariant variant) {
  const BasisPtr basis = build_basis(scheme);
  const Level r = scheme.level(ExtraRole::kRydberg);
  const Level one = scheme.register_level(1);
  Pipeline pipe(vacuum_state(basis));
  if (variant == BoxVariant::kTwoRydberg) {
    if (!scheme.find(ExtraRole::kRydberg2)) {
      throw ConfigError("the two-Rydberg box preparation needs a level r2");
    }
    const Level r2 = scheme.level(ExtraRole::kRydberg2);
    load(pipe, one);
    load(pipe, scheme.register_level(3));
    pipe.apply(raman_split(scheme, one, scheme.register_level(2), 1.0, 1.0, "split 1-2"));
    pipe.apply(pi_pulse(scheme, one, r, 1, 0.0, "1->r"));
    pipe.apply(pi_pulse(scheme, scheme.register_level(3), r2, 1, 0.0, "3->r2 unless r"));
    pipe.apply(pi_pulse(scheme, scheme.register_level(4), r2, 1, 0.0, "r2->4"));
    pipe.apply(pi_pulse(scheme, one, r, 1, 0.0, "r->1"));
    return {pipe.schedule(), pipe.state()};
  }
  const CompositeTransfer transfer = default_composite_transfer();
  load(pipe, one);
  pipe.apply(raman_split(scheme, one, scheme.register_level(2), 1.0, 1.0, "split 1-2"));
  pipe.apply(pi_pulse(scheme, Level::reservoir(), r, dominant_reservoir(pipe.state()), M_PI, "excite reservoir->r"));
  pipe.apply(segments_to_schedule(scheme, one, r, transfer.segments, "composite 1-r"));
  pipe.apply(pi_pulse(scheme, scheme.register_level(4), r, 1, 0.0, "r->4"));
  pipe.apply(align_branch(
      pipe.state(), occupation_of(scheme, {2, 0, 0, 0}), occupation_of(scheme, {0, 1, 0, 1}),
      scheme.register_level(4), "branch phase 4"));
  // (|2000> + |0101>)/sqrt2: one atom of the pair in 1 goes to r (pi/sqrt2 nominal), then to 3.
  pipe.apply(area_pulse(scheme, one, r, 2, M_PI, 0.0, "pi/sqrt2 1->r"));
  pipe.apply(pi_pulse(scheme, scheme.register_level(3), r, 1, 0.0, "r->3"));
  pipe.apply(align_branch(
      pipe.state(), occupation_of(scheme, {0, 1, 0, 1}), occupation_of(scheme, {1, 0, 1, 0}),
      scheme.register_level(3), "branch phase 3"));
  return {pipe.schedule(), pipe.state()};
}

ExperimentReport prepare_box(const ProtocolConfig &config, BoxVariant variant) {
  std::vector<ExtraRole> extras{ExtraRole::kRydberg};
  if (variant == BoxVariant::kTwoRydberg) {
    extras.push_back(ExtraRole::kRydberg2);
  }
  const LevelScheme scheme = protocol_scheme(config, extras, 4, 4);
  const BasisPtr basis = build_basis(scheme);
  Preparation prep = box_preparation(scheme, variant);
  ExperimentReport report{"box_" + std::string(box_variant_name(variant)), scheme, {}, {}};
  add_config_notes(report, config);
  if (variant == BoxVariant::kSingleRydberg) {
    report.note("intermediate", "(|2000>+|0101>)/sqrt2 with the transferred atom parked in level 4");
  }
  ReportRun run(report.protocol, vacuum_state(basis), prep.state, prep.schedule);
  run.target = "(|1010>+|0101>)/sqrt2";
  run.target_state = box_state(basis);
  run.fidelity = fidelity(*run.target_state, run.final_state);
  report.runs.push_back(std::move(run));
  return report;
}

ExperimentReport braiding_experiment(const ProtocolConfig &config, const BraidingOptions &options) {
  std::vector<ExtraRole> extras{ExtraRole::kRydberg};
  if (options.box == BoxVariant::kTwoRydberg || options.gate == GateVariant::kTwoRydberg) {
    extras.push_back(ExtraRole::kRydberg2);
  }
  extras.push_back(ExtraRole::kControl);
  // Under soft blockade every reservoir exchange leaks ~Omega/V into states with
  // one more atom, and the leaks compound over the x-string: each step costs
  // about 1e-3 in amplitude at V/Omega = 1e3, so the cap must sit four above the
  // hard-mode one before truncation stays below the 1e-12 threshold.
  const LevelScheme scheme = protocol_scheme(config, extras, 5, 9);
  const BasisPtr basis = build_basis(scheme);
  const Level c = scheme.level(ExtraRole::kControl);
  const Level r = scheme.level(ExtraRole::kRydberg);

  Preparation prep = box_preparation(scheme, options.box);
  Pipeline pipe(prep.state);
  const std::int64_t reference = dominant_reservoir(pipe.state());

  // (i) control superposition (|0> + |1>)/sqrt2 in level c.
  pipe.apply(area_pulse(scheme, Level::reservoir(), r, reference, M_PI / 2.0, M_PI, "control half excitation"));
  pipe.apply(pi_pulse(scheme, c, r, 1, 0.0, "control r->c"));
  const StateVector control_ready = pipe.state();

  // Gate with phases (0, pi, pi, pi) followed by pi on c: sigma_1^z iff the control is 0.
  Schedule flux = controlled_phase(scheme, options.gate);
  flux.append(light_shift(c, M_PI, "flux only for control 0"));
  if (options.with_flux) {
    pipe.apply(flux);
  }
  const StateVector after_flux = pipe.state();
  for (int i = 1; i <= 4; ++i) {
    pipe.apply(sigma_x(scheme, i, reference));
  }
  if (options.with_flux) {
    pipe.apply(flux);
  }
  const StateVector before_readout = pipe.state();
  // (v) maps (|0>+|1>)/sqrt2 -> n_r = 0 and (-|0>+|1>)/sqrt2 -> n_r = 1.
  pipe.apply(pi_pulse(scheme, c, r, 1, M_PI, "readout c->r"));
  pipe.apply(area_pulse(scheme, Level::reservoir(), r, reference, M_PI / 2.0, 0.0, "readout half pulse"));

  // Reference states for the checkpoints, built from the prepared |box>.
  const StateVector box = prep.state;
  auto with_control = [&](const StateVector &reg0, const StateVector &reg1) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    for (std::size_t k = 0; k < basis->size(); ++k) {
      Occupation occ = basis->state(k);
      if (occ[static_cast<std::size_t>(c.mode)] != 0) {
        continue;
      }
      Occupation up = occ;
      up[static_cast<std::size_t>(c.mode)] = 1;
      auto kk = static_cast<Eigen::Index>(k);
      amps(kk) += reg0.amplitudes()(kk) / std::sqrt(2.0);
      if (auto j = basis->find(up)) {
        amps(static_cast<Eigen::Index>(*j)) += reg1.amplitudes()(kk) / std::sqrt(2.0);
      }
    }
    return StateVector(basis, amps);
  };
  const StateVector flipped = phase_on_occupation(box, scheme.register_level(1), M_PI);
  const StateVector ideal_flux = with_control(options.with_flux ? flipped : box, box);

  ExperimentReport report{"braiding", scheme, {}, {}};
  add_config_notes(report, config);
  report.note("flux", options.with_flux ? "yes" : "no");
  report.note("box_variant", std::string(box_variant_name(options.box)));
  report.note("gate_variant", std::string(gate_variant_name(options.gate)));
  report.note("readout", "n_r = 0 <-> (|0>+|1>)/sqrt2, n_r = 1 <-> (-|0>+|1>)/sqrt2");
  ReportRun run = pipe.run("braiding");
  run.initial = prep.state;
  run.target = options.with_flux ? "control (-|0>+|1>)/sqrt2" : "control (|0>+|1>)/sqrt2";
  Distribution d = occupation_distribution(pipe.state(), r);
  double p_plus = 0.0;
  double p_minus = 0.0;
  for (const auto &[v, p] : d.outcomes) {
    (v == 0 ? p_plus : p_minus) += v <= 1 ? p : 0.0;
  }
  run.distributions.push_back(d);
  run.set("p_plus", p_plus);
  run.set("p_minus", p_minus);
  run.set("box_fidelity", fidelity(box_state(basis), box));
  run.set("control_ready_fidelity", fidelity(with_control(box, box), control_ready));
  run.set("after_flux_fidelity", fidelity(ideal_flux, after_flux));
  // Register overlap <box| string |box> per control branch, from the state before readout.
  auto branch_overlap = [&](int n_c) {
    Complex sum = 0.0;
    Complex ref = 0.0;
    for (std::size_t k = 0; k < basis->size(); ++k) {
      Occupation occ = basis->state(k);
      if (occ[static_cast<std::size_t>(c.mode)] != n_c) {
        continue;
      }
      occ[static_cast<std::size_t>(c.mode)] = 0;
      auto j = static_cast<Eigen::Index>(basis->index(occ));
      sum += std::conj(control_ready.amplitudes()(static_cast<Eigen::Index>(k))) *
             before_readout.amplitudes()(static_cast<Eigen::Index>(k));
      ref += std::conj(box.amplitudes()(j)) * box.amplitudes()(j) / 2.0;
    }
    return sum / ref;
  };
  const Complex o0 = branch_overlap(0);
  const Complex o1 = branch_overlap(1);
  run.set("branch0_overlap_re", o0.real());
  run.set("branch0_overlap_im", o0.imag());
  run.set("branch1_overlap_re", o1.real());
  run.set("branch1_overlap_im", o1.imag());
  // The sign the x-string acquires relative to the control-1 branch.
  run.set("relative_sign", std::cos(std::arg(o0) - std::arg(o1)));
  report.runs.push_back(std::move(run));
  return report;
}

double sigma_x_infidelity(std::int64_t atoms) {
  ProtocolConfig config;
  config.atoms = atoms;
  const LevelScheme scheme = protocol_scheme(config, {ExtraRole::kRydberg, ExtraRole::kRydberg2}, 4, 4);
  const BasisPtr basis = build_basis(scheme);
  Preparation prep = box_preparation(scheme, BoxVariant::kTwoRydberg);
  StateVector out = run_schedule(prep.state, sigma_x(scheme, 1, atoms - 2));
  Eigen::VectorXcd ideal = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t k = 0; k < basis->size(); ++k) {
    Occupation occ = basis->state(k);
    occ[0] ^= 1;
    if (auto j = basis->find(occ)) {
      ideal(static_cast<Eigen::Index>(*j)) = prep.state.amplitudes()(static_cast<Eigen::Index>(k));
    }
  }
  return 1.0 - fidelity(StateVector(basis, ideal), out);
}

std::array<Eigen::Vector3d, 4> spinon_inputs() {
  const double h = 1.0 / std::sqrt(2.0);
  const double t = 1.0 / std::sqrt(3.0);
  return {Eigen::Vector3d(h, -h, 0), Eigen::Vector3d(-h, 0, h), Eigen::Vector3d(0, h, -h), Eigen::Vector3d(t, t, t)};
}

ExperimentReport spinon_demo(const ProtocolConfig &config) {
  const LevelScheme scheme = protocol_scheme(config, {ExtraRole::kRydberg}, 2, 2);
  const BasisPtr basis = build_basis(scheme);
  const std::vector<Level> levels{scheme.register_level(2), scheme.register_level(3), scheme.register_level(4)};
  const Eigen::MatrixXcd transform = spinon_transform().transpose().cast<Complex>();
  const Schedule rotate = compile_unitary(scheme, transform, levels);

  ExperimentReport report{"spinon", scheme, {}, {}};
  add_config_notes(report, config);
  const char *names[] = {"spinon_14", "spinon_13", "spinon_12", "symmetric"};
  const auto inputs = spinon_inputs();
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    // Single-atom map with first row = input vector, completed to an orthonormal basis.
    Eigen::Matrix3d cols;
    cols.col(0) = inputs[k];
    cols.col(1) = Eigen::Vector3d::UnitX();
    cols.col(2) = Eigen::Vector3d::UnitY();
    if (std::abs(inputs[k].dot(Eigen::Vector3d::UnitX().cross(Eigen::Vector3d::UnitY()))) < 1e-6) {
      cols.col(2) = Eigen::Vector3d::UnitZ();
    }
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(cols);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.col(0).dot(inputs[k]) < 0.0) {
      q.col(0) = -q.col(0);
    }
    const Eigen::MatrixXcd prep_u = q.transpose().cast<Complex>();

    Pipeline pipe(vacuum_state(basis));
    load(pipe, scheme.register_level(2));
    pipe.apply(compile_unitary(scheme, prep_u, levels));
    Eigen::VectorXcd want = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    for (int j = 0; j < 3; ++j) {
      std::vector<int> occ(4, 0);
      occ[static_cast<std::size_t>(j + 1)] = 1;
      want(static_cast<Eigen::Index>(basis->index(occupation_of(scheme, occ)))) = inputs[k](j);
    }
    const StateVector input_state(basis, want);
    const double prepared = fidelity(input_state, pipe.state());
    pipe.apply(rotate);

    ReportRun run = pipe.run(names[k]);
    run.target = k < 3 ? "outcome 0 on level 2" : "outcome 1 on level 2";
    run.distributions.push_back(occupation_distribution(run.final_state, scheme.register_level(2)));
    run.set("input_fidelity", prepared);
    for (int j = 0; j < 3; ++j) {
      std::vector<int> occ(4, 0);
      occ[static_cast<std::size_t>(j + 1)] = 1;
      Complex a = run.final_state.amplitude(occupation_of(scheme, occ));
      run.set("amp_" + std::to_string(j + 2) + "_re", a.real());
      run.set("amp_" + std::to_string(j + 2) + "_im", a.imag());
    }
    report.runs.push_back(std::move(run));
  }
  return report;
}

}  // namespace rydsim
