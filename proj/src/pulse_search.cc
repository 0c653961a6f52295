#include "rydsim/pulse_search.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rydsim/errors.h"
#include "rydsim/schedule_io.h"

namespace rydsim {

namespace {

constexpr double kPenalty = 1e6;
constexpr double kBoxPenalty = 1e3;

struct TransferBasis {
  LevelScheme scheme = transfer_scheme();
  BasisPtr basis = build_basis(scheme);
  Level ground = scheme.register_level(1);
  Level rydberg = scheme.level(ExtraRole::kRydberg);
  Eigen::Index from_pair = static_cast<Eigen::Index>(basis->index({1, 1}));
  Eigen::Index to_pair = static_cast<Eigen::Index>(basis->index({2, 0}));
  Eigen::Index lone = static_cast<Eigen::Index>(basis->index({0, 1}));
};

const TransferBasis &transfer_basis() {
  static const TransferBasis tb;
  return tb;
}

// Per-segment return parametrization: omega_t = 2 pi m cos(beta), delta_t = 2 pi m sin(beta).
SegmentParams cycle_segment(int m, double beta, double phase) {
  return {2.0 * M_PI * m * std::cos(beta), 2.0 * M_PI * m * std::sin(beta), phase};
}

double box_excess(const SegmentParams &s, const TransferSearchOptions &o) {
  return std::max(0.0, -s.omega_t) + std::max(0.0, s.omega_t - o.omega_t_max) +
         std::max(0.0, std::abs(s.delta_t) - o.delta_t_max);
}

SegmentParams clamp_to_box(SegmentParams s, const TransferSearchOptions &o) {
  s.omega_t = std::clamp(s.omega_t, 0.0, o.omega_t_max);
  s.delta_t = std::clamp(s.delta_t, -o.delta_t_max, o.delta_t_max);
  s.phase = s.phase - 2.0 * M_PI * std::floor(s.phase / (2.0 * M_PI));
  return s;
}

std::vector<std::vector<int>> cycle_tuples(const TransferSearchOptions &o) {
  const int m_max = static_cast<int>(std::floor(std::hypot(o.omega_t_max, o.delta_t_max) / (2.0 * M_PI) + 1e-12));
  if (m_max < 1) {
    throw ConfigError("parameter box admits no whole Rabi cycle");
  }
  std::vector<std::vector<int>> tuples{{}};
  for (int k = 0; k < o.segments; ++k) {
    std::vector<std::vector<int>> next;
    for (const auto &t : tuples) {
      for (int m = 1; m <= m_max; ++m) {
        auto u = t;
        u.push_back(m);
        next.push_back(u);
      }
    }
    tuples = std::move(next);
  }
  return tuples;
}

std::vector<LocalOptimum> cluster(std::vector<double> values) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<LocalOptimum> out;
  for (double v : values) {
    if (!out.empty() && out.back().fidelity - v <= 1e-4) {
      ++out.back().count;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

}  // namespace

LevelScheme transfer_scheme() { return LevelScheme(1, {ExtraRole::kRydberg}, 2, 2); }

Schedule segments_to_schedule(
    const LevelScheme &scheme, Level ground, Level rydberg, const std::vector<SegmentParams> &segments,
    const std::string &label) {
  Schedule s;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const SegmentParams &p = segments[k];
    Pulse pulse;
    pulse.kind = PulseKind::kRydbergDrive;
    pulse.a = ground;
    pulse.b = rydberg;
    pulse.rabi = std::abs(p.omega_t);
    pulse.phase = p.omega_t < 0.0 ? p.phase + M_PI : p.phase;
    pulse.detuning = p.delta_t;
    pulse.duration = 1.0;
    pulse.reference = 1;
    pulse.label = label + " " + std::to_string(k + 1);
    s.append(pulse);
  }
  (void)scheme;
  return s;
}

TransferAmplitudes transfer_amplitudes(const std::vector<SegmentParams> &segments) {
  const TransferBasis &tb = transfer_basis();
  const auto n = static_cast<Eigen::Index>(tb.basis->size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (const Pulse &p : segments_to_schedule(tb.scheme, tb.ground, tb.rydberg, segments).pulses) {
    u = pulse_unitary(*tb.basis, p) * u;
  }
  return {u(tb.to_pair, tb.from_pair), u(tb.lone, tb.lone)};
}

TransferSearchResult optimize_transfer(const TransferSearchOptions &options) {
  if (options.segments < 1) {
    throw ConfigError("transfer search needs at least one segment");
  }
  if (options.restarts < 200) {
    throw ConfigError("transfer search needs a budget of at least 200 restarts");
  }
  if (!(options.omega_t_max > 0.0) || !(options.delta_t_max >= 0.0)) {
    throw ConfigError("transfer search box must have omega_t_max > 0 and delta_t_max >= 0");
  }
  const int segs = options.segments;
  const bool cycles = options.constraint == ReturnConstraint::kPerSegmentReturn;
  const auto tuples = cycles ? cycle_tuples(options) : std::vector<std::vector<int>>{{}};

  TransferSearchResult out;
  std::vector<double> feasible_values;
  double best_value = -1.0;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NelderMeadOptions local;
  local.max_evaluations = options.max_evaluations;

  for (int r = 0; r < options.restarts; ++r) {
    const std::vector<int> &ms = tuples[static_cast<std::size_t>(r) % tuples.size()];
    // Decodes the search vector into (unclamped) segments.
    auto decode = [&](const Eigen::VectorXd &x) {
      std::vector<SegmentParams> s(static_cast<std::size_t>(segs));
      for (int k = 0; k < segs; ++k) {
        auto ks = static_cast<std::size_t>(k);
        s[ks] = cycles ? cycle_segment(ms[ks], x(2 * k), x(2 * k + 1)) : SegmentParams{x(3 * k), x(3 * k + 1), x(3 * k + 2)};
      }
      return s;
    };
    auto objective = [&](const Eigen::VectorXd &x) {
      std::vector<SegmentParams> s = decode(x);
      double excess = 0.0;
      for (auto &seg : s) {
        excess += box_excess(seg, options);
        seg = clamp_to_box(seg, options);
      }
      TransferAmplitudes a = transfer_amplitudes(s);
      double value = -a.transfer_fidelity() + kBoxPenalty * excess;
      if (!cycles) {
        value += kPenalty * a.violation();
      }
      return value;
    };

    const int dim = cycles ? 2 * segs : 3 * segs;
    Eigen::VectorXd x0(dim);
    Eigen::VectorXd step(dim);
    for (int k = 0; k < segs; ++k) {
      if (cycles) {
        x0(2 * k) = M_PI * (unit(rng) - 0.5);
        x0(2 * k + 1) = 2.0 * M_PI * unit(rng);
        step(2 * k) = 0.1 * M_PI;
        step(2 * k + 1) = 0.2 * M_PI;
      } else {
        x0(3 * k) = options.omega_t_max * unit(rng);
        x0(3 * k + 1) = options.delta_t_max * (2.0 * unit(rng) - 1.0);
        x0(3 * k + 2) = 2.0 * M_PI * unit(rng);
        step(3 * k) = 0.1 * options.omega_t_max;
        step(3 * k + 1) = 0.2 * std::max(options.delta_t_max, 1.0);
        step(3 * k + 2) = 0.2 * M_PI;
      }
    }
    NelderMeadResult res = nelder_mead(objective, x0, step, local);
    out.evaluations += res.evaluations;

    std::vector<SegmentParams> s = decode(res.x);
    double excess = 0.0;
    for (auto &seg : s) {
      excess += box_excess(seg, options);
      seg = clamp_to_box(seg, options);
    }
    TransferAmplitudes a = transfer_amplitudes(s);
    if (excess > 1e-9 || a.violation() > options.feasibility) {
      continue;
    }
    ++out.feasible_restarts;
    feasible_values.push_back(a.transfer_fidelity());
    if (a.transfer_fidelity() > best_value) {
      best_value = a.transfer_fidelity();
      out.segments = s;
      out.amplitudes = a;
    }
  }
  if (out.feasible_restarts == 0) {
    throw NumericalError("transfer search exhausted its budget without a feasible point");
  }
  out.fidelity = out.amplitudes.transfer_fidelity();
  out.violation = out.amplitudes.violation();
  out.local_optima = cluster(feasible_values);
  return out;
}

TransferSearchResult optimize_two_pulse_transfer(TransferSearchOptions options) {
  options.segments = 2;
  return optimize_transfer(options);
}

CompositeTransfer derive_composite_transfer_params(int restarts, std::uint64_t seed) {
  TransferSearchOptions o;
  o.segments = 3;
  o.restarts = restarts;
  o.seed = seed;
  o.max_evaluations = 6000;
  TransferSearchResult r = optimize_transfer(o);
  CompositeTransfer c;
  c.segments = r.segments;
  c.transfer_fidelity = r.amplitudes.transfer_fidelity();
  c.stay_population = std::norm(r.amplitudes.stay);
  c.theta_a = std::arg(r.amplitudes.transfer);
  c.theta_b = std::arg(r.amplitudes.stay);
  if (c.transfer_fidelity < 1.0 - 1e-8 || c.stay_population < 1.0 - 1e-8) {
    throw NumericalError(
        "three-segment search reached only transfer " + format_double(c.transfer_fidelity) + ", stay " +
        format_double(c.stay_population));
  }
  return c;
}

CompositeTransfer default_composite_transfer() {
  // Output of derive_composite_transfer_params(200, 1), written out in full.
  CompositeTransfer c;
  c.segments = {
      {2.3601165474984431, -10.209315387600228, 6.0589439056002634},
      {9.2011760250733925, 7.7655255525158733, 4.5258361033120833},
      {3.1753744650568585, -6.1332624573049523, 5.2711132252883584},
  };
  TransferAmplitudes a = transfer_amplitudes(c.segments);
  c.transfer_fidelity = a.transfer_fidelity();
  c.stay_population = std::norm(a.stay);
  c.theta_a = std::arg(a.transfer);
  c.theta_b = std::arg(a.stay);
  if (c.transfer_fidelity < 1.0 - 1e-8 || c.stay_population < 1.0 - 1e-8) {
    throw NumericalError("stored three-segment transfer no longer verifies");
  }
  return c;
}

PhaseScan scan_phase_gate(const std::vector<double> &grid) {
  PhaseScan scan;
  for (double omega_t : grid) {
    PhaseScanRow row;
    row.omega_t = omega_t;
    row.cos_x = std::cos(std::sqrt(2.0) * omega_t);
    SimulatedPhases sim = simulate_phase_deltas(omega_t);
    row.simulated = sim.deltas;
    row.analytic = analytic_phase_deltas(omega_t);
    row.dev10 = phase_distance(row.simulated.d10, row.analytic.d10);
    row.dev01 = phase_distance(row.simulated.d01, row.analytic.d01);
    row.dev11 = phase_distance(row.simulated.d11, row.analytic.d11);
    row.max_leak = sim.max_leak;
    scan.max_dev_single = std::max({scan.max_dev_single, row.dev10, row.dev01});
    scan.max_dev_double = std::max(scan.max_dev_double, row.dev11);
    scan.max_leak = std::max(scan.max_leak, row.max_leak);
    scan.rows.push_back(row);
  }
  return scan;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
  if (count < 1) {
    throw ConfigError("grid needs at least one point");
  }
  std::vector<double> g;
  for (int k = 0; k < count; ++k) {
    g.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
  }
  return g;
}

std::string phase_scan_to_csv(const PhaseScan &scan) {
  std::string out =
      "omega_t,cos_x,sim_d10,sim_d01,sim_d11,analytic_d10,analytic_d01,analytic_d11,dev_d10,dev_d01,dev_d11,max_leak\n";
  for (const PhaseScanRow &r : scan.rows) {
    for (double v : {r.omega_t, r.cos_x, r.simulated.d10, r.simulated.d01, r.simulated.d11, r.analytic.d10,
                     r.analytic.d01, r.analytic.d11, r.dev10, r.dev01, r.dev11}) {
      out += format_double(v) + ",";
    }
    out += format_double(r.max_leak) + "\n";
  }
  return out;
}

std::string transfer_result_to_csv(const TransferSearchResult &result) {
  std::string out = "segment,omega_t,delta_t,phase\n";
  for (std::size_t k = 0; k < result.segments.size(); ++k) {
    const SegmentParams &s = result.segments[k];
    out += std::to_string(k + 1) + "," + format_double(s.omega_t) + "," + format_double(s.delta_t) + "," +
           format_double(s.phase) + "\n";
  }
  out += "\nlocal_optimum_fidelity,count\n";
  for (const LocalOptimum &l : result.local_optima) {
    out += format_double(l.fidelity) + "," + std::to_string(l.count) + "\n";
  }
  return out;
}

}  // namespace rydsim
