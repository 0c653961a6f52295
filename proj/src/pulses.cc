#include "rydsim/pulses.h"

#include <cmath>
#include <numeric>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

constexpr double kUnitarityTolerance = 1e-12;
constexpr double kLeakAmplitude = 1e-12;

struct Coupling {
  std::size_t from;
  std::size_t to;
  Complex value;  // <to|H|from>
};

struct Terms {
  Eigen::VectorXd diagonal;
  std::vector<Coupling> couplings;
  // Basis states whose drive partner was cut off by S_max.
  std::vector<std::size_t> truncated;
};

void validate(const LevelScheme &scheme, const Pulse &p) {
  if (!(p.duration >= 0.0) || !std::isfinite(p.duration)) {
    throw ConfigError("pulse duration must be finite and non-negative");
  }
  if (!std::isfinite(p.rabi) || !std::isfinite(p.phase) || !std::isfinite(p.detuning)) {
    throw ConfigError("pulse parameters must be finite");
  }
  if (p.rabi < 0.0) {
    throw ConfigError("Rabi frequency must be non-negative");
  }
  if (p.kind == PulseKind::kLightShift) {
    if (!scheme.contains(p.a)) {
      throw ConfigError("light shift needs a tracked level");
    }
    return;
  }
  if (!p.a.is_reservoir() && !scheme.contains(p.a)) {
    throw ConfigError("pulse couples an untracked level");
  }
  if (!scheme.contains(p.b)) {
    throw ConfigError("pulse target level must be tracked");
  }
  if (p.a == p.b) {
    throw ConfigError("pulse couples a level to itself");
  }
  const bool rydberg = scheme.is_rydberg(p.a) || scheme.is_rydberg(p.b);
  if (p.kind == PulseKind::kRydbergDrive && !scheme.is_rydberg(p.b)) {
    throw ConfigError("a Rydberg drive must target a Rydberg level");
  }
  if (p.kind == PulseKind::kRaman && rydberg) {
    throw ConfigError("Raman pulses couple ground levels only");
  }
}

// Whether `occ` respects the blockade rules, ignoring the S_max cap.
bool blockade_allows(const LevelScheme &scheme, const Occupation &occ) {
  int rydberg_total = 0;
  for (int m : scheme.rydberg_modes()) {
    if (occ[m] > scheme.soft_rydberg_cap()) {
      return false;
    }
    rydberg_total += occ[m];
  }
  return scheme.blockade().mode == BlockadeMode::kSoft || rydberg_total <= 1;
}

Eigen::VectorXd interaction_diagonal(const OccupationBasis &basis) {
  const LevelScheme &scheme = basis.scheme();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  if (scheme.blockade().mode != BlockadeMode::kSoft) {
    return diag;
  }
  const double v = scheme.blockade().v;
  const auto r = scheme.find(ExtraRole::kRydberg);
  const auto r2 = scheme.find(ExtraRole::kRydberg2);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation &occ = basis.state(k);
    double e = 0.0;
    for (int m : scheme.rydberg_modes()) {
      e += 0.5 * v * occ[m] * (occ[m] - 1);
    }
    if (r && r2) {
      e += scheme.blockade().v_cross * occ[r->mode] * occ[r2->mode];
    }
    diag(static_cast<Eigen::Index>(k)) = e;
  }
  return diag;
}

Terms hamiltonian_terms(const OccupationBasis &basis, const Pulse &p) {
  const LevelScheme &scheme = basis.scheme();
  Terms t;
  t.diagonal = interaction_diagonal(basis);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    t.diagonal(static_cast<Eigen::Index>(k)) -= p.detuning * basis.state(k)[p.b.mode];
  }
  if (p.rabi == 0.0) {
    return t;
  }
  const Complex drive = 0.5 * p.rabi * std::polar(1.0, p.phase);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::int64_t na = basis.occupation(k, p.a);
    if (na <= 0) {
      continue;
    }
    Occupation target = basis.state(k);
    if (!p.a.is_reservoir()) {
      target[p.a.mode] -= 1;
    }
    target[p.b.mode] += 1;
    auto to = basis.find(target);
    if (!to) {
      if (p.a.is_reservoir() && blockade_allows(scheme, target)) {
        t.truncated.push_back(k);
      }
      continue;
    }
    double element = std::sqrt(static_cast<double>(na)) * std::sqrt(static_cast<double>(target[p.b.mode]));
    t.couplings.push_back({k, *to, drive * element});
  }
  return t;
}

// Connected components of the coupling graph, each listed in increasing index order.
std::vector<std::vector<std::size_t>> components(std::size_t n, const std::vector<Coupling> &couplings) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const Coupling &c : couplings) {
    std::size_t a = root(c.from);
    std::size_t b = root(c.to);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t r = root(k);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(k);
  }
  return groups;
}

struct Propagator {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<Eigen::MatrixXcd> unitaries;
};

Propagator propagator(const OccupationBasis &basis, const Pulse &p, const Terms &terms) {
  Propagator out;
  out.blocks = components(basis.size(), terms.couplings);
  std::vector<std::size_t> where(basis.size());
  std::vector<std::size_t> block_of(basis.size());
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    for (std::size_t i = 0; i < out.blocks[b].size(); ++i) {
      where[out.blocks[b][i]] = i;
      block_of[out.blocks[b][i]] = b;
    }
  }
  std::vector<Eigen::MatrixXcd> h(out.blocks.size());
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    const auto m = static_cast<Eigen::Index>(out.blocks[b].size());
    h[b] = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      h[b](i, i) = terms.diagonal(static_cast<Eigen::Index>(out.blocks[b][i]));
    }
  }
  for (const Coupling &c : terms.couplings) {
    auto &hb = h[block_of[c.from]];
    auto i = static_cast<Eigen::Index>(where[c.to]);
    auto j = static_cast<Eigen::Index>(where[c.from]);
    hb(i, j) += c.value;
    hb(j, i) += std::conj(c.value);
  }
  out.unitaries.resize(out.blocks.size());
  for (std::size_t b = 0; b < out.blocks.size(); ++b) {
    if (h[b].rows() == 1) {
      out.unitaries[b] = Eigen::MatrixXcd::Constant(1, 1, std::polar(1.0, -h[b](0, 0).real() * p.duration));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h[b]);
    if (solver.info() != Eigen::Success) {
      throw NumericalError(
          "eigendecomposition failed on a block of size " + std::to_string(h[b].rows()) + " for pulse '" +
          p.label + "'");
    }
    Eigen::VectorXcd phases = (solver.eigenvalues() * (-p.duration)).unaryExpr([](double x) {
      return std::polar(1.0, x);
    });
    const Eigen::MatrixXcd &vecs = solver.eigenvectors();
    Eigen::MatrixXcd u = vecs * phases.asDiagonal() * vecs.adjoint();
    double residual = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
    if (!(residual <= kUnitarityTolerance)) {
      throw NumericalError(
          "propagator unitarity residual " + std::to_string(residual) + " exceeds 1e-12 for pulse '" + p.label +
          "' (block size " + std::to_string(h[b].rows()) + ")");
    }
    out.unitaries[b] = std::move(u);
  }
  return out;
}

}  // namespace

std::string_view pulse_kind_name(PulseKind kind) {
  switch (kind) {
    case PulseKind::kRaman:
      return "raman";
    case PulseKind::kRydbergDrive:
      return "rydberg_drive";
    case PulseKind::kLightShift:
      return "light_shift";
  }
  return "?";
}

Pulse light_shift(Level level, double phase, std::string label) {
  Pulse p;
  p.kind = PulseKind::kLightShift;
  p.a = level;
  p.b = level;
  p.phase = phase;
  p.label = std::move(label);
  return p;
}

Pulse area_pulse(
    const LevelScheme &scheme,
    Level a,
    Level b,
    std::int64_t reference,
    double area,
    double phase,
    std::string label) {
  if (reference <= 0) {
    throw DomainError("pulse calibration needs a positive reference occupancy");
  }
  Pulse p;
  p.kind = (scheme.is_rydberg(a) || scheme.is_rydberg(b)) ? PulseKind::kRydbergDrive : PulseKind::kRaman;
  if (scheme.is_rydberg(a) && !scheme.is_rydberg(b)) {
    // Drives are stored with the Rydberg level as target; the reversed
    // direction is the same coupling with conjugated phase.
    std::swap(a, b);
    phase = -phase;
  }
  p.a = a;
  p.b = b;
  p.rabi = 1.0 / std::sqrt(static_cast<double>(reference));
  p.duration = area;
  p.phase = phase;
  p.reference = reference;
  p.label = std::move(label);
  validate(scheme, p);
  return p;
}

Pulse pi_pulse(const LevelScheme &scheme, Level a, Level b, std::int64_t reference, double phase, std::string label) {
  return area_pulse(scheme, a, b, reference, M_PI, phase, std::move(label));
}

Eigen::MatrixXcd build_hamiltonian(const OccupationBasis &basis, const Pulse &pulse) {
  validate(basis.scheme(), pulse);
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (pulse.kind == PulseKind::kLightShift) {
    return Eigen::MatrixXcd::Zero(n, n);
  }
  Terms terms = hamiltonian_terms(basis, pulse);
  Eigen::MatrixXcd h = terms.diagonal.cast<Complex>().asDiagonal();
  for (const Coupling &c : terms.couplings) {
    h(static_cast<Eigen::Index>(c.to), static_cast<Eigen::Index>(c.from)) += c.value;
    h(static_cast<Eigen::Index>(c.from), static_cast<Eigen::Index>(c.to)) += std::conj(c.value);
  }
  return h;
}

Eigen::MatrixXcd pulse_unitary(const OccupationBasis &basis, const Pulse &pulse) {
  validate(basis.scheme(), pulse);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  if (pulse.kind == PulseKind::kLightShift) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) =
          std::polar(1.0, pulse.phase * basis.state(k)[pulse.a.mode]);
    }
    return u;
  }
  Propagator prop = propagator(basis, pulse, hamiltonian_terms(basis, pulse));
  for (std::size_t b = 0; b < prop.blocks.size(); ++b) {
    const auto &idx = prop.blocks[b];
    for (std::size_t i = 0; i < idx.size(); ++i) {
      for (std::size_t j = 0; j < idx.size(); ++j) {
        u(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j])) =
            prop.unitaries[b](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return u;
}

StateVector evolve(const StateVector &state, const Pulse &pulse) {
  const OccupationBasis &basis = state.basis();
  validate(basis.scheme(), pulse);
  if (pulse.kind == PulseKind::kLightShift) {
    return phase_on_occupation(state, pulse.a, pulse.phase);
  }
  Terms terms = hamiltonian_terms(basis, pulse);
  if (pulse.duration > 0.0) {
    for (std::size_t k : terms.truncated) {
      if (std::abs(state.amplitudes()(static_cast<Eigen::Index>(k))) > kLeakAmplitude) {
        throw DomainError(
            "pulse '" + pulse.label + "' drives population past the tracked cap S_max=" +
            std::to_string(basis.scheme().tracked_cap()));
      }
    }
  }
  Propagator prop = propagator(basis, pulse, terms);
  const Eigen::VectorXcd &in = state.amplitudes();
  Eigen::VectorXcd out(in.size());
  for (std::size_t b = 0; b < prop.blocks.size(); ++b) {
    const auto &idx = prop.blocks[b];
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXcd local(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      local(i) = in(static_cast<Eigen::Index>(idx[i]));
    }
    Eigen::VectorXcd moved = prop.unitaries[b] * local;
    for (Eigen::Index i = 0; i < m; ++i) {
      out(static_cast<Eigen::Index>(idx[i])) = moved(i);
    }
  }
  return StateVector(state.basis_ptr(), std::move(out));
}

StateVector run_schedule(const StateVector &state, const Schedule &schedule) {
  StateVector current = state;
  for (const Pulse &p : schedule.pulses) {
    current = evolve(current, p);
  }
  return current;
}

}  // namespace rydsim
