#include "rydsim/fock_space.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

constexpr double kSupportTolerance = 1e-12;

void require_same_basis(const StateVector &a, const StateVector &b) {
  if (a.basis_ptr() != b.basis_ptr() && !(a.scheme() == b.scheme())) {
    throw DomainError("states live on different level schemes");
  }
}

void enumerate(
    const LevelScheme &scheme,
    const std::vector<int> &caps,
    const std::vector<bool> &rydberg,
    std::size_t mode,
    int remaining,
    int rydberg_total,
    Occupation &current,
    std::vector<Occupation> &out) {
  if (mode == caps.size()) {
    out.push_back(current);
    return;
  }
  int top = std::min(caps[mode], remaining);
  for (int n = 0; n <= top; ++n) {
    int ryd = rydberg_total + (rydberg[mode] ? n : 0);
    // Hard blockade: at most one Rydberg excitation across all Rydberg levels.
    if (scheme.blockade().mode == BlockadeMode::kHard && ryd > 1) {
      break;
    }
    current[mode] = n;
    enumerate(scheme, caps, rydberg, mode + 1, remaining - n, ryd, current, out);
  }
  current[mode] = 0;
}

}  // namespace

OccupationBasis::OccupationBasis(LevelScheme scheme) : scheme_(std::move(scheme)) {
  const int modes = scheme_.mode_count();
  std::vector<int> caps(modes);
  std::vector<bool> rydberg(modes);
  for (int m = 0; m < modes; ++m) {
    caps[m] = scheme_.cap(Level{m});
    rydberg[m] = scheme_.is_rydberg(Level{m});
  }
  Occupation current(modes, 0);
  enumerate(scheme_, caps, rydberg, 0, scheme_.tracked_cap(), 0, current, states_);
  if (states_.empty()) {
    throw ConfigError("level scheme admits no basis states");
  }
}

std::optional<std::size_t> OccupationBasis::find(const Occupation &occupation) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), occupation);
  if (it == states_.end() || *it != occupation) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t OccupationBasis::index(const Occupation &occupation) const {
  auto found = find(occupation);
  if (!found) {
    std::string text;
    for (int n : occupation) {
      text += std::to_string(n) + ",";
    }
    throw DomainError("occupation (" + text + ") is outside the basis");
  }
  return *found;
}

int OccupationBasis::tracked_total(std::size_t index) const {
  const Occupation &occ = states_.at(index);
  return std::accumulate(occ.begin(), occ.end(), 0);
}

std::int64_t OccupationBasis::reservoir_occupancy(std::size_t index) const {
  return scheme_.total_atoms() - tracked_total(index);
}

std::int64_t OccupationBasis::occupation(std::size_t index, Level level) const {
  if (level.is_reservoir()) {
    return reservoir_occupancy(index);
  }
  return states_.at(index).at(level.mode);
}

BasisPtr build_basis(const LevelScheme &scheme) { return std::make_shared<const OccupationBasis>(scheme); }

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) {
    throw DomainError("state vector needs a basis");
  }
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size()) {
    throw DomainError("amplitude count does not match the basis size");
  }
}

Complex StateVector::amplitude(const Occupation &occupation) const {
  auto found = basis_->find(occupation);
  return found ? amplitudes_(static_cast<Eigen::Index>(*found)) : Complex{};
}

SymmetricCoeffs::SymmetricCoeffs(const Eigen::MatrixXcd &matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw DomainError("coefficient matrix must be square");
  }
  matrix_ = 0.5 * (matrix + matrix.transpose());
}

double SymmetricCoeffs::state_norm_squared() const {
  double total = 0.0;
  for (int i = 0; i < dim(); ++i) {
    total += 2.0 * std::norm(matrix_(i, i));
    for (int j = i + 1; j < dim(); ++j) {
      total += 4.0 * std::norm(matrix_(i, j));
    }
  }
  return total;
}

SymmetricCoeffs SymmetricCoeffs::normalized() const {
  double n2 = state_norm_squared();
  if (!(n2 > 0.0)) {
    throw DomainError("cannot normalize a zero coefficient matrix");
  }
  return SymmetricCoeffs(matrix_ / std::sqrt(n2));
}

StateVector vacuum_state(const BasisPtr &basis) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  amps(static_cast<Eigen::Index>(basis->index(Occupation(basis->scheme().mode_count(), 0)))) = 1.0;
  return StateVector(basis, std::move(amps));
}

StateVector register_state(const BasisPtr &basis, const std::vector<int> &occupations) {
  const LevelScheme &scheme = basis->scheme();
  if (static_cast<int>(occupations.size()) != scheme.register_count()) {
    throw DomainError(
        "expected " + std::to_string(scheme.register_count()) + " register occupations, got " +
        std::to_string(occupations.size()));
  }
  Occupation occ(scheme.mode_count(), 0);
  std::copy(occupations.begin(), occupations.end(), occ.begin());
  if (std::any_of(occupations.begin(), occupations.end(), [](int n) { return n < 0; })) {
    throw DomainError("negative occupation");
  }
  auto found = basis->find(occ);
  if (!found) {
    throw DomainError("register occupations exceed the scheme's caps");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  amps(static_cast<Eigen::Index>(*found)) = 1.0;
  return StateVector(basis, std::move(amps));
}

namespace {

// a_mode^dag applied to a vector; the reservoir is not depleted.
Eigen::VectorXcd create(const OccupationBasis &basis, const Eigen::VectorXcd &in, int mode) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Complex a = in(static_cast<Eigen::Index>(k));
    if (a == Complex{}) {
      continue;
    }
    Occupation occ = basis.state(k);
    occ[mode] += 1;
    auto target = basis.find(occ);
    if (!target) {
      throw DomainError("two-excitation state does not fit in the basis");
    }
    out(static_cast<Eigen::Index>(*target)) += std::sqrt(static_cast<double>(occ[mode])) * a;
  }
  return out;
}

}  // namespace

StateVector two_excitation_state(const BasisPtr &basis, const SymmetricCoeffs &coeffs) {
  const int n = coeffs.dim();
  if (n > basis->scheme().register_count()) {
    throw DomainError("coefficient matrix is larger than the register");
  }
  if (coeffs.matrix().cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("zero coefficient matrix");
  }
  const Eigen::VectorXcd vac = vacuum_state(basis).amplitudes();
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(vac.size());
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXcd one = create(*basis, vac, j);
    for (int i = 0; i < n; ++i) {
      if (coeffs(i, j) != Complex{}) {
        total += coeffs(i, j) * create(*basis, one, i);
      }
    }
  }
  double norm = total.norm();
  if (!(norm > 0.0)) {
    throw DomainError("coefficient matrix defines the zero state");
  }
  return StateVector(basis, total / norm);
}

SymmetricCoeffs coeffs_from_state(const StateVector &state) {
  const OccupationBasis &basis = state.basis();
  const LevelScheme &scheme = basis.scheme();
  const int n = scheme.register_count();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Complex a = state.amplitudes()(static_cast<Eigen::Index>(k));
    const Occupation &occ = basis.state(k);
    int register_total = std::accumulate(occ.begin(), occ.begin() + n, 0);
    int extra_total = std::accumulate(occ.begin() + n, occ.end(), 0);
    if (register_total != 2 || extra_total != 0) {
      if (std::abs(a) > kSupportTolerance) {
        throw DomainError("state has support outside the two-excitation register sector");
      }
      continue;
    }
    std::vector<int> occupied;
    for (int i = 0; i < n; ++i) {
      for (int q = 0; q < occ[i]; ++q) {
        occupied.push_back(i);
      }
    }
    if (occupied[0] == occupied[1]) {
      c(occupied[0], occupied[0]) = a / std::sqrt(2.0);
    } else {
      c(occupied[0], occupied[1]) = a / 2.0;
      c(occupied[1], occupied[0]) = a / 2.0;
    }
  }
  SymmetricCoeffs coeffs(c);
  return coeffs.normalized();
}

Complex overlap(const StateVector &bra, const StateVector &ket) {
  require_same_basis(bra, ket);
  return bra.amplitudes().dot(ket.amplitudes());
}

double fidelity(const StateVector &a, const StateVector &b) { return std::norm(overlap(a, b)); }

StateVector phase_on_occupation(const StateVector &state, Level level, double phi) {
  const OccupationBasis &basis = state.basis();
  if (!basis.scheme().contains(level)) {
    throw ConfigError("light shift needs a tracked level");
  }
  Eigen::VectorXcd amps = state.amplitudes();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    int n = basis.state(k)[level.mode];
    if (n != 0) {
      amps(static_cast<Eigen::Index>(k)) *= std::polar(1.0, phi * n);
    }
  }
  return StateVector(state.basis_ptr(), std::move(amps));
}

std::vector<OccupationOutcome> measure_occupation(const StateVector &state, Level level) {
  const OccupationBasis &basis = state.basis();
  if (!basis.scheme().contains(level)) {
    throw ConfigError("can only measure a tracked level");
  }
  const int cap = basis.scheme().cap(level);
  std::vector<double> weight(cap + 1, 0.0);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    weight[basis.state(k)[level.mode]] += std::norm(state.amplitudes()(static_cast<Eigen::Index>(k)));
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  if (!(total > 0.0)) {
    throw DomainError("cannot measure the zero vector");
  }
  std::vector<OccupationOutcome> out;
  for (int value = 0; value <= cap; ++value) {
    OccupationOutcome outcome;
    outcome.value = value;
    outcome.probability = weight[value] / total;
    if (weight[value] > 0.0) {
      Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(state.amplitudes().size());
      for (std::size_t k = 0; k < basis.size(); ++k) {
        if (basis.state(k)[level.mode] == value) {
          amps(static_cast<Eigen::Index>(k)) = state.amplitudes()(static_cast<Eigen::Index>(k));
        }
      }
      amps /= amps.norm();
      outcome.post_state = StateVector(state.basis_ptr(), std::move(amps));
    }
    out.push_back(std::move(outcome));
  }
  return out;
}

OccupationOutcome sample_occupation(const StateVector &state, Level level, std::mt19937_64 &rng) {
  std::vector<OccupationOutcome> outcomes = measure_occupation(state, level);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (auto &o : outcomes) {
    acc += o.probability;
    if (u < acc && o.post_state) {
      return o;
    }
  }
  // Rounding left u above the accumulated total: return the last populated outcome.
  for (auto it = outcomes.rbegin(); it != outcomes.rend(); ++it) {
    if (it->post_state) {
      return *it;
    }
  }
  throw DomainError("no populated outcome");
}

std::string state_to_text(const StateVector &state, double threshold) {
  const OccupationBasis &basis = state.basis();
  std::string out;
  char buf[128];
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Complex a = state.amplitudes()(static_cast<Eigen::Index>(k));
    if (a == Complex{} || std::abs(a) <= threshold) {
      continue;
    }
    const Occupation &occ = basis.state(k);
    for (std::size_t m = 0; m < occ.size(); ++m) {
      if (m) {
        out += ',';
      }
      out += std::to_string(occ[m]);
    }
    std::snprintf(buf, sizeof buf, " %.17g %.17g\n", a.real(), a.imag());
    out += buf;
  }
  return out;
}

StateVector state_from_text(const BasisPtr &basis, const std::string &text) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream fields(line);
    std::string occ_text;
    double re = 0.0;
    double im = 0.0;
    if (!(fields >> occ_text >> re >> im)) {
      throw ParseError(line_no, static_cast<int>(first) + 1, "expected '<occupations> <re> <im>'");
    }
    std::string rest;
    if (fields >> rest) {
      throw ParseError(line_no, static_cast<int>(line.find(rest)) + 1, "trailing text '" + rest + "'");
    }
    Occupation occ;
    std::istringstream parts(occ_text);
    std::string part;
    while (std::getline(parts, part, ',')) {
      try {
        std::size_t used = 0;
        int n = std::stoi(part, &used);
        if (used != part.size() || n < 0) {
          throw std::invalid_argument(part);
        }
        occ.push_back(n);
      } catch (const std::exception &) {
        throw ParseError(line_no, static_cast<int>(first) + 1, "bad occupation entry '" + part + "'");
      }
    }
    auto found = basis->find(occ);
    if (!found) {
      throw ParseError(line_no, static_cast<int>(first) + 1, "occupation '" + occ_text + "' is not in the basis");
    }
    amps(static_cast<Eigen::Index>(*found)) = Complex(re, im);
  }
  return StateVector(basis, std::move(amps));
}

}  // namespace rydsim
