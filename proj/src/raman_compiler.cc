#include "rydsim/raman_compiler.h"

#include <algorithm>
#include <cmath>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

constexpr double kUnitaryTolerance = 1e-10;
constexpr double kNegligible = 1e-15;

Eigen::Index position(const std::vector<Level> &levels, Level level) {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) {
    throw DomainError("schedule touches a level outside the compiled set");
  }
  return it - levels.begin();
}

}  // namespace

Eigen::MatrixXcd single_atom_operator(const Schedule &schedule, const std::vector<Level> &levels) {
  const auto n = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(n, n);
  for (const Pulse &p : schedule.pulses) {
    Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(n, n);
    if (p.kind == PulseKind::kLightShift) {
      Eigen::Index i = position(levels, p.a);
      step(i, i) = std::polar(1.0, p.phase);
    } else {
      if (p.detuning != 0.0) {
        throw DomainError("single-atom operator only covers resonant pulses");
      }
      Eigen::Index a = position(levels, p.a);
      Eigen::Index b = position(levels, p.b);
      const double half = 0.5 * p.rabi * p.duration;
      step(a, a) = std::cos(half);
      step(b, b) = std::cos(half);
      step(b, a) = Complex(0.0, -std::sin(half)) * std::polar(1.0, p.phase);
      step(a, b) = Complex(0.0, -std::sin(half)) * std::polar(1.0, -p.phase);
    }
    total = step * total;
  }
  return total;
}

Schedule compile_unitary(const LevelScheme &scheme, const Eigen::MatrixXcd &u, const std::vector<Level> &levels) {
  const auto n = u.rows();
  if (u.cols() != n || static_cast<std::size_t>(n) != levels.size()) {
    throw DomainError("transformation must be square and match the level list");
  }
  if ((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm() > kUnitaryTolerance) {
    throw DomainError("transformation is not unitary");
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!scheme.contains(levels[i]) || scheme.is_rydberg(levels[i])) {
      throw DomainError("Raman compilation needs tracked ground levels");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (levels[i] == levels[j]) {
        throw DomainError("Raman compilation levels must be distinct");
      }
    }
  }

  // Single-atom target w = U^T. Right-multiplying by inverse pulses G = P^dag
  // clears row r left of the diagonal: w P_1^dag ... P_m^dag = D, hence
  // w = D P_m ... P_1 with P_1 applied first.
  Eigen::MatrixXcd w = u.transpose();
  Schedule schedule;
  for (Eigen::Index r = n - 1; r >= 1; --r) {
    for (Eigen::Index j = 0; j < r; ++j) {
      const Complex wrj = w(r, j);
      if (std::abs(wrj) <= kNegligible) {
        continue;
      }
      const Complex wrr = w(r, r);
      double theta = 2.0 * std::atan2(std::abs(wrj), std::abs(wrr));
      double phi = std::abs(wrr) <= kNegligible ? 0.0 : std::arg(wrj) - std::arg(wrr) + M_PI / 2.0;
      phi = std::remainder(phi, 2.0 * M_PI);
      // G = P^dag acting on columns (j, r).
      const double c = std::cos(0.5 * theta);
      const double s = std::sin(0.5 * theta);
      const Complex g_rj = Complex(0.0, s) * std::polar(1.0, phi);
      const Complex g_jr = Complex(0.0, s) * std::polar(1.0, -phi);
      Eigen::VectorXcd col_j = w.col(j);
      Eigen::VectorXcd col_r = w.col(r);
      w.col(j) = c * col_j + g_rj * col_r;
      w.col(r) = g_jr * col_j + c * col_r;
      w(r, j) = 0.0;

      Pulse p;
      p.kind = PulseKind::kRaman;
      p.a = levels[static_cast<std::size_t>(j)];
      p.b = levels[static_cast<std::size_t>(r)];
      p.rabi = 1.0;
      p.duration = theta;
      p.phase = phi;
      p.reference = 1;
      p.label = "raman " + scheme.level_name(p.a) + "-" + scheme.level_name(p.b);
      schedule.append(p);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double phase = std::arg(w(i, i));
    if (std::abs(phase) > kNegligible) {
      schedule.append(light_shift(levels[static_cast<std::size_t>(i)], phase, "phase " + scheme.level_name(levels[static_cast<std::size_t>(i)])));
    }
  }
  const double miss = (single_atom_operator(schedule, levels) - u.transpose()).norm();
  if (!(miss <= 1e-9)) {
    throw NumericalError("compiled Raman schedule misses the transformation by " + std::to_string(miss));
  }
  return schedule;
}

}  // namespace rydsim
