#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rydsim/errors.h"
#include "rydsim/plaquette_states.h"
#include "rydsim/raman_compiler.h"

namespace rydsim {
namespace {

using Eigen::MatrixXcd;

std::vector<Level> register_levels(const LevelScheme &scheme) {
  std::vector<Level> out;
  for (int i = 1; i <= scheme.register_count(); ++i) {
    out.push_back(scheme.register_level(i));
  }
  return out;
}

MatrixXcd random_unitary(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
    }
  }
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  return qr.householderQ() * MatrixXcd::Identity(n, n);
}

TEST(raman_compiler, pair_to_phi_minus_uses_two_half_pi_pulses) {
  LevelScheme scheme(4, {}, 2, 2);
  Schedule s = compile_unitary(scheme, phi_minus_transform(), register_levels(scheme));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Pulse &p : s.pulses) {
    if (p.kind == PulseKind::kRaman) {
      pairs.emplace_back(scheme.level_name(p.a), scheme.level_name(p.b));
      EXPECT_NEAR(p.rabi * p.duration, M_PI / 2, 1e-12);
    }
  }
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], (std::pair<std::string, std::string>{"2", "4"}));
  EXPECT_EQ(pairs[1], (std::pair<std::string, std::string>{"1", "3"}));

  auto basis = build_basis(scheme);
  StateVector out = run_schedule(register_state(basis, {1, 1, 0, 0}), s);
  StateVector want = two_excitation_state(basis, SymmetricCoeffs(phi_minus_coeffs()));
  EXPECT_LE((out.amplitudes() - want.amplitudes()).norm(), 1e-12);
}

TEST(raman_compiler, identity_compiles_to_nothing) {
  LevelScheme scheme(4, {}, 2, 2);
  EXPECT_TRUE(compile_unitary(scheme, MatrixXcd::Identity(4, 4), register_levels(scheme)).pulses.empty());
}

TEST(raman_compiler, diagonal_phases_become_light_shifts) {
  LevelScheme scheme(3, {}, 1, 1);
  MatrixXcd u = MatrixXcd::Identity(3, 3);
  u(1, 1) = std::polar(1.0, 0.7);
  Schedule s = compile_unitary(scheme, u, register_levels(scheme));
  ASSERT_EQ(s.pulses.size(), 1u);
  EXPECT_EQ(s.pulses[0].kind, PulseKind::kLightShift);
  EXPECT_EQ(scheme.level_name(s.pulses[0].a), "2");
  EXPECT_NEAR(s.pulses[0].phase, 0.7, 1e-15);
}

TEST(raman_compiler, single_atom_action_matches_fock_evolution) {
  // One atom: the Fock-space action restricted to |e_j> is the single-atom operator.
  LevelScheme scheme(4, {}, 1, 1);
  auto basis = build_basis(scheme);
  std::mt19937_64 rng(21);
  MatrixXcd u = random_unitary(4, rng);
  auto levels = register_levels(scheme);
  Schedule s = compile_unitary(scheme, u, levels);
  for (int k = 0; k < 4; ++k) {
    std::vector<int> occ(4, 0);
    occ[static_cast<std::size_t>(k)] = 1;
    StateVector out = run_schedule(register_state(basis, occ), s);
    for (int j = 0; j < 4; ++j) {
      std::vector<int> o(4, 0);
      o[static_cast<std::size_t>(j)] = 1;
      EXPECT_LE(std::abs(out.amplitude(o) - u(k, j)), 1e-10);
    }
  }
}

TEST(raman_compiler, random_transformations_on_two_excitation_states) {
  LevelScheme scheme(4, {}, 2, 2);
  auto basis = build_basis(scheme);
  auto levels = register_levels(scheme);
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    MatrixXcd u = random_unitary(4, rng);
    Schedule s = compile_unitary(scheme, u, levels);
    for (const Pulse &p : s.pulses) {
      if (p.kind == PulseKind::kRaman) {
        EXPECT_GE(p.duration, 0.0);
        EXPECT_LE(p.duration, M_PI + 1e-12);
      }
    }
    MatrixXcd c(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        c(i, j) = Complex(g(rng), g(rng));
      }
    }
    SymmetricCoeffs coeffs = SymmetricCoeffs(c).normalized();
    StateVector out = run_schedule(two_excitation_state(basis, coeffs), s);
    MatrixXcd target = u.transpose() * coeffs.matrix() * u;
    StateVector want = two_excitation_state(basis, SymmetricCoeffs(target));
    EXPECT_LE((out.amplitudes() - want.amplitudes()).norm(), 1e-9);
  }
}

TEST(raman_compiler, subset_of_levels) {
  LevelScheme scheme(4, {ExtraRole::kRydberg}, 2, 2);
  std::vector<Level> levels{scheme.register_level(2), scheme.register_level(3), scheme.register_level(4)};
  Eigen::Matrix3d t = spinon_transform();
  MatrixXcd u = t.transpose().cast<Complex>();
  Schedule s = compile_unitary(scheme, u, levels);
  EXPECT_LE((single_atom_operator(s, levels) - u.transpose()).norm(), 1e-12);
  for (const Pulse &p : s.pulses) {
    EXPECT_NE(scheme.level_name(p.a), "1");
    EXPECT_NE(scheme.level_name(p.a), "r");
  }
}

TEST(raman_compiler, rejects_bad_input) {
  LevelScheme scheme(4, {ExtraRole::kRydberg}, 2, 2);
  auto levels = register_levels(scheme);
  MatrixXcd bad = MatrixXcd::Identity(4, 4);
  bad(0, 1) = 0.3;
  EXPECT_THROW(compile_unitary(scheme, bad, levels), DomainError);
  EXPECT_THROW(compile_unitary(scheme, MatrixXcd::Identity(3, 3), levels), DomainError);
  std::vector<Level> with_rydberg{scheme.register_level(1), scheme.level(ExtraRole::kRydberg)};
  EXPECT_THROW(compile_unitary(scheme, MatrixXcd::Identity(2, 2), with_rydberg), DomainError);
  std::vector<Level> repeated{scheme.register_level(1), scheme.register_level(1)};
  EXPECT_THROW(compile_unitary(scheme, MatrixXcd::Identity(2, 2), repeated), DomainError);
}

}  // namespace
}  // namespace rydsim
