#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rydsim/errors.h"
#include "rydsim/fock_space.h"

using namespace rydsim;

namespace {

LevelScheme plaquette(int s_max, std::vector<ExtraRole> extras = {ExtraRole::kRydberg}) {
  return LevelScheme(4, std::move(extras), 1000000, s_max);
}

Eigen::MatrixXcd phi_minus_matrix() {
  Eigen::MatrixXcd c(4, 4);
  c << 0, -1, 0, 1, -1, 0, 1, 0, 0, 1, 0, -1, 1, 0, -1, 0;
  return c / 4.0;
}

Eigen::MatrixXcd product_matrix() {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 0.5;
  return c;
}

Eigen::MatrixXcd random_symmetric(std::mt19937_64 &rng, int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = Complex(g(rng), g(rng));
    }
  }
  return a + a.transpose();
}

}  // namespace

TEST(fock_space, basis_size_matches_exhaustive_enumeration) {
  auto basis = build_basis(plaquette(2));
  // Oracle: scan the full box [0,2]^5 and keep vectors with sum <= 2 and n_r <= 1.
  int expected = 0;
  for (int code = 0; code < 243; ++code) {
    int rest = code, sum = 0, nr = 0;
    for (int m = 0; m < 5; ++m) {
      int n = rest % 3;
      rest /= 3;
      sum += n;
      if (m == 4) {
        nr = n;
      }
    }
    expected += (sum <= 2 && nr <= 1) ? 1 : 0;
  }
  EXPECT_EQ(expected, 20);
  EXPECT_EQ(basis->size(), 20u);
}

TEST(fock_space, trivial_basis_sizes) {
  EXPECT_EQ(build_basis(LevelScheme(4, {ExtraRole::kRydberg}, 10, 0))->size(), 1u);
  EXPECT_EQ(build_basis(LevelScheme(1, {}, 10, 1))->size(), 2u);
}

TEST(fock_space, ordering_is_lexicographic_and_index_consistent) {
  auto basis = build_basis(plaquette(3, {ExtraRole::kRydberg, ExtraRole::kRydberg2, ExtraRole::kControl}));
  EXPECT_TRUE(std::is_sorted(basis->states().begin(), basis->states().end()));
  for (std::size_t k = 0; k < basis->size(); ++k) {
    EXPECT_EQ(basis->index(basis->state(k)), k);
    EXPECT_GE(basis->reservoir_occupancy(k), 0);
  }
}

TEST(fock_space, hard_mode_excludes_double_rydberg) {
  LevelScheme s = plaquette(3, {ExtraRole::kRydberg, ExtraRole::kRydberg2});
  auto basis = build_basis(s);
  for (const Occupation &occ : basis->states()) {
    EXPECT_LE(occ[4] + occ[5], 1);
  }
  LevelScheme soft(4, {ExtraRole::kRydberg, ExtraRole::kRydberg2}, 100, 3, BlockadeConfig::soft(10, 10));
  auto soft_basis = build_basis(soft);
  EXPECT_TRUE(soft_basis->find({0, 0, 0, 0, 1, 1}).has_value());
  EXPECT_TRUE(soft_basis->find({0, 0, 0, 0, 2, 0}).has_value());
  EXPECT_FALSE(soft_basis->find({0, 0, 0, 0, 3, 0}).has_value());
}

TEST(fock_space, scheme_validation) {
  EXPECT_THROW(LevelScheme(4, {}, 1, 2), ConfigError);
  EXPECT_THROW(LevelScheme(4, {ExtraRole::kRydberg, ExtraRole::kRydberg}, 10, 2), ConfigError);
  EXPECT_THROW(LevelScheme(4, {ExtraRole::kRydberg}, 10, 2, BlockadeConfig::soft(0, 1)), ConfigError);
  EXPECT_THROW(LevelScheme(4, {ExtraRole::kRydberg}, 10, 2, BlockadeConfig::soft(1, 1), 3), ConfigError);
}

TEST(fock_space, register_states) {
  auto basis = build_basis(plaquette(2));
  StateVector s = register_state(basis, {1, 1, 0, 0});
  EXPECT_EQ(s.amplitude({1, 1, 0, 0, 0}), Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_EQ(register_state(basis, {2, 0, 0, 0}).amplitude({2, 0, 0, 0, 0}), Complex(1.0));
  EXPECT_EQ(register_state(basis, {0, 0, 0, 0}).amplitudes(), vacuum_state(basis).amplitudes());
  EXPECT_THROW(register_state(basis, {1, 1, 1, 0}), DomainError);
  EXPECT_THROW(register_state(basis, {1, 1, 0}), DomainError);
}

TEST(fock_space, two_excitation_state_of_product_matrix) {
  auto basis = build_basis(plaquette(2));
  StateVector s = two_excitation_state(basis, SymmetricCoeffs(product_matrix()));
  EXPECT_NEAR(fidelity(s, register_state(basis, {1, 1, 0, 0})), 1.0, 1e-15);
}

TEST(fock_space, two_excitation_state_of_phi_minus_matrix) {
  auto basis = build_basis(plaquette(2));
  StateVector s = two_excitation_state(basis, SymmetricCoeffs(phi_minus_matrix()));
  EXPECT_NEAR(s.amplitude({1, 0, 0, 1, 0}).real(), 0.5, 1e-15);
  EXPECT_NEAR(s.amplitude({0, 1, 1, 0, 0}).real(), 0.5, 1e-15);
  EXPECT_NEAR(s.amplitude({0, 0, 1, 1, 0}).real(), -0.5, 1e-15);
  EXPECT_NEAR(s.amplitude({1, 1, 0, 0, 0}).real(), -0.5, 1e-15);
  EXPECT_NEAR(s.norm(), 1.0, 1e-15);
}

TEST(fock_space, double_occupation_gets_bosonic_factor) {
  auto basis = build_basis(plaquette(2));
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 0) = 1.0;
  c(1, 2) = c(2, 1) = 1.0;
  // Unnormalized: sqrt2 |2000> + 2 |0110>.
  StateVector s = two_excitation_state(basis, SymmetricCoeffs(c));
  EXPECT_NEAR(std::abs(s.amplitude({2, 0, 0, 0, 0})), std::sqrt(2.0) / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude({0, 1, 1, 0, 0})), 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(SymmetricCoeffs(c).state_norm_squared(), 6.0, 1e-15);
  EXPECT_THROW(two_excitation_state(basis, SymmetricCoeffs(Eigen::MatrixXcd::Zero(4, 4))), DomainError);
}

TEST(fock_space, coeffs_round_trip_random) {
  std::mt19937_64 rng(7);
  auto basis = build_basis(plaquette(2));
  for (int trial = 0; trial < 50; ++trial) {
    SymmetricCoeffs c = SymmetricCoeffs(random_symmetric(rng, 4)).normalized();
    SymmetricCoeffs back = coeffs_from_state(two_excitation_state(basis, c));
    EXPECT_LE((back.matrix() - c.matrix()).norm(), 1e-14);
  }
}

TEST(fock_space, coeffs_from_basis_states) {
  auto basis = build_basis(plaquette(2));
  SymmetricCoeffs c = coeffs_from_state(register_state(basis, {1, 1, 0, 0}));
  EXPECT_LE((c.matrix() - product_matrix()).norm(), 1e-15);
  SymmetricCoeffs d = coeffs_from_state(register_state(basis, {2, 0, 0, 0}));
  EXPECT_NEAR(std::abs(d(0, 0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.matrix().norm(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_THROW(coeffs_from_state(register_state(basis, {1, 0, 0, 0})), DomainError);
}

TEST(fock_space, fidelity_values) {
  auto basis = build_basis(plaquette(2));
  StateVector phi = two_excitation_state(basis, SymmetricCoeffs(phi_minus_matrix()));
  StateVector a = register_state(basis, {1, 1, 0, 0});
  EXPECT_NEAR(fidelity(phi, phi), 1.0, 1e-15);
  EXPECT_EQ(fidelity(a, register_state(basis, {0, 0, 1, 1})), 0.0);
  // Oracle: |1100> carries amplitude -1/2 in the four-term expansion.
  EXPECT_NEAR(fidelity(phi, a), 0.25, 1e-15);
  auto other = build_basis(plaquette(3));
  EXPECT_THROW(fidelity(a, register_state(other, {1, 1, 0, 0})), DomainError);
}

TEST(fock_space, phase_on_occupation_flips_box_component) {
  auto basis = build_basis(plaquette(2));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  amps(static_cast<Eigen::Index>(basis->index({1, 0, 1, 0, 0}))) = 1.0 / std::sqrt(2.0);
  amps(static_cast<Eigen::Index>(basis->index({0, 1, 0, 1, 0}))) = 1.0 / std::sqrt(2.0);
  StateVector box(basis, amps);
  StateVector flipped = phase_on_occupation(box, Level{0}, M_PI);
  EXPECT_NEAR(flipped.amplitude({1, 0, 1, 0, 0}).real(), -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(flipped.amplitude({0, 1, 0, 1, 0}).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(phase_on_occupation(box, Level{0}, 0.0).amplitudes(), box.amplitudes());
  StateVector twice = phase_on_occupation(flipped, Level{0}, M_PI);
  EXPECT_LE((twice.amplitudes() - box.amplitudes()).norm(), 1e-15);
  EXPECT_THROW(phase_on_occupation(box, Level::reservoir(), 1.0), ConfigError);
}

TEST(fock_space, measurement_distributions) {
  auto basis = build_basis(plaquette(2));
  auto sure = measure_occupation(register_state(basis, {1, 1, 0, 0}), Level{0});
  ASSERT_EQ(sure.size(), 3u);
  EXPECT_EQ(sure[1].probability, 1.0);
  EXPECT_FALSE(sure[0].post_state.has_value());

  StateVector phi = two_excitation_state(basis, SymmetricCoeffs(phi_minus_matrix()));
  auto half = measure_occupation(phi, Level{0});
  EXPECT_NEAR(half[0].probability, 0.5, 1e-15);
  EXPECT_NEAR(half[1].probability, 0.5, 1e-15);
  EXPECT_EQ(half[2].probability, 0.0);
  ASSERT_TRUE(half[1].post_state.has_value());
  EXPECT_NEAR(half[1].post_state->norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(half[1].post_state->amplitude({1, 1, 0, 0, 0})), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(fock_space, sampling_is_seeded) {
  auto basis = build_basis(plaquette(2));
  StateVector phi = two_excitation_state(basis, SymmetricCoeffs(phi_minus_matrix()));
  std::mt19937_64 a(11), b(11);
  int ones = 0;
  for (int i = 0; i < 400; ++i) {
    auto x = sample_occupation(phi, Level{0}, a);
    auto y = sample_occupation(phi, Level{0}, b);
    EXPECT_EQ(x.value, y.value);
    ones += x.value;
  }
  EXPECT_GT(ones, 150);
  EXPECT_LT(ones, 250);
}

TEST(fock_space, text_round_trip_is_exact) {
  std::mt19937_64 rng(3);
  auto basis = build_basis(plaquette(2));
  SymmetricCoeffs c = SymmetricCoeffs(random_symmetric(rng, 4)).normalized();
  StateVector s = two_excitation_state(basis, c);
  StateVector back = state_from_text(basis, state_to_text(s));
  EXPECT_EQ(back.amplitudes(), s.amplitudes());
  EXPECT_THROW(state_from_text(basis, "1,1,0,0,0 1.0\n"), ParseError);
  EXPECT_THROW(state_from_text(basis, "3,0,0,0,0 1 0\n"), ParseError);
  try {
    state_from_text(basis, "# header\n1,x,0,0,0 1 0\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
  }
}
