#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rydsim/errors.h"
#include "rydsim/pulse_search.h"

namespace rydsim {
namespace {

using Mat2 = Eigen::Matrix2cd;

// Closed-form propagator of a unit-duration segment on a two-level manifold
// (upper = more Rydberg excitation) whose coupling is enhanced by g.
Mat2 two_level(const SegmentParams &s, double g) {
  const Complex i(0.0, 1.0);
  Mat2 sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -i, i, 0;
  sz << 1, 0, 0, -1;
  const double w = std::hypot(g * s.omega_t, s.delta_t);
  Mat2 nsig = (g * s.omega_t * std::cos(s.phase) * sx - g * s.omega_t * std::sin(s.phase) * sy - s.delta_t * sz) / w;
  return std::exp(i * s.delta_t / 2.0) * (std::cos(w / 2.0) * Mat2::Identity() - i * std::sin(w / 2.0) * nsig);
}

TransferAmplitudes oracle(const std::vector<SegmentParams> &segs) {
  Mat2 a = Mat2::Identity();
  Mat2 b = Mat2::Identity();
  for (const auto &s : segs) {
    a = two_level(s, std::sqrt(2.0)) * a;
    b = two_level(s, 1.0) * b;
  }
  return {a(1, 0), b(0, 0)};
}

TEST(pulse_search, amplitudes_match_two_level_closed_form) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SegmentParams> segs;
    for (int k = 0; k < 1 + trial % 3; ++k) {
      segs.push_back({std::abs(u(rng)) + 0.1, u(rng), u(rng)});
    }
    TransferAmplitudes got = transfer_amplitudes(segs);
    TransferAmplitudes want = oracle(segs);
    EXPECT_LE(std::abs(got.transfer - want.transfer), 1e-12);
    EXPECT_LE(std::abs(got.stay - want.stay), 1e-12);
  }
}

TEST(pulse_search, resonant_two_pi_pulse) {
  TransferAmplitudes a = transfer_amplitudes({{2.0 * M_PI, 0.0, 0.0}});
  EXPECT_NEAR(a.violation(), 0.0, 1e-14);
  EXPECT_NEAR(a.transfer_fidelity(), std::pow(std::sin(std::sqrt(2.0) * M_PI), 2), 1e-14);
}

TEST(pulse_search, one_segment_optimum_is_the_resonant_two_pi_pulse) {
  // With a single segment the stay branch must complete a whole Rabi cycle;
  // inside omega_t <= 4 pi the best such cycle is the resonant 2 pi pulse.
  TransferSearchOptions o;
  o.segments = 1;
  o.restarts = 200;
  TransferSearchResult r = optimize_transfer(o);
  EXPECT_NEAR(r.fidelity, std::pow(std::sin(std::sqrt(2.0) * M_PI), 2), 1e-6);
  EXPECT_LE(r.violation, 1e-10);
  EXPECT_NEAR(r.segments[0].omega_t, 2.0 * M_PI, 1e-3);
}

TEST(pulse_search, two_segments_with_penalty) {
  TransferSearchOptions o;
  o.restarts = 200;
  o.seed = 3;
  TransferSearchResult r = optimize_two_pulse_transfer(o);
  ASSERT_EQ(r.segments.size(), 2u);
  EXPECT_LE(r.violation, 1e-10);
  for (const auto &s : r.segments) {
    EXPECT_GE(s.omega_t, 0.0);
    EXPECT_LE(s.omega_t, 4.0 * M_PI);
    EXPECT_LE(std::abs(s.delta_t), 4.0 * M_PI);
  }
  TransferAmplitudes check = oracle(r.segments);
  EXPECT_NEAR(check.transfer_fidelity(), r.fidelity, 1e-12);
  EXPECT_GE(r.fidelity, 1.0 - 1e-8);
  EXPECT_GE(r.feasible_restarts, 1);
  EXPECT_NEAR(r.local_optima.front().fidelity, r.fidelity, 1e-4);
}

TEST(pulse_search, per_segment_return_route_agrees) {
  TransferSearchOptions o;
  o.restarts = 200;
  o.constraint = ReturnConstraint::kPerSegmentReturn;
  TransferSearchResult r = optimize_two_pulse_transfer(o);
  for (const auto &s : r.segments) {
    double cycles = std::hypot(s.omega_t, s.delta_t) / (2.0 * M_PI);
    EXPECT_NEAR(cycles, std::round(cycles), 1e-12);
    EXPECT_NEAR(std::norm(oracle({s}).stay), 1.0, 1e-12);
  }
  TransferSearchOptions p = o;
  p.constraint = ReturnConstraint::kPenalty;
  EXPECT_NEAR(r.fidelity, optimize_two_pulse_transfer(p).fidelity, 1e-3);
}

TEST(pulse_search, deterministic_given_seed) {
  TransferSearchOptions o;
  o.segments = 1;
  o.restarts = 200;
  o.seed = 77;
  TransferSearchResult a = optimize_transfer(o);
  TransferSearchResult b = optimize_transfer(o);
  EXPECT_EQ(a.segments, b.segments);
  EXPECT_EQ(a.fidelity, b.fidelity);
}

TEST(pulse_search, rejects_small_budget) {
  TransferSearchOptions o;
  o.restarts = 199;
  EXPECT_THROW(optimize_transfer(o), ConfigError);
  o.restarts = 200;
  o.segments = 0;
  EXPECT_THROW(optimize_transfer(o), ConfigError);
}

TEST(pulse_search, stored_three_segment_transfer) {
  CompositeTransfer c = default_composite_transfer();
  ASSERT_EQ(c.segments.size(), 3u);
  TransferAmplitudes check = oracle(c.segments);
  EXPECT_GE(check.transfer_fidelity(), 1.0 - 1e-8);
  EXPECT_GE(std::norm(check.stay), 1.0 - 1e-8);
  EXPECT_NEAR(std::arg(check.transfer), c.theta_a, 1e-9);
  EXPECT_NEAR(std::arg(check.stay), c.theta_b, 1e-9);
}

TEST(pulse_search, phase_gate_scan) {
  PhaseScan scan = scan_phase_gate(linear_grid(0.05, 2.15, 50));
  ASSERT_EQ(scan.rows.size(), 50u);
  EXPECT_LE(scan.max_dev_single, 1e-8);
  EXPECT_LE(scan.max_leak, 1e-10);
  std::string csv = phase_scan_to_csv(scan);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
  EXPECT_THROW(scan_phase_gate({M_PI / std::sqrt(2.0)}), DomainError);
}

TEST(pulse_search, linear_grid_endpoints) {
  auto g = linear_grid(1.0, 2.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 1.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_DOUBLE_EQ(g[2], 1.5);
  EXPECT_THROW(linear_grid(0, 1, 0), ConfigError);
}

}  // namespace
}  // namespace rydsim
