#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rydsim/errors.h"
#include "rydsim/matrix_io.h"
#include "rydsim/schedule_io.h"

namespace rydsim {
namespace {

LevelScheme test_scheme() {
  return LevelScheme(4, {ExtraRole::kRydberg, ExtraRole::kRydberg2, ExtraRole::kControl}, 1000000, 4);
}

TEST(schedule_io, round_trip_is_exact) {
  LevelScheme scheme = test_scheme();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Schedule s;
  s.append(pi_pulse(scheme, Level::reservoir(), scheme.level(ExtraRole::kRydberg), 999998, M_PI, "load \"r\""));
  for (int k = 0; k < 20; ++k) {
    Pulse p;
    p.kind = k % 2 ? PulseKind::kRaman : PulseKind::kRydbergDrive;
    p.a = scheme.register_level(1 + k % 3);
    p.b = k % 2 ? scheme.register_level(4) : scheme.level(ExtraRole::kRydberg2);
    p.rabi = std::abs(u(rng));
    p.phase = u(rng);
    p.detuning = u(rng);
    p.duration = std::abs(u(rng));
    p.reference = k;
    p.label = "step " + std::to_string(k);
    s.append(p);
  }
  s.append(light_shift(scheme.level(ExtraRole::kControl), 1.0 / 3.0, "fix"));
  std::string text = schedule_to_text(scheme, s);
  Schedule back = schedule_from_text(scheme, text);
  EXPECT_EQ(back, s);
  EXPECT_EQ(schedule_to_text(scheme, back), text);
}

TEST(schedule_io, optional_keys_and_comments) {
  LevelScheme scheme = test_scheme();
  Schedule s = schedule_from_text(
      scheme,
      "# comment\n\n"
      "pulse duration=2 kind=rydberg_drive a=reservoir b=r rabi=0.5 phase=0 detuning=0\n"
      "light_shift level=1 phase=-1\n");
  ASSERT_EQ(s.pulses.size(), 2u);
  EXPECT_EQ(s.pulses[0].reference, 0);
  EXPECT_TRUE(s.pulses[0].a.is_reservoir());
  EXPECT_EQ(s.pulses[1].kind, PulseKind::kLightShift);
  EXPECT_DOUBLE_EQ(s.pulses[1].phase, -1.0);
}

TEST(schedule_io, errors_carry_position) {
  LevelScheme scheme = test_scheme();
  auto expect_error = [&](const std::string &text, int line) {
    try {
      schedule_from_text(scheme, text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const ParseError &e) {
      EXPECT_EQ(e.line(), line) << text;
      EXPECT_GE(e.column(), 1);
    }
  };
  expect_error("pulse kind=raman a=1 b=2 rabi=1 phase=0 detuning=0\n", 1);
  expect_error("\nlight_shift level=q phase=0\n", 2);
  expect_error("pulse kind=laser a=1 b=2 rabi=1 phase=0 detuning=0 duration=1\n", 1);
  expect_error("pulse kind=raman a=1 b=2 rabi=x phase=0 detuning=0 duration=1\n", 1);
  expect_error("pulse kind=raman a=1 a=1 b=2 rabi=1 phase=0 detuning=0 duration=1\n", 1);
  expect_error("pulse kind=raman a=1 b=2 rabi=1 phase=0 detuning=0 duration=1 color=3\n", 1);
  expect_error("wait 3\n", 1);
  expect_error("light_shift level=1 phase=0 label=\"open\n", 1);
}

TEST(schedule_io, column_points_at_bad_token) {
  LevelScheme scheme = test_scheme();
  try {
    schedule_from_text(scheme, "light_shift level=1 phase=zz\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.column(), 27);
  }
}

TEST(schedule_io, format_double_round_trips) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    double x = u(rng) * std::pow(10.0, k % 30 - 15);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(matrix_io, round_trip_and_token_forms) {
  Eigen::MatrixXcd m(2, 2);
  m << Complex(1, -2), Complex(0.1, 1e-30), Complex(-3, 0), Complex(0, -1);
  EXPECT_EQ(matrix_from_text(matrix_to_text(m)), m);
  EXPECT_EQ(parse_complex("2i"), Complex(0, 2));
  EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
  EXPECT_EQ(parse_complex("1-2e-3i"), Complex(1, -2e-3));
  EXPECT_EQ(parse_complex("1e+2+3i"), Complex(100, 3));
  EXPECT_EQ(parse_complex("-4"), Complex(-4, 0));
}

TEST(matrix_io, multiple_matrices_and_errors) {
  auto all = matrices_from_text("# a\n1 0\n0 1\n---\n2\n");
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[1](0, 0), Complex(2, 0));
  try {
    matrix_from_text("1 2\n3 x4\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  EXPECT_THROW(matrix_from_text("1 2\n3\n"), ParseError);
  EXPECT_THROW(matrix_from_text("\n"), ParseError);
}

}  // namespace
}  // namespace rydsim
