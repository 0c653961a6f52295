#include <gtest/gtest.h>

#include <cmath>

#include "rydsim/errors.h"
#include "rydsim/nelder_mead.h"

namespace rydsim {
namespace {

double rosenbrock(const Eigen::VectorXd &x) {
  double s = 0.0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    s += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
  }
  return s;
}

TEST(nelder_mead, quadratic_bowl) {
  Eigen::VectorXd center(3);
  center << 1.0, -2.0, 0.5;
  auto f = [&](const Eigen::VectorXd &x) { return (x - center).squaredNorm() + 3.0; };
  NelderMeadResult r = nelder_mead(f, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Constant(3, 0.5));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  EXPECT_LE((r.x - center).norm(), 1e-5);
}

TEST(nelder_mead, rosenbrock_valley) {
  NelderMeadOptions opt;
  opt.max_evaluations = 20000;
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  NelderMeadResult r = nelder_mead(rosenbrock, x0, Eigen::VectorXd::Constant(2, 0.3), opt);
  EXPECT_LE(r.value, 1e-12);
  EXPECT_NEAR(r.x(0), 1.0, 1e-5);
}

TEST(nelder_mead, respects_budget) {
  NelderMeadOptions opt;
  opt.max_evaluations = 50;
  NelderMeadResult r = nelder_mead(rosenbrock, Eigen::VectorXd::Zero(6), Eigen::VectorXd::Constant(6, 1.0), opt);
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.evaluations, 50 + 8);
}

TEST(nelder_mead, nan_is_treated_as_worst) {
  auto f = [](const Eigen::VectorXd &x) { return x(0) < 0.0 ? std::nan("") : (x(0) - 2.0) * (x(0) - 2.0); };
  NelderMeadResult r = nelder_mead(f, Eigen::VectorXd::Constant(1, 0.1), Eigen::VectorXd::Constant(1, -0.5));
  EXPECT_NEAR(r.x(0), 2.0, 1e-5);
}

TEST(multi_start, finds_global_minimum_of_multimodal_function) {
  // Rastrigin in 2D: many local minima, global minimum 0 at the origin.
  auto f = [](const Eigen::VectorXd &x) {
    double s = 20.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      s += x(i) * x(i) - 10.0 * std::cos(2.0 * M_PI * x(i));
    }
    return s;
  };
  SearchBox box{Eigen::VectorXd::Constant(2, -5.12), Eigen::VectorXd::Constant(2, 5.12)};
  MultiStartOptions opt;
  opt.restarts = 300;
  opt.seed = 7;
  MultiStartResult r = multi_start_minimize(f, box, opt);
  EXPECT_LE(r.best.value, 1e-10);
  EXPECT_EQ(r.local_values.size(), 300u);
}

TEST(multi_start, deterministic_given_seed) {
  SearchBox box{Eigen::VectorXd::Constant(3, -2.0), Eigen::VectorXd::Constant(3, 2.0)};
  MultiStartOptions opt;
  opt.restarts = 5;
  opt.seed = 99;
  MultiStartResult a = multi_start_minimize(rosenbrock, box, opt);
  MultiStartResult b = multi_start_minimize(rosenbrock, box, opt);
  EXPECT_EQ(a.best.x, b.best.x);
  EXPECT_EQ(a.local_values, b.local_values);
  opt.seed = 100;
  MultiStartResult c = multi_start_minimize(rosenbrock, box, opt);
  EXPECT_NE(a.local_values, c.local_values);
}

TEST(multi_start, rejects_bad_configuration) {
  SearchBox box{Eigen::VectorXd::Constant(2, 1.0), Eigen::VectorXd::Constant(2, 0.0)};
  EXPECT_THROW(multi_start_minimize(rosenbrock, box, {}), ConfigError);
  SearchBox ok{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Ones(2)};
  MultiStartOptions opt;
  opt.restarts = 0;
  EXPECT_THROW(multi_start_minimize(rosenbrock, ok, opt), ConfigError);
}

}  // namespace
}  // namespace rydsim
