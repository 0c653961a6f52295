#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rydsim {

using Objective = std::function<double(const Eigen::VectorXd &)>;

struct NelderMeadOptions {
  int max_evaluations = 4000;
  /// Stop once the simplex spread in f and in x both fall below these.
  double f_tolerance = 1e-14;
  double x_tolerance = 1e-11;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f from x0 with an initial simplex x0 + step_k e_k, using the
/// dimension-adaptive coefficients (reflection 1, expansion 1 + 2/n,
/// contraction 3/4 - 1/(2n), shrink 1 - 1/n) which hold up better than the
/// classic ones beyond a handful of parameters.
NelderMeadResult nelder_mead(const Objective &f, const Eigen::VectorXd &x0, const Eigen::VectorXd &step,
                             const NelderMeadOptions &options = {});

/// Axis-aligned box that start points are drawn from (uniformly).
struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct MultiStartOptions {
  int restarts = 200;
  std::uint64_t seed = 1;
  /// Initial simplex edge as a fraction of the box width.
  double step_fraction = 0.1;
  NelderMeadOptions local;
};

struct MultiStartResult {
  NelderMeadResult best;
  /// Final value of every local search, in restart order.
  std::vector<double> local_values;
  int evaluations = 0;
};

/// Independent Nelder-Mead runs from seeded uniform starts in `box`. The
/// result depends only on (f, box, options); ties keep the earliest restart.
MultiStartResult multi_start_minimize(const Objective &f, const SearchBox &box, const MultiStartOptions &options);

}  // namespace rydsim
