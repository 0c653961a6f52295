#include "rydsim/nelder_mead.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rydsim/errors.h"

namespace rydsim {

NelderMeadResult nelder_mead(const Objective &f, const Eigen::VectorXd &x0, const Eigen::VectorXd &step,
                             const NelderMeadOptions &options) {
  const auto n = x0.size();
  if (n == 0 || step.size() != n) {
    throw ConfigError("Nelder-Mead needs a non-empty start and a step per coordinate");
  }
  const double dim = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dim;
  const double rho = 0.75 - 0.5 / dim;
  const double shrink = 1.0 - 1.0 / dim;

  NelderMeadResult out;
  auto eval = [&](const Eigen::VectorXd &x) {
    ++out.evaluations;
    double v = f(x);
    return std::isnan(v) ? HUGE_VAL : v;
  };

  std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> vals(static_cast<std::size_t>(n + 1));
  for (Eigen::Index k = 0; k < n; ++k) {
    pts[static_cast<std::size_t>(k + 1)](k) += step(k);
  }
  for (std::size_t k = 0; k < pts.size(); ++k) {
    vals[k] = eval(pts[k]);
  }
  std::vector<std::size_t> order(pts.size());

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double x_spread = 0.0;
    for (const auto &p : pts) {
      x_spread = std::max(x_spread, (p - pts[best]).cwiseAbs().maxCoeff());
    }
    if (vals[worst] - vals[best] <= options.f_tolerance && x_spread <= options.x_tolerance) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= options.max_evaluations) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t k : order) {
      if (k != worst) {
        centroid += pts[k];
      }
    }
    centroid /= dim;

    Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
    double fr = eval(xr);
    if (fr < vals[best]) {
      Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    // Outside contraction if the reflection helped at all, inside otherwise.
    const bool outside = fr < vals[worst];
    Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + rho * (xr - centroid))
                                 : Eigen::VectorXd(centroid - rho * (centroid - pts[worst]));
    double fc = eval(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k != best) {
        pts[k] = pts[best] + shrink * (pts[k] - pts[best]);
        vals[k] = eval(pts[k]);
      }
    }
  }
  auto it = std::min_element(vals.begin(), vals.end());
  out.value = *it;
  out.x = pts[static_cast<std::size_t>(it - vals.begin())];
  return out;
}

MultiStartResult multi_start_minimize(const Objective &f, const SearchBox &box, const MultiStartOptions &options) {
  const auto n = box.lower.size();
  if (n == 0 || box.upper.size() != n || (box.upper - box.lower).minCoeff() < 0.0) {
    throw ConfigError("search box must be non-empty with lower <= upper");
  }
  if (options.restarts < 1) {
    throw ConfigError("multi-start needs at least one restart");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::VectorXd width = box.upper - box.lower;
  Eigen::VectorXd step = options.step_fraction * width;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (step(k) == 0.0) {
      step(k) = options.step_fraction;
    }
  }

  MultiStartResult out;
  for (int r = 0; r < options.restarts; ++r) {
    Eigen::VectorXd x0(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      x0(k) = box.lower(k) + width(k) * unit(rng);
    }
    NelderMeadResult local = nelder_mead(f, x0, step, options.local);
    out.evaluations += local.evaluations;
    out.local_values.push_back(local.value);
    if (r == 0 || local.value < out.best.value) {
      out.best = local;
    }
  }
  return out;
}

}  // namespace rydsim
