#include "rydsim/plaquette_states.h"

#include <cmath>

namespace rydsim {

using Complex = std::complex<double>;

Eigen::MatrixXcd pair_coeffs() {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 1) = c(1, 0) = 0.5;
  return c;
}

Eigen::MatrixXcd phi_minus_coeffs() {
  Eigen::MatrixXcd c(4, 4);
  c << 0, -1, 0, 1,
      -1, 0, 1, 0,
       0, 1, 0, -1,
       1, 0, -1, 0;
  return c / 4.0;
}

Eigen::MatrixXcd phi_plus_coeffs() {
  Eigen::MatrixXcd c(4, 4);
  c << 0, 1, -2, 1,
       1, 0, 1, -2,
      -2, 1, 0, 1,
       1, -2, 1, 0;
  return c / (4.0 * std::sqrt(3.0));
}

Eigen::MatrixXcd split_coeffs() {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
  c(0, 0) = 1.0 / std::sqrt(3.0);
  c(1, 2) = c(2, 1) = 1.0 / (2.0 * std::sqrt(3.0));
  return c;
}

Eigen::MatrixXcd phi_minus_transform() {
  Eigen::MatrixXcd u(4, 4);
  u << -1, 0, 1, 0,
        0, 1, 0, -1,
        1, 0, 1, 0,
        0, 1, 0, 1;
  return u / std::sqrt(2.0);
}

Eigen::MatrixXcd phi_plus_transform() {
  const Complex i(0.0, 1.0);
  Eigen::MatrixXcd u(4, 4);
  u << i, -i, i, -i,
      -i, 1.0, i, -1.0,
       i, 1.0, -i, -1.0,
       1.0, 1.0, 1.0, 1.0;
  return u / 2.0;
}

Eigen::Matrix3d spinon_transform() {
  const double a = std::sqrt(1.0 / 3.0);
  const double b = std::sqrt(2.0 / 3.0);
  const double h = std::sqrt(0.5);
  Eigen::Matrix3d first;
  first << a, b, 0,
          -b, a, 0,
           0, 0, 1;
  Eigen::Matrix3d second;
  second << 1, 0, 0,
            0, h, h,
            0, -h, h;
  return first * second;
}

}  // namespace rydsim
