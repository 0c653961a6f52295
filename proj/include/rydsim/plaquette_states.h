#pragma once

#include <Eigen/Dense>

namespace rydsim {

// Coefficient matrices and single-atom transformations of the four-level
// plaquette register. Coefficient matrices are normalized to unit state norm.

/// |1100>: c_12 = c_21 = 1/2.
Eigen::MatrixXcd pair_coeffs();
/// (|1001> + |0110> - |0011> - |1100>)/2.
Eigen::MatrixXcd phi_minus_coeffs();
/// (|1001> + |0110> + |1100> + |0011> - 2|0101> - 2|1010>)/sqrt12.
Eigen::MatrixXcd phi_plus_coeffs();
/// sqrt(2/3)|2000> + sqrt(1/3)|0110>: c_11 = 1/sqrt3, c_23 = c_32 = 1/(2 sqrt3).
Eigen::MatrixXcd split_coeffs();

/// U with U^T pair_coeffs U = phi_minus_coeffs (pi/2 Raman pulses on 1-3 and 2-4).
Eigen::MatrixXcd phi_minus_transform();
/// U with U^T split_coeffs U = phi_plus_coeffs.
Eigen::MatrixXcd phi_plus_transform();
/// Two-factor rotation on the state vector over (|0100>, |0010>, |0001>) that
/// sends the three spinon states to vectors with no |0100> component and the
/// symmetric state to |0100>.
Eigen::Matrix3d spinon_transform();

}  // namespace rydsim
