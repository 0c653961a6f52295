#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rydsim/pulses.h"

namespace rydsim {

/// Compiles the mode transformation a_i^dag -> sum_j U_ij a_j^dag over
/// `levels` (U is indexed in the order of `levels`) into Raman pulses followed
/// by one light shift per level whose phase is nonzero.
///
/// Pulses come from a triangular two-level elimination of the single-atom
/// operator U^T; each pulse has unit Rabi frequency and area in [0, pi].
/// The composed single-atom action is checked against U^T before returning.
/// Throws DomainError for non-square or non-unitary input (|U^dag U - I| > 1e-10)
/// or when `levels` are not distinct ground levels of the scheme.
Schedule compile_unitary(const LevelScheme &scheme, const Eigen::MatrixXcd &u, const std::vector<Level> &levels);

/// Single-atom operator of a Raman/light-shift schedule restricted to `levels`,
/// i.e. the matrix M with M_jk = <j| u_atom |k>. Pulses touching other levels are rejected.
Eigen::MatrixXcd single_atom_operator(const Schedule &schedule, const std::vector<Level> &levels);

}  // namespace rydsim
