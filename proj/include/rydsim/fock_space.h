#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydsim/level_scheme.h"

namespace rydsim {

using Complex = std::complex<double>;
/// Occupations of the tracked modes, in LevelScheme mode order.
using Occupation = std::vector<int>;

/// Canonically ordered occupation-number basis of the tracked levels.
///
/// States are enumerated in lexicographic order of the occupation vector; the
/// reservoir occupation n_0 = K - sum(tracked) is implicit.
class OccupationBasis {
 public:
  explicit OccupationBasis(LevelScheme scheme);

  const LevelScheme &scheme() const { return scheme_; }
  std::size_t size() const { return states_.size(); }
  const Occupation &state(std::size_t index) const { return states_.at(index); }
  const std::vector<Occupation> &states() const { return states_; }

  std::optional<std::size_t> find(const Occupation &occupation) const;
  /// Throws DomainError for an occupation outside the basis.
  std::size_t index(const Occupation &occupation) const;

  int tracked_total(std::size_t index) const;
  std::int64_t reservoir_occupancy(std::size_t index) const;
  /// Occupation of `level` in basis state `index`; the reservoir is resolved to n_0.
  std::int64_t occupation(std::size_t index, Level level) const;

 private:
  LevelScheme scheme_;
  std::vector<Occupation> states_;
};

using BasisPtr = std::shared_ptr<const OccupationBasis>;

/// Enumerates every occupation vector admitted by the scheme's caps.
BasisPtr build_basis(const LevelScheme &scheme);

/// Complex amplitudes over an occupation basis. Immutable; operations return new states.
class StateVector {
 public:
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  const OccupationBasis &basis() const { return *basis_; }
  const BasisPtr &basis_ptr() const { return basis_; }
  const LevelScheme &scheme() const { return basis_->scheme(); }
  const Eigen::VectorXcd &amplitudes() const { return amplitudes_; }

  Complex amplitude(const Occupation &occupation) const;
  double norm() const { return amplitudes_.norm(); }

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amplitudes_;
};

/// Complex symmetric N x N coefficient matrix of a two-excitation state
/// sum_ij c_ij a_i^dag a_j^dag |vac>. The constructor symmetrizes its input.
class SymmetricCoeffs {
 public:
  explicit SymmetricCoeffs(const Eigen::MatrixXcd &matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXcd &matrix() const { return matrix_; }
  Complex operator()(int i, int j) const { return matrix_(i, j); }

  /// Squared norm of the state the matrix defines: 4 sum_{i<j}|c_ij|^2 + 2 sum_i |c_ii|^2.
  double state_norm_squared() const;
  SymmetricCoeffs normalized() const;

 private:
  Eigen::MatrixXcd matrix_;
};

/// All atoms in the reservoir.
StateVector vacuum_state(const BasisPtr &basis);

/// Unit basis state with the given register occupations and empty extra levels.
StateVector register_state(const BasisPtr &basis, const std::vector<int> &occupations);

/// Normalized sum_ij c_ij a_i^dag a_j^dag |vac> over register levels 1..dim.
StateVector two_excitation_state(const BasisPtr &basis, const SymmetricCoeffs &coeffs);

/// Inverse of two_excitation_state, normalized to unit state norm.
SymmetricCoeffs coeffs_from_state(const StateVector &state);

Complex overlap(const StateVector &bra, const StateVector &ket);
/// |<a|b>|^2.
double fidelity(const StateVector &a, const StateVector &b);

/// Multiplies every amplitude by exp(i phi n_level).
StateVector phase_on_occupation(const StateVector &state, Level level, double phi);

struct OccupationOutcome {
  int value = 0;
  double probability = 0.0;
  std::optional<StateVector> post_state;  // absent for zero-probability outcomes
};

/// Projective measurement of the occupation of a tracked level. Returns every
/// possible outcome in increasing order; probabilities sum to one.
std::vector<OccupationOutcome> measure_occupation(const StateVector &state, Level level);

/// Draws one outcome of measure_occupation from the supplied stream.
OccupationOutcome sample_occupation(const StateVector &state, Level level, std::mt19937_64 &rng);

/// One line per nonzero amplitude: "n1,n2,...  re  im" with 17 significant digits.
std::string state_to_text(const StateVector &state, double threshold = 0.0);
StateVector state_from_text(const BasisPtr &basis, const std::string &text);

}  // namespace rydsim
