#pragma once

#include <Eigen/Dense>

#include "rydsim/fock_space.h"

namespace rydsim {

/// A = V diag(sigma) V^T with V unitary and sigma descending.
struct TakagiFactorization {
  Eigen::MatrixXcd v;
  Eigen::VectorXd sigma;
};

/// Autonne-Takagi factorization of a complex symmetric matrix.
///
/// Eigendecomposes A conj(A) for sigma^2 and its eigenvectors, then fixes each
/// degenerate block with the symmetric unitary Z = P^dag A conj(P) / sigma,
/// jointly diagonalizing Re Z and Im Z by a real orthogonal O. Columns are
/// sign-normalized so that their first significant entry has positive real part.
/// If the result misses the accuracy contract (near-degenerate but distinct
/// sigma), it falls back to the eigendecomposition of the real symmetric
/// embedding [[Re A, Im A], [Im A, -Re A]]. Throws NumericalError if neither
/// route reconstructs A to 1e-9 max(|A|_F, 1).
TakagiFactorization takagi_decompose(const SymmetricCoeffs &a);

/// Eigenvalues of c conj(c), ascending (the squared Takagi values).
Eigen::VectorXd coefficient_spectrum(const SymmetricCoeffs &c);

/// Whether c can be turned into c_tilde by single-atom (Raman) transformations:
/// the spectra of c conj(c) and c_tilde conj(c_tilde) agree entrywise within tol.
/// Matrices are compared at the scale given. Throws DomainError on dimension mismatch.
bool reachable(const SymmetricCoeffs &c, const SymmetricCoeffs &c_tilde, double tol = 1e-9);

/// U = conj(V) V_tilde^T with U^T c U = c_tilde. Throws DomainError when the
/// pair is not reachable and NumericalError if the congruence residual exceeds 1e-9.
Eigen::MatrixXcd synthesize_u(const SymmetricCoeffs &c, const SymmetricCoeffs &c_tilde, double tol = 1e-9);

}  // namespace rydsim
