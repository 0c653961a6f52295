#include "rydsim/takagi.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rydsim/errors.h"

namespace rydsim {

namespace {

constexpr double kUnitaryTolerance = 1e-10;
constexpr double kReconstructionTolerance = 1e-9;
// Below this relative residual the first route is accepted without a second opinion.
constexpr double kTightResidual = 1e-12;
// Eigenvalues of A conj(A) closer than this (relative to sigma_max^2) form one block.
constexpr double kClusterTolerance = 1e-12;
// Blocks with sigma below this (relative to sigma_max) are factorized recursively.
constexpr double kSmallSigma = 1e-7;
// Irrational weight for the joint diagonalization of Re Z and Im Z.
constexpr double kJointWeight = 0.6180339887498949;

double reconstruction_residual(const Eigen::MatrixXcd &a, const TakagiFactorization &f) {
  Eigen::MatrixXcd rebuilt = f.v * f.sigma.cast<Complex>().asDiagonal() * f.v.transpose();
  return (rebuilt - a).norm();
}

bool meets_contract(const Eigen::MatrixXcd &a, const TakagiFactorization &f) {
  const auto n = a.rows();
  double unitary = (f.v.adjoint() * f.v - Eigen::MatrixXcd::Identity(n, n)).norm();
  double tol = kReconstructionTolerance * std::max(a.norm(), 1.0);
  return unitary <= kUnitaryTolerance && reconstruction_residual(a, f) <= tol;
}

// Makes diag(V^dag A conj V) real non-negative, fixes the column sign and sorts
// by descending sigma. The sort is stable so equal sigma keep their block order.
TakagiFactorization canonicalize(const Eigen::MatrixXcd &a, Eigen::MatrixXcd v) {
  const auto n = a.rows();
  Eigen::MatrixXcd d = v.adjoint() * a * v.conjugate();
  Eigen::VectorXd sigma(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Complex dk = d(k, k);
    sigma(k) = std::abs(dk);
    if (sigma(k) > 0.0) {
      v.col(k) *= std::polar(1.0, 0.5 * std::arg(dk));
    }
    const double big = v.col(k).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex x = v(i, k);
      if (std::abs(x) > 1e-8 * big) {
        if (x.real() < 0.0 || (x.real() == 0.0 && x.imag() < 0.0)) {
          v.col(k) = -v.col(k);
        }
        break;
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return sigma(x) > sigma(y); });
  TakagiFactorization out;
  out.v.resize(n, n);
  out.sigma.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.v.col(k) = v.col(order[static_cast<std::size_t>(k)]);
    out.sigma(k) = sigma(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

// Frame for a block of (nearly) equal sigma: P O diag(e^{i theta/2}).
Eigen::MatrixXcd block_frame(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &p, double sigma) {
  Eigen::MatrixXcd z = p.adjoint() * a * p.conjugate() / sigma;
  z = 0.5 * (z + z.transpose()).eval();
  if (z.rows() == 1) {
    return p * std::polar(1.0, 0.5 * std::arg(z(0, 0)));
  }
  Eigen::MatrixXd x = z.real();
  Eigen::MatrixXd y = z.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> joint(x + kJointWeight * y);
  if (joint.info() != Eigen::Success) {
    throw NumericalError("joint diagonalization of a degenerate Takagi block failed");
  }
  const Eigen::MatrixXd &o = joint.eigenvectors();
  Eigen::MatrixXcd diag = o.transpose().cast<Complex>() * z * o.cast<Complex>();
  Eigen::VectorXcd half(diag.rows());
  for (Eigen::Index k = 0; k < diag.rows(); ++k) {
    half(k) = std::polar(1.0, 0.5 * std::arg(diag(k, k)));
  }
  return p * o.cast<Complex>() * half.asDiagonal();
}

TakagiFactorization eigen_route(const Eigen::MatrixXcd &a);

Eigen::MatrixXcd eigen_route_frame(const Eigen::MatrixXcd &a) {
  const auto n = a.rows();
  const double scale = a.norm();
  if (scale == 0.0) {
    return Eigen::MatrixXcd::Identity(n, n);
  }
  Eigen::MatrixXcd h = a * a.conjugate();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of A conj(A) failed");
  }
  // Descending order.
  Eigen::VectorXd lambda = solver.eigenvalues().reverse();
  Eigen::MatrixXcd vecs = solver.eigenvectors().rowwise().reverse();
  const double lambda_max = std::max(lambda(0), 0.0);
  const double sigma_max = std::sqrt(lambda_max);

  Eigen::MatrixXcd frame(n, n);
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && lambda(end - 1) - lambda(end) <= kClusterTolerance * lambda_max) {
      ++end;
    }
    const Eigen::Index width = end - start;
    Eigen::MatrixXcd p = vecs.middleCols(start, width);
    double sigma = 0.0;
    for (Eigen::Index k = start; k < end; ++k) {
      sigma += std::sqrt(std::max(lambda(k), 0.0));
    }
    sigma /= static_cast<double>(width);
    if (sigma > kSmallSigma * sigma_max) {
      frame.middleCols(start, width) = block_frame(a, p, sigma);
    } else {
      // All remaining sigma are tiny: factorize the compressed block on its own scale.
      p = vecs.rightCols(n - start);
      Eigen::MatrixXcd b = p.adjoint() * a * p.conjugate();
      b = 0.5 * (b + b.transpose()).eval();
      Eigen::MatrixXcd inner = n - start == n ? Eigen::MatrixXcd::Identity(n, n) : eigen_route_frame(b);
      frame.rightCols(n - start) = p * inner;
      break;
    }
    start = end;
  }
  return frame;
}

TakagiFactorization eigen_route(const Eigen::MatrixXcd &a) { return canonicalize(a, eigen_route_frame(a)); }

TakagiFactorization embedding_route(const Eigen::MatrixXcd &a) {
  const auto n = a.rows();
  Eigen::MatrixXd x = a.real();
  Eigen::MatrixXd y = a.imag();
  Eigen::MatrixXd m(2 * n, 2 * n);
  m << x, y, y, -x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition of the real Takagi embedding failed");
  }
  const Eigen::VectorXd &lambda = solver.eigenvalues();
  const double top = std::max(std::abs(lambda(0)), std::abs(lambda(2 * n - 1)));
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
  Eigen::Index taken = 0;
  for (Eigen::Index k = 2 * n - 1; k >= 0 && taken < n; --k) {
    if (!(lambda(k) > 1e-14 * top)) {
      break;
    }
    Eigen::VectorXd q = solver.eigenvectors().col(k);
    v.col(taken++) = q.head(n).cast<Complex>() + Complex(0.0, 1.0) * q.tail(n).cast<Complex>();
  }
  // Complete with an orthonormal complement; Gram-Schmidt in order keeps the
  // large-sigma columns essentially untouched.
  Eigen::MatrixXcd candidates(n, taken + n);
  candidates << v.leftCols(taken), Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  Eigen::Index built = 0;
  for (Eigen::Index c = 0; c < candidates.cols() && built < n; ++c) {
    Eigen::VectorXcd w = candidates.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < built; ++j) {
        w -= q.col(j) * q.col(j).dot(w);
      }
    }
    double len = w.norm();
    if (len > 1e-6) {
      q.col(built++) = w / len;
    }
  }
  if (built != n) {
    throw NumericalError("could not complete the Takagi frame");
  }
  return canonicalize(a, q);
}

}  // namespace

TakagiFactorization takagi_decompose(const SymmetricCoeffs &coeffs) {
  const Eigen::MatrixXcd &a = coeffs.matrix();
  if (a.rows() == 0) {
    return {Eigen::MatrixXcd(0, 0), Eigen::VectorXd(0)};
  }
  TakagiFactorization f = eigen_route(a);
  const double scale = std::max(a.norm(), 1.0);
  const double rf = reconstruction_residual(a, f);
  if (rf <= kTightResidual * scale && meets_contract(a, f)) {
    return f;
  }
  // Close but distinct sigma leave the A conj(A) eigenvectors poorly resolved;
  // the real embedding is backward stable there, so keep whichever is better.
  TakagiFactorization g = embedding_route(a);
  const bool f_ok = meets_contract(a, f);
  const bool g_ok = meets_contract(a, g);
  if (f_ok && (!g_ok || rf <= reconstruction_residual(a, g))) {
    return f;
  }
  if (g_ok) {
    return g;
  }
  throw NumericalError(
      "Takagi reconstruction residual " + std::to_string(reconstruction_residual(a, g)) + " exceeds tolerance");
}

Eigen::VectorXd coefficient_spectrum(const SymmetricCoeffs &c) {
  Eigen::MatrixXcd h = c.matrix() * c.matrix().conjugate();
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation failed");
  }
  return solver.eigenvalues();
}

bool reachable(const SymmetricCoeffs &c, const SymmetricCoeffs &c_tilde, double tol) {
  if (c.dim() != c_tilde.dim()) {
    throw DomainError("coefficient matrices have different dimensions");
  }
  Eigen::VectorXd a = coefficient_spectrum(c);
  Eigen::VectorXd b = coefficient_spectrum(c_tilde);
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXcd synthesize_u(const SymmetricCoeffs &c, const SymmetricCoeffs &c_tilde, double tol) {
  if (!reachable(c, c_tilde, tol)) {
    throw DomainError("target coefficients are not reachable by single-atom transformations");
  }
  TakagiFactorization f = takagi_decompose(c);
  TakagiFactorization g = takagi_decompose(c_tilde);
  Eigen::MatrixXcd u = f.v.conjugate() * g.v.transpose();
  double residual = (u.transpose() * c.matrix() * u - c_tilde.matrix()).norm();
  if (!(residual <= 1e-9)) {
    throw NumericalError("synthesized transformation misses the target by " + std::to_string(residual));
  }
  return u;
}

}  // namespace rydsim
