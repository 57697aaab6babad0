#pragma once

// Steady-state covariance of the quadrature fluctuations, A V + V A^T = -D.
// Vacuum normalization is 1/2 per quadrature.

#include "mcom/dynamics.hpp"

namespace mcom {

struct CovarianceMatrix {
  Matrix8 v;
};

// Dense Kronecker solve (I (x) A + A (x) I) vec(V) = -vec(D), followed by
// symmetrization. Throws UnstableSystem if A is not Hurwitz and SingularSolve
// if the 64x64 system is numerically singular or the residual bound
// ||AV + VA^T + D||_F <= 1e-10 ||D||_F cannot be met.
CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d);

// Frobenius norm of A V + V A^T + D.
double lyapunov_residual(const DriftMatrix& a, const DiffusionMatrix& d, const CovarianceMatrix& v);

struct CovarianceTrajectoryEnd {
  CovarianceMatrix v;
  double t = 0.0;          // time actually reached
  bool converged = false;  // ||dV/dt||_F <= 1e-12
};

// Integrates dV/dt = A V + V A^T + D from v0 up to t_end. The flow over a
// step dt is propagated exactly (matrix exponential of A and the Van Loan
// block exponential for the noise integral) and composed by repeated
// doubling, so long horizons cost O(log(t_end / dt)) matrix products.
// Stops early once ||dV/dt||_F <= 1e-12. Throws Diverged when V blows up.
CovarianceTrajectoryEnd integrate_covariance(const DriftMatrix& a, const DiffusionMatrix& d,
                                             const Matrix8& v0, double t_end, double dt);

// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega. A physical
// Gaussian state has it >= 0.
double uncertainty_margin(const CovarianceMatrix& v);

inline constexpr double kUncertaintyTolerance = 1e-9;

inline bool is_physical(const CovarianceMatrix& v) {
  return uncertainty_margin(v) >= -kUncertaintyTolerance;
}

}  // namespace mcom
