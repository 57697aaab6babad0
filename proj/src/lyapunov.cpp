#include "mcom/lyapunov.hpp"

#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "mcom/errors.hpp"

namespace mcom {

namespace {

using Matrix64 = Eigen::Matrix<double, 64, 64>;
using Vector64 = Eigen::Matrix<double, 64, 1>;

Matrix64 kronecker_operator(const Matrix8& a) {
  // Column-major vec: vec(AV) = (I (x) A) vec(V), vec(VA^T) = (A (x) I) vec(V).
  Matrix64 k = Matrix64::Zero();
  for (int j = 0; j < 8; ++j) {
    k.block<8, 8>(8 * j, 8 * j) += a;
    for (int i = 0; i < 8; ++i) k.block<8, 8>(8 * i, 8 * j).diagonal().array() += a(i, j);
  }
  return k;
}

Matrix8 unvec(const Vector64& x) { return Eigen::Map<const Matrix8>(x.data()); }

Vector64 vec(const Matrix8& m) { return Eigen::Map<const Vector64>(m.data()); }

}  // namespace

double lyapunov_residual(const DriftMatrix& a, const DiffusionMatrix& d, const CovarianceMatrix& v) {
  return (a.a * v.v + v.v * a.a.transpose() + d.d).norm();
}

CovarianceMatrix solve_lyapunov(const DriftMatrix& a, const DiffusionMatrix& d) {
  const auto report = stability(a);
  if (!report.stable)
    throw UnstableSystem(fmt::format("system unstable (max Re λ = {:.6e})", report.max_real_part),
                         report.max_real_part);

  // Solve for the correction W to a diagonal guess V0 with
  // V0_ii = -D_ii / (2 A_ii), so V = V0 + W.
  Matrix8 v0 = Matrix8::Zero();
  for (int i = 0; i < 8; ++i)
    if (a.a(i, i) < 0.0) v0(i, i) = -d.d(i, i) / (2.0 * a.a(i, i));

  const Matrix64 k = kronecker_operator(a.a);
  const Vector64 rhs = -vec(d.d + a.a * v0 + v0 * a.a.transpose());
  Eigen::PartialPivLU<Matrix64> lu(k);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-15)) throw SingularSolve(fmt::format("Lyapunov operator is singular (rcond {:.3e})", rcond));

  Vector64 x = lu.solve(rhs);
  // One round of iterative refinement; cheap and tightens the residual near
  // marginal stability.
  x += lu.solve(rhs - k * x);

  CovarianceMatrix out{v0 + unvec(x)};
  out.v = 0.5 * (out.v + out.v.transpose()).eval();

  const double bound = 1e-10 * d.d.norm();
  const double residual = lyapunov_residual(a, d, out);
  if (!(residual <= bound))
    throw SingularSolve(fmt::format("Lyapunov residual {:.3e} exceeds bound {:.3e}", residual, bound));
  return out;
}

CovarianceTrajectoryEnd integrate_covariance(const DriftMatrix& a, const DiffusionMatrix& d,
                                             const Matrix8& v0, double t_end, double dt) {
  if (!(dt > 0.0) || dt > 0.01) throw ConfigError("integration step must lie in (0, 0.01]");
  if (!(t_end >= 0.0)) throw ConfigError("integration horizon must be non-negative");

  // Exact flow over tau: V -> Phi V Phi^T + Q with Phi = e^{A tau} and
  // Q = int_0^tau e^{As} D e^{A^T s} ds. Q comes from the Van Loan block
  // exponential exp([[-A, D], [0, A^T]] tau) = [[*, F12], [0, F22]],
  // Q = F22^T F12.
  auto flow = [&](double tau, Matrix8& phi, Matrix8& q) {
    Eigen::Matrix<double, 16, 16> block = Eigen::Matrix<double, 16, 16>::Zero();
    block.topLeftCorner<8, 8>() = -a.a * tau;
    block.topRightCorner<8, 8>() = d.d * tau;
    block.bottomRightCorner<8, 8>() = a.a.transpose() * tau;
    const Eigen::Matrix<double, 16, 16> e = block.exp();
    const Matrix8 f22 = e.bottomRightCorner<8, 8>();
    phi = f22.transpose();
    q = f22.transpose() * e.topRightCorner<8, 8>();
  };
  auto derivative_norm = [&](const Matrix8& v) {
    return (a.a * v + v * a.a.transpose() + d.d).norm();
  };
  constexpr double kOverflow = 1e12;
  constexpr double kConverged = 1e-12;

  CovarianceTrajectoryEnd out{{v0}, 0.0, false};
  Matrix8& v = out.v.v;
  auto apply = [&](const Matrix8& phi, const Matrix8& q, double tau) {
    v = phi * v * phi.transpose() + q;
    v = 0.5 * (v + v.transpose()).eval();
    out.t += tau;
    if (!v.allFinite() || v.norm() > kOverflow)
      throw Diverged(fmt::format("covariance diverged at t = {:.6g}", out.t));
    out.converged = derivative_norm(v) <= kConverged;
  };

  out.converged = derivative_norm(v) <= kConverged;
  if (out.converged) return out;

  auto steps = static_cast<unsigned long long>(std::floor(t_end / dt));
  const double remainder = t_end - static_cast<double>(steps) * dt;

  Matrix8 phi, q;
  flow(dt, phi, q);
  double tau = dt;
  // Binary decomposition of the step count: the flow of a time-invariant
  // system composes in any order.
  while (steps > 0 && !out.converged) {
    if (steps & 1ULL) apply(phi, q, tau);
    steps >>= 1;
    if (steps == 0 || out.converged) break;
    q = (phi * q * phi.transpose() + q).eval();
    q = 0.5 * (q + q.transpose()).eval();
    phi = (phi * phi).eval();
    tau *= 2.0;
  }
  if (!out.converged && remainder > 0.0) {
    flow(remainder, phi, q);
    apply(phi, q, remainder);
  }
  return out;
}

double uncertainty_margin(const CovarianceMatrix& v) {
  using Complex8 = Eigen::Matrix<std::complex<double>, 8, 8>;
  Complex8 h = v.v.cast<std::complex<double>>();
  for (int m = 0; m < 4; ++m) {
    h(2 * m, 2 * m + 1) += std::complex<double>(0.0, 0.5);
    h(2 * m + 1, 2 * m) -= std::complex<double>(0.0, 0.5);
  }
  Eigen::SelfAdjointEigenSolver<Complex8> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace mcom
