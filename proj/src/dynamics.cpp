#include "mcom/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mcom/errors.hpp"

namespace mcom {

DriftMatrix build_drift(const SteadyState& ss, const SystemParams& p) {
  const double two_lc = 2.0 * p.lambda_opa * std::cos(p.theta);
  const double two_ls = 2.0 * p.lambda_opa * std::sin(p.theta);
  const double dc = ss.delta_c_eff;
  const double G1 = ss.g_cap_1;
  const double G2 = ss.g_cap_2;
  constexpr double wm = 1.0;

  Matrix8 a = Matrix8::Zero();
  // cavity 1 with the OPA
  a(0, 0) = two_lc - p.kappa_a;
  a(0, 1) = two_ls + p.delta_a;
  a(0, 3) = p.j_1;
  a(1, 0) = two_ls - p.delta_a;
  a(1, 1) = -(two_lc + p.kappa_a);
  a(1, 2) = -p.j_1;
  // cavity 2
  a(2, 1) = p.j_2;
  a(2, 2) = -p.kappa_c;
  a(2, 3) = dc;
  a(3, 0) = -p.j_2;
  a(3, 2) = -dc;
  a(3, 3) = -p.kappa_c;
  a(3, 4) = 2.0 * G1;
  a(3, 6) = 2.0 * G2;
  // collective vibrations
  a(4, 4) = -p.gamma_1;
  a(4, 5) = wm;
  a(5, 2) = 2.0 * G1;
  a(5, 4) = -wm;
  a(5, 5) = -p.gamma_1;
  a(6, 6) = -p.gamma_2;
  a(6, 7) = wm;
  a(7, 2) = 2.0 * G2;
  a(7, 6) = -wm;
  a(7, 7) = -p.gamma_2;
  return {a};
}

DiffusionMatrix build_diffusion(const SystemParams& p, double n_th) {
  const double thermal = 2.0 * n_th + 1.0;
  Eigen::Matrix<double, 8, 1> diag;
  diag << p.kappa_a, p.kappa_a, p.kappa_c, p.kappa_c, p.gamma_1 * thermal, p.gamma_1 * thermal,
      p.gamma_2 * thermal, p.gamma_2 * thermal;
  return {diag.asDiagonal().toDenseMatrix()};
}

StabilityReport stability(const DriftMatrix& drift) {
  if (!drift.a.allFinite()) throw EigenvalueFailure("drift matrix has non-finite entries");
  Eigen::EigenSolver<Matrix8> solver(drift.a, false);
  if (solver.info() != Eigen::Success) throw EigenvalueFailure("eigenvalue iteration did not converge");

  StabilityReport report;
  report.max_real_part = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 8; ++i) {
    report.eigenvalues[i] = solver.eigenvalues()(i);
    report.max_real_part = std::max(report.max_real_part, report.eigenvalues[i].real());
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](auto x, auto y) {
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  report.stable = report.max_real_part < -kStabilityMargin;
  return report;
}

}  // namespace mcom
