#pragma once

// Linearized quadrature dynamics d/dt Gamma = A Gamma + noise with
// Gamma = (x_a, y_a, x_c, y_c, q_1, p_1, q_2, p_2).

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "mcom/meanfield.hpp"
#include "mcom/model.hpp"

namespace mcom {

using Matrix8 = Eigen::Matrix<double, 8, 8>;

struct DriftMatrix {
  Matrix8 a;
};

struct DiffusionMatrix {
  Matrix8 d;
};

// Eigenvalues with real part at or above -kStabilityMargin count as unstable.
inline constexpr double kStabilityMargin = 1e-12;

struct StabilityReport {
  bool stable = false;
  double max_real_part = 0.0;
  std::array<std::complex<double>, 8> eigenvalues{};
};

DriftMatrix build_drift(const SteadyState& ss, const SystemParams& params);

// diag[k_a, k_a, k_c, k_c, g_1(2n+1), g_1(2n+1), g_2(2n+1), g_2(2n+1)].
DiffusionMatrix build_diffusion(const SystemParams& params, double n_th);

// Throws EigenvalueFailure if the eigensolver does not converge.
StabilityReport stability(const DriftMatrix& a);

}  // namespace mcom
