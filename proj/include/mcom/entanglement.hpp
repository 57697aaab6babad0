#pragma once

// Two-mode logarithmic negativity from the 8x8 covariance matrix.

#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "mcom/lyapunov.hpp"

namespace mcom {

enum class Mode { CavityA = 0, CavityC = 1, Vib1 = 2, Vib2 = 3 };

std::string_view to_string(Mode m);

class ModePair {
 public:
  // Throws std::invalid_argument if both modes coincide.
  ModePair(Mode first, Mode second);
  Mode first() const noexcept { return first_; }
  Mode second() const noexcept { return second_; }

 private:
  Mode first_;
  Mode second_;
};

using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;

// V_sub = [[phi_1, phi_3], [phi_3^T, phi_2]].
struct PairCovariance {
  Matrix2 phi_1;
  Matrix2 phi_2;
  Matrix2 phi_3;

  Matrix4 assembled() const;
  static PairCovariance from_matrix(const Matrix4& m);
};

PairCovariance extract_pair(const CovarianceMatrix& v, const ModePair& pair);

// Window below zero inside which rounding is clamped rather than reported.
inline constexpr double kDiscriminantTolerance = 1e-9;

// Closed form max(0, -ln 2 zeta) with
// zeta = 2^{-1/2} sqrt(S - sqrt(S^2 - 4 det V_sub)),
// S = det phi_1 + det phi_2 - 2 det phi_3.
// Throws NonPhysicalState if S^2 - 4 det V_sub < -1e-9.
double log_negativity(const PairCovariance& pc);

// Independent route: smallest symplectic eigenvalue of the partially
// transposed matrix (second mode's momentum flipped), read off the spectrum
// of Omega V~.
double log_negativity_ppt_oracle(const PairCovariance& pc);

}  // namespace mcom
