#include "mcom/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mcom/errors.hpp"

namespace mcom {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::CavityA: return "cavity_a";
    case Mode::CavityC: return "cavity_c";
    case Mode::Vib1: return "vib_1";
    case Mode::Vib2: return "vib_2";
  }
  return "?";
}

ModePair::ModePair(Mode first, Mode second) : first_(first), second_(second) {
  if (first == second) throw std::invalid_argument("mode pair needs two distinct modes");
}

Matrix4 PairCovariance::assembled() const {
  Matrix4 m;
  m << phi_1, phi_3, phi_3.transpose(), phi_2;
  return m;
}

PairCovariance PairCovariance::from_matrix(const Matrix4& m) {
  return {m.topLeftCorner<2, 2>(), m.bottomRightCorner<2, 2>(), m.topRightCorner<2, 2>()};
}

PairCovariance extract_pair(const CovarianceMatrix& v, const ModePair& pair) {
  const int i = 2 * static_cast<int>(pair.first());
  const int j = 2 * static_cast<int>(pair.second());
  return {v.v.block<2, 2>(i, i), v.v.block<2, 2>(j, j), v.v.block<2, 2>(i, j)};
}

double log_negativity(const PairCovariance& pc) {
  const double sigma = pc.phi_1.determinant() + pc.phi_2.determinant() - 2.0 * pc.phi_3.determinant();
  const double det = pc.assembled().determinant();
  double disc = sigma * sigma - 4.0 * det;
  if (disc < -kDiscriminantTolerance)
    throw NonPhysicalState(fmt::format("negative discriminant {:.3e} in symplectic spectrum", disc));
  disc = std::max(disc, 0.0);
  const double zeta_sq = std::max(0.5 * (sigma - std::sqrt(disc)), 0.0);
  const double zeta = std::sqrt(zeta_sq);
  if (zeta == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log(2.0 * zeta));
}

double log_negativity_ppt_oracle(const PairCovariance& pc) {
  Matrix4 flip = Matrix4::Identity();
  flip(3, 3) = -1.0;
  const Matrix4 transposed = flip * pc.assembled() * flip;

  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;

  // Eigenvalues of Omega V~ are +-i nu_k; the moduli are the symplectic
  // eigenvalues of V~ (identical to those of i Omega V~).
  Eigen::EigenSolver<Matrix4> solver(omega * transposed, false);
  if (solver.info() != Eigen::Success) throw EigenvalueFailure("symplectic spectrum did not converge");
  double nu_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) nu_min = std::min(nu_min, std::abs(solver.eigenvalues()(k)));
  if (nu_min == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log(2.0 * nu_min));
}

}  // namespace mcom
