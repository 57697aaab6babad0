#pragma once

// One parameter point through the full chain: mean field, drift and
// diffusion, stability, covariance, entanglement.

#include <optional>
#include <string>
#include <string_view>

#include "mcom/dynamics.hpp"
#include "mcom/entanglement.hpp"
#include "mcom/lyapunov.hpp"
#include "mcom/meanfield.hpp"
#include "mcom/model.hpp"

namespace mcom {

enum class PointStatus {
  Ok,
  Unstable,          // drift matrix not Hurwitz
  MeanFieldFailure,  // NonConvergence / singular mean-field solve
  LyapunovFailure,   // SingularSolve or eigensolver failure
  NonPhysical,       // log-negativity discriminant out of range
};

std::string_view to_string(PointStatus s);

struct PointResult {
  PointStatus status = PointStatus::Ok;
  std::optional<SteadyState> steady_state;
  std::optional<StabilityReport> stability;
  std::optional<CovarianceMatrix> covariance;
  std::optional<double> e_cb1;
  std::optional<double> e_cb2;
  std::optional<double> e_b1b2;
  // Smallest eigenvalue of V + (i/2) Omega; NaN when no covariance exists.
  double uncertainty_margin = 0.0;
  std::string message;

  bool stable() const { return stability && stability->stable; }
};

// Never throws for numerical failures; they are reported through status.
// ConfigError propagates for invalid parameters.
PointResult evaluate_point(const SystemParams& params, const MeanFieldOptions& options = {});

}  // namespace mcom
