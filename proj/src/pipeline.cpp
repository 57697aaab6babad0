#include "mcom/pipeline.hpp"

#include <limits>

#include "mcom/errors.hpp"

namespace mcom {

std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Unstable: return "unstable";
    case PointStatus::MeanFieldFailure: return "mean_field_failure";
    case PointStatus::LyapunovFailure: return "lyapunov_failure";
    case PointStatus::NonPhysical: return "non_physical";
  }
  return "?";
}

PointResult evaluate_point(const SystemParams& params, const MeanFieldOptions& options) {
  const SystemParams p = validate(params);
  PointResult r;
  r.uncertainty_margin = std::numeric_limits<double>::quiet_NaN();

  try {
    r.steady_state = solve_mean_field(p, options);
  } catch (const NumericalError& e) {
    r.status = PointStatus::MeanFieldFailure;
    r.message = e.what();
    return r;
  }

  const DriftMatrix drift = build_drift(*r.steady_state, p);
  try {
    r.stability = stability(drift);
  } catch (const NumericalError& e) {
    r.status = PointStatus::LyapunovFailure;
    r.message = e.what();
    return r;
  }
  if (!r.stability->stable) {
    r.status = PointStatus::Unstable;
    return r;
  }

  const DiffusionMatrix diffusion = build_diffusion(p, derive(p).n_th);
  try {
    r.covariance = solve_lyapunov(drift, diffusion);
  } catch (const NumericalError& e) {
    r.status = PointStatus::LyapunovFailure;
    r.message = e.what();
    return r;
  }
  r.uncertainty_margin = uncertainty_margin(*r.covariance);

  auto negativity = [&](Mode x, Mode y) -> std::optional<double> {
    try {
      return log_negativity(extract_pair(*r.covariance, ModePair(x, y)));
    } catch (const NonPhysicalState& e) {
      r.status = PointStatus::NonPhysical;
      r.message = e.what();
      return std::nullopt;
    }
  };
  r.e_cb1 = negativity(Mode::CavityC, Mode::Vib1);
  r.e_cb2 = negativity(Mode::CavityC, Mode::Vib2);
  r.e_b1b2 = negativity(Mode::Vib1, Mode::Vib2);
  return r;
}

}  // namespace mcom
