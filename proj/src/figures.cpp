#include "mcom/figures.hpp"

#include <numbers>

#include <fmt/format.h>

#include "mcom/errors.hpp"

namespace mcom {

namespace {

using enum Observable;

// Runs with and without the OPA are expressed as a two-point lambda_opa axis.
const Axis kOpaOnOff{"lambda_opa", 0.0, 0.2, 2};

FigureSpec make(std::string id, std::string description, Axis a1, std::optional<Axis> a2,
                std::vector<Observable> obs, SystemParams base = {}) {
  SweepSpec s;
  s.base = base;
  s.axis_1 = std::move(a1);
  s.axis_2 = std::move(a2);
  s.observables = std::move(obs);
  return {std::move(id), std::move(description), std::move(s)};
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig2a", "fig2b", "fig3", "fig4", "fig5",
                                               "fig6",  "fig7",  "fig8", "fig9", "fig10"};
  return ids;
}

FigureSpec reproduce(std::string_view id) {
  const SystemParams defaults;

  if (id == "fig2a")
    return make("fig2a", "stability map over drive and OPA gain, N = 100", {"drive", 0.0, 60.0, 61},
                Axis{"lambda_opa", 0.0, 0.5, 61}, {Stability});
  if (id == "fig2b") {
    // M = 50 stays fixed, so N starts at 50.
    return make("fig2b", "stability map over drive and molecule number, OPA gain 0.2",
                {"drive", 0.0, 60.0, 61}, Axis{"n_total", 50.0, 200.0, 61}, {Stability});
  }
  if (id == "fig3")
    return make("fig3", "entanglement over drive and OPA gain, N = 100", {"drive", 0.0, 60.0, 61},
                Axis{"lambda_opa", 0.0, 0.5, 61}, {ECB2, EB1B2});
  if (id == "fig4") {
    SystemParams p = defaults;
    p.m_split = 0;
    p.drive_a = p.drive_c = 16.0;
    return make("fig4", "entanglement versus molecule number, M = 0, with and without OPA",
                {"n_total", 1.0, 100.0, 100}, kOpaOnOff, {ECB2, EB1B2}, p);
  }
  if (id == "fig5") {
    SystemParams p = defaults;
    p.drive_a = p.drive_c = 50.0;
    return make("fig5", "entanglement versus collective split M, N = 100, drive 50",
                {"m_split", 0.0, 100.0, 101}, std::nullopt, {ECB2, EB1B2}, p);
  }
  if (id == "fig6")
    return make("fig6", "entanglement versus cavity-1 detuning, with and without OPA",
                {"delta_a", 0.0, 2.0, 101}, kOpaOnOff, {ECB2, EB1B2});
  if (id == "fig7")
    return make("fig7", "entanglement versus effective cavity-2 detuning, with and without OPA",
                {"delta_c", 0.0, 3.0, 101}, kOpaOnOff, {ECB2, EB1B2});
  if (id == "fig8")
    return make("fig8", "entanglement versus temperature, with and without OPA",
                {"temperature", 1.0, 2000.0, 101, AxisScale::Log}, kOpaOnOff, {ECB2, EB1B2});
  if (id == "fig9")
    return make("fig9", "entanglement versus OPA phase over two periods",
                {"theta", 0.0, 4.0 * std::numbers::pi, 101}, std::nullopt, {ECB2, EB1B2});
  if (id == "fig10")
    return make("fig10", "entanglement over the nonreciprocal couplings, OPA gain 0.2",
                {"j_1", 0.0, 1.5, 61}, Axis{"j_2", 0.0, 1.5, 61}, {ECB2, EB1B2});

  throw ConfigError(fmt::format("unknown figure '{}' (expected one of fig2a, fig2b, fig3..fig10)", id));
}

}  // namespace mcom
