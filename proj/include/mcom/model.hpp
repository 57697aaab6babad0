#pragma once

// Physical parameters of the double-cavity molecular optomechanical system.
//
// Every rate, detuning, coupling and drive is stored in units of the
// vibrational frequency omega_m. omega_m itself is in rad/s and only enters
// the thermal occupation.

#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace mcom {

struct SystemParams {
  double omega_m = 2.0 * std::numbers::pi * 30e12;  // rad/s
  double g_m = 1e-3;
  double kappa_a = 0.3;
  double kappa_c = 0.3;
  double delta_a = 1.0;
  double delta_c = 1.0;
  double gamma_1 = 1e-4;
  double gamma_2 = 1e-4;
  double drive_a = 16.0;
  double drive_c = 16.0;
  double j_1 = 0.9;
  double j_2 = 0.3;
  double lambda_opa = 0.2;
  double theta = std::numbers::pi / 2.0;
  int n_total = 100;
  int m_split = 50;
  double temperature = 312.0;  // K

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

struct DerivedCouplings {
  double g_1 = 0.0;
  double g_2 = 0.0;
  double n_th = 0.0;
};

// g_1 = g_m sqrt(M), g_2 = g_m sqrt(N - M).
std::pair<double, double> collective_couplings(const SystemParams& params);

// Bose-Einstein occupation of a mode at omega_si (rad/s) and temperature (K).
// Exactly zero at T = 0.
double thermal_occupation(double omega_si, double temperature);

DerivedCouplings derive(const SystemParams& params);

// Returns params unchanged or throws ConfigError naming the first violated
// invariant.
SystemParams validate(const SystemParams& params);

// Names accepted by set_field/get_field. Aliases "drive", "kappa" and
// "gamma" write both members of the corresponding pair.
const std::vector<std::string>& field_names();
bool is_field(std::string_view name);
bool is_integer_field(std::string_view name);
void set_field(SystemParams& params, std::string_view name, double value);
double get_field(const SystemParams& params, std::string_view name);

// JSON config: one key per field, missing keys keep their defaults.
// Unknown keys are rejected so typos do not silently fall back to defaults.
SystemParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const SystemParams& params);

}  // namespace mcom
