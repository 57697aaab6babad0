#include "mcom/model.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mcom/errors.hpp"

namespace mcom {

namespace {

// CODATA 2018 exact values.
constexpr double kHbar = 1.054571817e-34;      // J s
constexpr double kBoltzmann = 1.380649e-23;    // J / K

struct FieldRef {
  const char* name;
  double SystemParams::*real = nullptr;
  int SystemParams::*integer = nullptr;
};

constexpr FieldRef kFields[] = {
    {"omega_m", &SystemParams::omega_m},
    {"g_m", &SystemParams::g_m},
    {"kappa_a", &SystemParams::kappa_a},
    {"kappa_c", &SystemParams::kappa_c},
    {"delta_a", &SystemParams::delta_a},
    {"delta_c", &SystemParams::delta_c},
    {"gamma_1", &SystemParams::gamma_1},
    {"gamma_2", &SystemParams::gamma_2},
    {"drive_a", &SystemParams::drive_a},
    {"drive_c", &SystemParams::drive_c},
    {"j_1", &SystemParams::j_1},
    {"j_2", &SystemParams::j_2},
    {"lambda_opa", &SystemParams::lambda_opa},
    {"theta", &SystemParams::theta},
    {"n_total", nullptr, &SystemParams::n_total},
    {"m_split", nullptr, &SystemParams::m_split},
    {"temperature", &SystemParams::temperature},
};

struct Alias {
  const char* name;
  const char* first;
  const char* second;
};

constexpr Alias kAliases[] = {
    {"drive", "drive_a", "drive_c"},
    {"kappa", "kappa_a", "kappa_c"},
    {"gamma", "gamma_1", "gamma_2"},
};

const FieldRef* find_field(std::string_view name) {
  for (const auto& f : kFields)
    if (name == f.name) return &f;
  return nullptr;
}

const Alias* find_alias(std::string_view name) {
  for (const auto& a : kAliases)
    if (name == a.name) return &a;
  return nullptr;
}

int to_integer(std::string_view name, double value) {
  if (!std::isfinite(value) || std::abs(value) > std::numeric_limits<int>::max())
    throw ConfigError(fmt::format("{} must be an integer, got {}", name, value));
  const double rounded = std::round(value);
  if (std::abs(rounded - value) > 1e-9)
    throw ConfigError(fmt::format("{} must be an integer, got {}", name, value));
  return static_cast<int>(rounded);
}

}  // namespace

std::pair<double, double> collective_couplings(const SystemParams& params) {
  const double g1 = params.g_m * std::sqrt(static_cast<double>(params.m_split));
  const double g2 = params.g_m * std::sqrt(static_cast<double>(params.n_total - params.m_split));
  return {g1, g2};
}

double thermal_occupation(double omega_si, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = kHbar * omega_si / (kBoltzmann * temperature);
  // expm1 overflows to +inf for huge x, which correctly yields 0.
  return 1.0 / std::expm1(x);
}

DerivedCouplings derive(const SystemParams& params) {
  const auto [g1, g2] = collective_couplings(params);
  return {g1, g2, thermal_occupation(params.omega_m, params.temperature)};
}

SystemParams validate(const SystemParams& p) {
  for (const auto& f : kFields) {
    if (f.real && !std::isfinite(p.*(f.real)))
      throw ConfigError(fmt::format("{} must be finite", f.name));
  }
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(fmt::format("{} must be positive", name));
  };
  positive(p.omega_m, "omega_m");
  positive(p.kappa_a, "kappa_a");
  positive(p.kappa_c, "kappa_c");
  positive(p.gamma_1, "gamma_1");
  positive(p.gamma_2, "gamma_2");
  if (p.g_m < 0.0) throw ConfigError("g_m must be non-negative");
  if (p.lambda_opa < 0.0) throw ConfigError("lambda_opa must be non-negative");
  if (p.temperature < 0.0) throw ConfigError("temperature must be non-negative");
  if (p.n_total < 0) throw ConfigError("n_total must be non-negative");
  if (p.m_split < 0) throw ConfigError("m_split must be non-negative");
  if (p.m_split > p.n_total) throw ConfigError("m_split exceeds n_total");
  return p;
}

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& f : kFields) out.emplace_back(f.name);
    for (const auto& a : kAliases) out.emplace_back(a.name);
    return out;
  }();
  return names;
}

bool is_field(std::string_view name) { return find_field(name) || find_alias(name); }

bool is_integer_field(std::string_view name) {
  const auto* f = find_field(name);
  return f && f->integer;
}

void set_field(SystemParams& params, std::string_view name, double value) {
  if (const auto* a = find_alias(name)) {
    set_field(params, a->first, value);
    set_field(params, a->second, value);
    return;
  }
  const auto* f = find_field(name);
  if (!f) throw ConfigError(fmt::format("unknown parameter '{}'", name));
  if (f->integer)
    params.*(f->integer) = to_integer(name, value);
  else
    params.*(f->real) = value;
}

double get_field(const SystemParams& params, std::string_view name) {
  if (const auto* a = find_alias(name)) return get_field(params, a->first);
  const auto* f = find_field(name);
  if (!f) throw ConfigError(fmt::format("unknown parameter '{}'", name));
  return f->integer ? static_cast<double>(params.*(f->integer)) : params.*(f->real);
}

SystemParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  SystemParams p;
  // Aliases first so that explicit per-member keys win.
  for (const auto& a : kAliases) {
    if (j.contains(a.name)) {
      const auto& v = j.at(a.name);
      if (!v.is_number()) throw ConfigError(fmt::format("{} must be a number", a.name));
      set_field(p, a.name, v.get<double>());
    }
  }
  for (const auto& [key, v] : j.items()) {
    if (find_alias(key)) continue;
    const auto* f = find_field(key);
    if (!f) throw ConfigError(fmt::format("unknown config key '{}'", key));
    if (!v.is_number()) throw ConfigError(fmt::format("{} must be a number", key));
    if (f->integer) {
      if (v.is_number_integer())
        p.*(f->integer) = v.get<int>();
      else
        p.*(f->integer) = to_integer(key, v.get<double>());
    } else {
      p.*(f->real) = v.get<double>();
    }
  }
  return p;
}

nlohmann::json params_to_json(const SystemParams& params) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : kFields) {
    if (f.integer)
      j[f.name] = params.*(f.integer);
    else
      j[f.name] = params.*(f.real);
  }
  return j;
}

}  // namespace mcom
