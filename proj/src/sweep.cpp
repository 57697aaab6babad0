#include "mcom/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "mcom/errors.hpp"

namespace mcom {

namespace {

bool is_entanglement(Observable o) {
  return o == Observable::ECB1 || o == Observable::ECB2 || o == Observable::EB1B2;
}

std::optional<double> pick(const PointResult& r, Observable o) {
  switch (o) {
    case Observable::ECB1: return r.e_cb1;
    case Observable::ECB2: return r.e_cb2;
    case Observable::EB1B2: return r.e_b1b2;
    default: return std::nullopt;
  }
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

SweepRow evaluate_row(const SweepSpec& spec, const std::vector<Observable>& columns,
                      std::vector<double> axis_values) {
  SystemParams p = spec.base;
  set_field(p, spec.axis_1.field, axis_values[0]);
  if (spec.axis_2) set_field(p, spec.axis_2->field, axis_values[1]);

  const PointResult r = evaluate_point(p, spec.mean_field);
  SweepRow row;
  row.axis_values = std::move(axis_values);
  row.status = r.status;
  row.stable = r.stable();
  if (r.stability) row.max_real_part = r.stability->max_real_part;
  row.message = r.message;
  row.values.reserve(columns.size());
  for (auto o : columns) row.values.push_back(row.stable ? pick(r, o) : std::nullopt);
  return row;
}

Axis axis_from_json(const nlohmann::json& j, int default_count) {
  if (!j.is_object()) throw ConfigError("axis must be a JSON object");
  Axis a;
  a.count = default_count;
  for (const auto& [key, v] : j.items()) {
    if (key == "field") {
      a.field = v.get<std::string>();
    } else if (key == "min") {
      a.min = v.get<double>();
    } else if (key == "max") {
      a.max = v.get<double>();
    } else if (key == "count") {
      a.count = v.get<int>();
    } else if (key == "scale") {
      const auto s = v.get<std::string>();
      if (s == "linear")
        a.scale = AxisScale::Linear;
      else if (s == "log")
        a.scale = AxisScale::Log;
      else
        throw ConfigError(fmt::format("unknown axis scale '{}'", s));
    } else {
      throw ConfigError(fmt::format("unknown axis key '{}'", key));
    }
  }
  if (a.field.empty()) throw ConfigError("axis needs a field");
  return a;
}

nlohmann::json axis_to_json(const Axis& a) {
  return {{"field", a.field},
          {"min", a.min},
          {"max", a.max},
          {"count", a.count},
          {"scale", a.scale == AxisScale::Log ? "log" : "linear"}};
}

}  // namespace

Observable parse_observable(std::string_view s) {
  if (s == "stability") return Observable::Stability;
  if (s == "max_real_part") return Observable::MaxRealPart;
  if (s == "E_cB1") return Observable::ECB1;
  if (s == "E_cB2") return Observable::ECB2;
  if (s == "E_B1B2") return Observable::EB1B2;
  throw ConfigError(fmt::format("unknown observable '{}'", s));
}

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::Stability: return "stability";
    case Observable::MaxRealPart: return "max_real_part";
    case Observable::ECB1: return "E_cB1";
    case Observable::ECB2: return "E_cB2";
    case Observable::EB1B2: return "E_B1B2";
  }
  return "?";
}

std::vector<double> Axis::values() const {
  std::vector<double> out;
  if (is_integer_field(field)) {
    const long lo = std::lround(min);
    const long hi = std::lround(max);
    const long available = std::abs(hi - lo) + 1;
    const long n = std::min<long>(count, available);
    if (n == 1) return {static_cast<double>(lo)};
    for (long i = 0; i < n; ++i) {
      const double x = static_cast<double>(lo) +
                       static_cast<double>(hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(std::round(x));
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    if (scale == AxisScale::Log)
      out.push_back(std::exp(std::log(min) + f * (std::log(max) - std::log(min))));
    else
      out.push_back(min + f * (max - min));
  }
  // Pin the endpoints exactly.
  out.front() = min;
  out.back() = max;
  return out;
}

void check_spec(const SweepSpec& spec) {
  auto check_axis = [](const Axis& a) {
    if (!is_field(a.field)) throw ConfigError(fmt::format("cannot sweep unknown field '{}'", a.field));
    if (a.field == "omega_m")
      throw ConfigError("omega_m is the unit of all rates; sweep temperature or the ratios instead");
    if (a.count < 2) throw ConfigError(fmt::format("axis '{}' needs count >= 2", a.field));
    if (!std::isfinite(a.min) || !std::isfinite(a.max))
      throw ConfigError(fmt::format("axis '{}' has non-finite bounds", a.field));
    if (a.scale == AxisScale::Log && !(a.min > 0.0 && a.max > 0.0))
      throw ConfigError(fmt::format("log axis '{}' needs positive bounds", a.field));
  };
  check_axis(spec.axis_1);
  if (spec.axis_2) {
    check_axis(*spec.axis_2);
    if (spec.axis_2->field == spec.axis_1.field) throw ConfigError("both axes sweep the same field");
  }
  validate(spec.base);
  // Validate every grid point so that parameter errors surface before any work.
  const auto v1 = spec.axis_1.values();
  const auto v2 = spec.axis_2 ? spec.axis_2->values() : std::vector<double>{0.0};
  for (double x : v1) {
    for (double y : v2) {
      SystemParams p = spec.base;
      set_field(p, spec.axis_1.field, x);
      if (spec.axis_2) set_field(p, spec.axis_2->field, y);
      try {
        validate(p);
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("grid point {}={}{}: {}", spec.axis_1.field, x,
                                      spec.axis_2 ? fmt::format(", {}={}", spec.axis_2->field, y) : "",
                                      e.what()));
      }
    }
  }
}

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
  check_spec(spec);

  SweepTable table;
  table.axis_names.push_back(spec.axis_1.field);
  if (spec.axis_2) table.axis_names.push_back(spec.axis_2->field);
  for (auto o : spec.observables)
    if (is_entanglement(o) &&
        std::find(table.value_columns.begin(), table.value_columns.end(), o) == table.value_columns.end())
      table.value_columns.push_back(o);

  std::vector<std::vector<double>> points;
  const auto v1 = spec.axis_1.values();
  if (spec.axis_2) {
    const auto v2 = spec.axis_2->values();
    for (double x : v1)
      for (double y : v2) points.push_back({x, y});
  } else {
    for (double x : v1) points.push_back({x});
  }

  table.rows.resize(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(points.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++)
      table.rows[i] = evaluate_row(spec, table.value_columns, points[i]);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return table;
}

void emit_csv(const SweepTable& table, std::ostream& out, const std::optional<std::string>& comment) {
  if (comment) out << "# " << *comment << '\n';
  for (const auto& name : table.axis_names) out << name << ',';
  out << "stable,max_real_part";
  for (auto o : table.value_columns) out << ',' << to_string(o);
  out << '\n';
  for (const auto& row : table.rows) {
    for (double x : row.axis_values) out << format_real(x) << ',';
    out << (row.stable ? '1' : '0') << ',';
    if (row.max_real_part) out << format_real(*row.max_real_part);
    for (const auto& v : row.values) {
      out << ',';
      if (v) out << format_real(*v);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing CSV output");
}

void write_csv(const SweepTable& table, const std::string& path, const std::optional<std::string>& comment) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open '{}' for writing", path));
  emit_csv(table, f, comment);
  f.close();
  if (!f) throw IoError(fmt::format("failed writing '{}'", path));
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sweep config must be a JSON object");
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json axis1, axis2;
  SweepSpec spec;
  bool have_observables = false;

  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "axis1") {
        axis1.update(v);
      } else if (key == "axis2") {
        axis2.update(v);
      } else if (key.rfind("axis1.", 0) == 0) {
        axis1[key.substr(6)] = v;
      } else if (key.rfind("axis2.", 0) == 0) {
        axis2[key.substr(6)] = v;
      } else if (key == "observables") {
        have_observables = true;
        for (const auto& o : v) spec.observables.push_back(parse_observable(o.get<std::string>()));
      } else if (key == "mode") {
        spec.mean_field.opa = parse_opa_coupling(v.get<std::string>());
      } else if (key == "detuning") {
        spec.mean_field.detuning = parse_detuning_input(v.get<std::string>());
      } else {
        params[key] = v;
      }
    }
    if (axis1.is_null()) throw ConfigError("sweep config needs axis1");
    const bool two_d = !axis2.is_null();
    spec.axis_1 = axis_from_json(axis1, two_d ? 61 : 101);
    if (two_d) spec.axis_2 = axis_from_json(axis2, 61);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed sweep config: {}", e.what()));
  }
  if (!have_observables) spec.observables = {Observable::ECB1, Observable::ECB2, Observable::EB1B2};
  spec.base = params_from_json(params);
  return spec;
}

nlohmann::json sweep_spec_to_json(const SweepSpec& spec) {
  nlohmann::json j = params_to_json(spec.base);
  j["axis1"] = axis_to_json(spec.axis_1);
  if (spec.axis_2) j["axis2"] = axis_to_json(*spec.axis_2);
  nlohmann::json obs = nlohmann::json::array();
  for (auto o : spec.observables) obs.push_back(std::string(to_string(o)));
  j["observables"] = obs;
  j["mode"] = std::string(to_string(spec.mean_field.opa));
  j["detuning"] = std::string(to_string(spec.mean_field.detuning));
  return j;
}

double find_stability_threshold(const SystemParams& base, std::string_view field, double stable_value,
                                double unstable_value, double tol, const MeanFieldOptions& options) {
  auto is_stable = [&](double x) {
    SystemParams p = base;
    set_field(p, field, x);
    return evaluate_point(p, options).stable();
  };
  if (!is_stable(stable_value))
    throw ConfigError(fmt::format("{} = {} is not stable", field, stable_value));
  if (is_stable(unstable_value))
    throw ConfigError(fmt::format("{} = {} is not unstable", field, unstable_value));
  double lo = stable_value;
  double hi = unstable_value;
  while (std::abs(hi - lo) > tol) {
    const double mid = 0.5 * (lo + hi);
    (is_stable(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace mcom
