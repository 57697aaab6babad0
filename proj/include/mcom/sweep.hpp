#pragma once

// Grid evaluation of the pipeline over one or two parameters.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcom/meanfield.hpp"
#include "mcom/model.hpp"
#include "mcom/pipeline.hpp"

namespace mcom {

enum class Observable { Stability, MaxRealPart, ECB1, ECB2, EB1B2 };

Observable parse_observable(std::string_view s);
std::string_view to_string(Observable o);

enum class AxisScale { Linear, Log };

struct Axis {
  std::string field;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  AxisScale scale = AxisScale::Linear;

  // Grid values in order. Integer fields (n_total, m_split) are swept over
  // integers, with count clipped to the number of integers in range.
  std::vector<double> values() const;
};

struct SweepSpec {
  SystemParams base;
  Axis axis_1;
  std::optional<Axis> axis_2;
  std::vector<Observable> observables;
  MeanFieldOptions mean_field;
};

// Throws ConfigError for unknown fields, count < 2, bad log ranges, or grid
// points whose parameter set fails validation.
void check_spec(const SweepSpec& spec);

struct SweepRow {
  std::vector<double> axis_values;
  PointStatus status = PointStatus::Ok;
  bool stable = false;
  std::optional<double> max_real_part;
  // One entry per entanglement observable in SweepTable::value_columns.
  std::vector<std::optional<double>> values;
  std::string message;
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<Observable> value_columns;
  std::vector<SweepRow> rows;
};

// Rows are ordered with axis_2 varying fastest. threads == 0 uses the
// hardware concurrency; the table does not depend on the thread count.
SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

// Header: axis names, "stable", "max_real_part", one column per entanglement
// observable. Empty cells mark values that do not exist (unstable or failed
// points). Reals use 17 significant digits. An optional comment is written
// first as "# <comment>".
void emit_csv(const SweepTable& table, std::ostream& out,
              const std::optional<std::string>& comment = std::nullopt);
void write_csv(const SweepTable& table, const std::string& path,
               const std::optional<std::string>& comment = std::nullopt);

// Config form: parameter keys at the top level plus axis1 / axis2 objects
// (or flattened "axis1.field" style keys), "observables", and optionally
// "mode" / "detuning" for the mean-field solver.
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
nlohmann::json sweep_spec_to_json(const SweepSpec& spec);

// Bisection on one field for the stability boundary between a stable value
// and an unstable value. Returns the last stable value found, within tol of
// the boundary. Throws ConfigError if the endpoints do not straddle it.
double find_stability_threshold(const SystemParams& base, std::string_view field, double stable_value,
                                double unstable_value, double tol,
                                const MeanFieldOptions& options = {});

}  // namespace mcom
