#pragma once

// Pre-baked sweeps matching the published stability maps and entanglement
// curves.

#include <string>
#include <string_view>
#include <vector>

#include "mcom/sweep.hpp"

namespace mcom {

struct FigureSpec {
  std::string id;
  std::string description;
  SweepSpec sweep;
};

const std::vector<std::string>& figure_ids();

// Throws ConfigError for an unknown id.
FigureSpec reproduce(std::string_view figure_id);

}  // namespace mcom
