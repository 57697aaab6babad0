#pragma once

#include <iosfwd>

namespace mcom::cli {

// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mcom::cli
