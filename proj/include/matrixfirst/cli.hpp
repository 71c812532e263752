#pragma once

#include <iosfwd>

#include "matrixfirst/json_io.hpp"

namespace matrixfirst::cli {

/// Exit statuses: 0 success, 1 domain error, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Human-readable rendering of a result document; matrices become grids.
void render_text(const Json& result, std::ostream& out);

}  // namespace matrixfirst::cli
