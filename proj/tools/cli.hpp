#pragma once

#include <ostream>

namespace terraprop::cli {

/// Runs the terraprop command line. Returns 0 on success, 1 on a data error
/// and 2 on a usage error. The last line written to `out` is a JSON summary.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace terraprop::cli
