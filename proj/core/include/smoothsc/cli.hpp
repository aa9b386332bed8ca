#pragma once

#include <iosfwd>

namespace smoothsc {

/// Command line driver: run, table, decay, adapt, spectrum. Returns 0 on
/// success, 2 for usage errors (unknown flags, bad values, missing config
/// file) and 1 for failures while computing.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smoothsc
