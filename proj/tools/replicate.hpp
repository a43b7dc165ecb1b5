#pragma once

#include <iosfwd>

namespace histat::tools {

// Runs the built-in replication suite (Laplace, Arbuthnot, the série
// intersections, the maritime scan, the Cournot relation and the
// correlation transform) and prints one pass/fail line per check.
// Returns true when every check passes.
bool run_replication(std::ostream& out, bool json_format);

}  // namespace histat::tools
