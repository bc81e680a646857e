#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modkit::cli {

/// Runs one command line. Returns 0 when every check passes, 1 on a failed
/// check, 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modkit::cli
