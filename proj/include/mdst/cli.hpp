#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdst::cli {

/// Dispatches one command. Returns 0 on success, 2 on validation/usage
/// errors, 1 on internal errors. Testable without spawning a process.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdst::cli
