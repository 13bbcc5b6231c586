#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chemowave {

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNoConvergence = 3, kExitInternal = 4 };

/// Subcommands evolve | slab | eigen | scan | check. `args` excludes the
/// program name. Returns the process exit code.
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chemowave
