#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ddsm {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point of the ddsmetrics tool (subcommands eval, sweep, bounds).
/// `args` excludes the program name. Returns 0, 2 (usage) or 3 (runtime).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ddsm
