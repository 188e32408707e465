#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bequest::cli {

// Default config path when --config is absent.
inline constexpr const char* kConfigEnv = "BEQUEST_CONFIG";

enum ExitCode : int { kOk = 0, kDomainError = 1, kValidationError = 2, kCheckFailed = 3 };

/// Runs one invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bequest::cli
