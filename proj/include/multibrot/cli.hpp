#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace multibrot::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kIoError = 3 };

/// Environment variable naming the directory that relative --cache paths
/// resolve against.
inline constexpr const char* kCacheDirEnv = "MULTIBROT_CACHE_DIR";

/// Runs the command line `multibrot <args...>` (args excludes argv[0]).
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace multibrot::cli
