#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fourjj::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Entry point of the fourjj tool; args excludes the program name. Data goes to
// `out` unless the config names an output file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fourjj::cli
