#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace chialvo {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitNumeric = 3, kExitDiverged = 4 };

// args excludes the program name. Tables go to --out (sidecars next to it) or to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// returns the data lines of a CSV text (everything that is not a '#' line)
std::string data_section(const std::string& csv);

}  // namespace chialvo
