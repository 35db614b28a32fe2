#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace finmode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitUsage = 2;

inline constexpr unsigned long long kDefaultSeed = 12345;

// args excludes the program name. A file argument "-" reads from `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace finmode::cli
