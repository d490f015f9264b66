#pragma once

// The `tal` command line. Exit codes: 0 success, 1 negative verdict of a
// check, 2 usage, parse, contract or format errors, 3 resource budgets.

#include <iosfwd>
#include <string>
#include <vector>

namespace tal::cli {

enum Exit : int { kOk = 0, kNegative = 1, kUsage = 2, kResource = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tal::cli
