#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dcoh {

/// Runs one `dcoh` command (args excludes the program name) and writes one JSON
/// object per line to out. Returns 0 on success, 1 on invalid input, 2 on a parse
/// error, 3 when a search budget is exhausted.
int run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace dcoh
