#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace iqml::cli {

/// Runs one command. `args` excludes the program name. Returns 0 for an
/// affirmative verdict, 1 for a negative one, and 2 on any error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace iqml::cli
