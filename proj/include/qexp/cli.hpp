#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qexp {

// Parses and executes one command line (without the program name).
// Exit status: 0 success, 1 selftest failure, 2 domain/usage error,
// 3 precision exhausted (partial result emitted, marked inconclusive).
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace qexp
