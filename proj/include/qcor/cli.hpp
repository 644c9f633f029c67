#pragma once

// Command-line front end: one subcommand per experiment family, seeded and
// with JSON or CSV output.
//
// Exit codes: 0 success, 1 a checked property failed (certificate in the
// output), 2 usage, parse or parameter error.

#include <iosfwd>
#include <string>
#include <vector>

namespace qcor::cli {

const char* version();

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcor::cli
