#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "distopt/core.hpp"

namespace distopt::cli {

/// Runs one command line. Returns 0 on success, 1 on parse or input errors
/// and 2 when a cutting construction fails.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Reads "x y" per line; blank lines and lines starting with '#' are skipped.
std::vector<Point> read_points(const std::string& path);

}  // namespace distopt::cli
