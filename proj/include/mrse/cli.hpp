/*
 * cli.hpp
 *
 * Command-line front end. Exit codes: 0 success, 2 input error,
 * 3 solver non-convergence.
 */

#pragma once

#include <string>
#include <vector>

namespace mrse::cli {

int run(int argc, const char *const *argv);

/// Convenience overload for tests; args exclude the program name.
int run(const std::vector<std::string> &args);

} // namespace mrse::cli
