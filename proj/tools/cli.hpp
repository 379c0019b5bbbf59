#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qtaut/int_matrix.hpp"

namespace qtaut::cli {

enum ExitCode : int { ok = 0, invalid_input = 1, consistency_failure = 2, resource_exhausted = 3 };

/// Runs `body`, mapping library exceptions to exit codes and reporting
/// them on `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

/// Entry point shared by the executable and the tests; args exclude argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a b; c d" -> 2x2. Throws InvalidInput on ragged or non-integer input.
IntMatrix parse_matrix(const std::string& text);
IntVector parse_vector(const std::string& text);

}  // namespace qtaut::cli
