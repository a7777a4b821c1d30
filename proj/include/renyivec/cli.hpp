#pragma once

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end. Exit codes: 0 success, 1 a requested verification
// found violations, 2 invalid input (with a machine-readable error JSON on
// standard error).

namespace renyivec::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace renyivec::cli
