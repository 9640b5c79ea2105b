#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kfn::cli {

/// Runs one subcommand; `args` excludes the program name. Exit codes:
/// 0 success, 1 a check or certificate failed (JSON diagnostics on `err`),
/// 2 invalid input. Output files are only written on success.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kfn::cli
