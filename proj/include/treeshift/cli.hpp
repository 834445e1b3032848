#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treeshift::cli {

/// Runs one treeshift invocation (args exclude the program name). Returns the
/// exit code: 0 for status ok or refuted, 1 for a library error, 2 for usage.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace treeshift::cli
