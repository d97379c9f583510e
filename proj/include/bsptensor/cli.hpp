#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bsptensor {

// Entry point behind the command-line binary, callable in-process.
// Exit codes: 0 success, 1 verification or comparison mismatch,
// 2 usage errors and violated preconditions.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bsptensor
