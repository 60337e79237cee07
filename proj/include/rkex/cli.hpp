#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rkex {

/// Entry point of the `rkex` tool. Returns 0 on success, 1 on protocol or
/// crypto failure, 2 on usage errors.
int cli_dispatch(int argc, char** argv);
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rkex
