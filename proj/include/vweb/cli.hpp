#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vweb {

// Exit codes: 0 success, 1 mismatch or failed check, 2 usage or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace vweb
