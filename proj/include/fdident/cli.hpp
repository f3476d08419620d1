#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdident {

// Full command-line front end; args excludes the program name. Returns the
// process exit code: 0 success, 1 config/usage error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fdident
