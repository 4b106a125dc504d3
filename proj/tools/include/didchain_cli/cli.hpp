#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace didchain::cli {

// Runs one command line (args excludes the program name). Returns the exit
// status: 0 on success, 1 on a domain error (error name on err), 2 on a
// usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace didchain::cli
