#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vdc {

// Exit codes: 0 success, 1 validation failure, 2 usage error.
int cli_main(int argc, char** argv);

// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vdc
