#pragma once

#include <string>
#include <vector>

namespace coldmtc::cli {

/// Entry point of the `coldmtc` tool. Returns 0 on success, 1 for
/// configuration errors and 2 for data errors. Messages go to stderr.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace coldmtc::cli
