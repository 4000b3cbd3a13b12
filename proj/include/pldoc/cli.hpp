#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace pldoc::cli {

/// Runs `pldoc` with `args` (program name excluded). Exit codes: 0 success,
/// 1 lint findings or runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in = std::cin);

} // namespace pldoc::cli
