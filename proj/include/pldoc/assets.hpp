#pragma once

#include <string_view>

namespace pldoc {

/// The shipped stylesheet, served as /assets/pldoc.css.
std::string_view stylesheet();

} // namespace pldoc
