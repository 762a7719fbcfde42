#pragma once

#include <string>
#include <string_view>

namespace hw {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Strict parse of a full string; throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace hw
