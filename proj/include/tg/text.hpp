#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tg {

// Shortest decimal text that parses back to exactly `x`; "nan" / "inf" / "-inf" for
// non-finite values.
std::string format_real(double x);

std::vector<std::string_view> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text);

}  // namespace tg
