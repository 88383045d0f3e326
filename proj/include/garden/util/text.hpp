#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace garden::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
// Last `max_chars` characters of `s`, prefixed with "..." when cut.
std::string tail(std::string_view s, std::size_t max_chars);
std::string excerpt(std::string_view s, std::size_t max_chars);

}  // namespace garden::text
