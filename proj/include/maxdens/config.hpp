#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace maxdens {

/// Flat key = value text: one pair per line, '#' starts a comment, keys are
/// case-sensitive and a repeated key keeps its last value.
using KeyValues = std::map<std::string, std::string>;

KeyValues read_key_values(std::istream& in);
KeyValues read_key_values_file(const std::string& path);

/// Splits on `sep` and trims whitespace; empty items are dropped.
std::vector<std::string> split_list(std::string_view s, char sep);

std::string trim(std::string_view s);

}  // namespace maxdens
