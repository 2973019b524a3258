#pragma once

#include <string>
#include <string_view>

#include "vlmc/chain_law.hpp"

namespace vlmc {

/// Sample text: '#' lines are comments, '0'/'1' are symbols, line breaks are
/// ignored, anything else is a FormatError.
SamplePath parse_sample(std::string_view text);

/// One '#' header line (omitted when empty), the symbols, one trailing newline.
std::string format_sample(const SamplePath& path, std::string_view header);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace vlmc
