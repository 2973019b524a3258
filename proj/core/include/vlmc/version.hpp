#pragma once

#include <string_view>

namespace vlmc {
inline constexpr std::string_view kVersion = "0.3.0";
}
