#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hcn::data {

inline constexpr std::size_t kFontRows = 7;
inline constexpr std::size_t kFontCols = 5;

/// Upper-case A-Z in a 5x7 pixel font, rows of '#' and '.'.
/// Throws std::invalid_argument for other characters.
const std::vector<std::string>& font_glyph(char c);

}  // namespace hcn::data
