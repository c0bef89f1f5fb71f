#pragma once

#include <string>
#include <string_view>

namespace glassmsg::utf8 {

// Decodes UTF-8; each malformed sequence becomes one U+FFFD.
std::u32string decode(std::string_view s);

std::string encode(std::u32string_view s);

inline std::size_t length(std::string_view s) { return decode(s).size(); }

}  // namespace glassmsg::utf8
