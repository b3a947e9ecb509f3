#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace semtex::utf8 {

// Decodes UTF-8; malformed sequences decode to U+FFFD one byte at a time.
std::u32string decode(std::string_view text);

void append(std::string& out, char32_t cp);
std::string encode(char32_t cp);
std::string encode(std::u32string_view text);

// Number of code points.
std::size_t length(std::string_view text);

}  // namespace semtex::utf8
