#pragma once

#include <string>
#include <string_view>

namespace vscroll::utf8 {

// Strict UTF-8 decoding; throws Error(kSchemaError) on malformed input.
std::u32string Decode(std::string_view text);

std::string Encode(std::u32string_view text);
std::string Encode(char32_t ch);

}  // namespace vscroll::utf8
