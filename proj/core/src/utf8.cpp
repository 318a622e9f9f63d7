#include "vscroll/utf8.hpp"

#include <cstdint>

#include "vscroll/error.hpp"

namespace vscroll::utf8 {

namespace {

[[noreturn]] void Malformed(std::size_t offset) {
  throw Error(ErrorCode::kSchemaError,
              "malformed UTF-8 at byte " + std::to_string(offset));
}

}  // namespace

std::u32string Decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<std::uint8_t>(text[i]);
    char32_t cp = 0;
    std::size_t extra = 0;
    char32_t min = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xE0) == 0xC0) {
      cp = lead & 0x1F;
      extra = 1;
      min = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
      cp = lead & 0x0F;
      extra = 2;
      min = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
      cp = lead & 0x07;
      extra = 3;
      min = 0x10000;
    } else {
      Malformed(i);
    }
    if (i + extra >= text.size() && extra != 0) Malformed(i);
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cont = static_cast<std::uint8_t>(text[i + k]);
      if ((cont & 0xC0) != 0x80) Malformed(i + k);
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (extra != 0 && cp < min) Malformed(i);
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) Malformed(i);
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string Encode(char32_t ch) {
  std::string out;
  if (ch < 0x80) {
    out.push_back(static_cast<char>(ch));
  } else if (ch < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (ch >> 6)));
    out.push_back(static_cast<char>(0x80 | (ch & 0x3F)));
  } else if (ch < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (ch >> 12)));
    out.push_back(static_cast<char>(0x80 | ((ch >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (ch & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (ch >> 18)));
    out.push_back(static_cast<char>(0x80 | ((ch >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((ch >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (ch & 0x3F)));
  }
  return out;
}

std::string Encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 2);
  for (char32_t ch : text) out += Encode(ch);
  return out;
}

}  // namespace vscroll::utf8
