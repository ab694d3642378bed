#include "anonnet/text.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

namespace anonnet::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Emoji-designated ranges counted as emoji. Frozen: changing this table
// changes feature values.
constexpr std::array<std::pair<char32_t, char32_t>, 15> kEmojiRanges{{
    {0x231A, 0x231B},    // watch, hourglass
    {0x23E9, 0x23F3},    // media controls
    {0x2600, 0x26FF},    // miscellaneous symbols
    {0x2700, 0x27BF},    // dingbats
    {0x2B50, 0x2B55},    // star, circles
    {0x1F004, 0x1F004},  // mahjong tile
    {0x1F0CF, 0x1F0CF},  // joker
    {0x1F1E6, 0x1F1FF},  // regional indicators (flags)
    {0x1F300, 0x1F5FF},  // symbols and pictographs
    {0x1F600, 0x1F64F},  // emoticons
    {0x1F680, 0x1F6FF},  // transport and map
    {0x1F7E0, 0x1F7EB},  // coloured circles and squares
    {0x1F900, 0x1F9FF},  // supplemental symbols and pictographs
    {0x1FA70, 0x1FAFF},  // symbols and pictographs extended-A
    {0x1F170, 0x1F19A},  // enclosed alphanumeric supplement
}};

}  // namespace

std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  s.toUTF8String(out);
  return out;
}

bool is_valid_utf8(std::string_view bytes) {
  const auto* p = reinterpret_cast<const uint8_t*>(bytes.data());
  const auto len = static_cast<int32_t>(bytes.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* p = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto len = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    out.push_back(c < 0 ? kReplacement : static_cast<char32_t>(c));
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  std::array<uint8_t, 4> buf{};
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf.data(), n, 4, static_cast<UChar32>(cp), error);
  if (error) {
    append_utf8(out, kReplacement);
    return;
  }
  out.append(reinterpret_cast<const char*>(buf.data()), static_cast<std::size_t>(n));
}

std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t c : cps) append_utf8(out, c);
  return out;
}

bool is_upper(char32_t cp) { return u_charType(static_cast<UChar32>(cp)) == U_UPPERCASE_LETTER; }

bool is_lower(char32_t cp) { return u_charType(static_cast<UChar32>(cp)) == U_LOWERCASE_LETTER; }

bool is_alpha(char32_t cp) {
  switch (u_charType(static_cast<UChar32>(cp))) {
    case U_UPPERCASE_LETTER:
    case U_LOWERCASE_LETTER:
    case U_TITLECASE_LETTER:
    case U_MODIFIER_LETTER:
    case U_OTHER_LETTER:
      return true;
    default:
      return false;
  }
}

bool is_digit(char32_t cp) {
  return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

bool is_punct(char32_t cp) { return u_ispunct(static_cast<UChar32>(cp)) != 0; }

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

bool is_alnum(char32_t cp) { return is_alpha(cp) || is_digit(cp); }

bool is_emoji(char32_t cp) {
  for (const auto& [lo, hi] : kEmojiRanges) {
    if (cp >= lo && cp <= hi) return true;
  }
  return false;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const auto len = static_cast<int32_t>(s.size());
  int32_t i = 0;
  int32_t start = -1;
  while (i < len) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(p, i, len, c);
    const bool space = c >= 0 && u_isUWhiteSpace(c);
    if (space) {
      if (start >= 0) {
        out.push_back(s.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(at - start)));
        start = -1;
      }
    } else if (start < 0) {
      start = at;
    }
  }
  if (start >= 0) out.push_back(s.substr(static_cast<std::size_t>(start)));
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // also folds -0
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace anonnet::text
