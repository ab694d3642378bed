#pragma once

#include <string>
#include <string_view>
#include <vector>

// UTF-8 and Unicode helpers shared by the lexicon, feature and topic modules.
namespace anonnet::text {

// Full Unicode case folding (e.g. "Straße" -> "strasse"). Invalid UTF-8
// sequences are replaced with U+FFFD.
std::string fold_case(std::string_view utf8);

bool is_valid_utf8(std::string_view bytes);

// Decodes to code points; invalid sequences become U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view cps);
void append_utf8(std::string& out, char32_t cp);

// General-category predicates. Lu/Ll are subsets of the letter categories so
// that upper + lower <= alphabetic always holds.
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
bool is_alpha(char32_t cp);
bool is_digit(char32_t cp);
bool is_punct(char32_t cp);
bool is_space(char32_t cp);
bool is_alnum(char32_t cp);
bool is_emoji(char32_t cp);

// Whitespace-separated tokens, as views into `s`.
std::vector<std::string_view> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

}  // namespace anonnet::text
