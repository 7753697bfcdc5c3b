#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace kwnet::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes the scalar value starting at `pos` and advances `pos` past it.
/// Malformed sequences decode to U+FFFD and consume one byte.
char32_t decode(std::string_view text, std::size_t& pos);

void append(std::string& out, char32_t cp);

/// Number of Unicode scalar values; malformed bytes count one each.
std::size_t length(std::string_view text);

bool is_valid(std::string_view text);

/// Replaces malformed sequences with U+FFFD.
std::string sanitize(std::string_view text);

}  // namespace kwnet::utf8
