#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the segmenter, the stub scorers and the
// benchmark metrics.
namespace faithsum::text {

bool is_space(char c);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

// Lowercased maximal runs of word characters. ASCII letters and digits are
// word characters, as is every byte >= 0x80 so UTF-8 words stay whole.
std::vector<std::string> word_tokens(std::string_view s);

// Whitespace-delimited tokens, untouched.
std::vector<std::string_view> whitespace_tokens(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool ends_with_terminal(std::string_view s);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view s);

}  // namespace faithsum::text
