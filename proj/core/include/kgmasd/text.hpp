#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgmasd::text {

// Strip leading/trailing whitespace and collapse internal runs to one space.
std::string normalize_ws(std::string_view s);

// ASCII case-fold. Non-ASCII bytes pass through unchanged.
std::string fold_case(std::string_view s);

// normalize_ws followed by fold_case; the canonical dedup key form.
std::string canon(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view s, char sep);

// Rule-based sentence splitter on ".", "!", "?", U+3002.
std::vector<std::string> split_sentences(std::string_view doc);

// FNV-1a 64-bit, hex-encoded. Used for prompt digests in traces.
std::string digest(std::string_view s);

}  // namespace kgmasd::text
