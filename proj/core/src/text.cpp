#include "kgmasd/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <sstream>

namespace kgmasd::text {

namespace {
bool is_space(unsigned char c) { return std::isspace(c) != 0; }
}  // namespace

std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (unsigned char c : s) {
        if (is_space(c)) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string fold_case(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string canon(std::string_view s) { return fold_case(normalize_ws(s)); }

bool contains_ci(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    const std::string h = fold_case(haystack);
    const std::string n = fold_case(needle);
    return h.find(n) != std::string::npos;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<std::string> split_sentences(std::string_view doc) {
    static const std::string kIdeographicStop = "\xe3\x80\x82";  // U+3002
    std::vector<std::string> sentences;
    std::string cur;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        char c = doc[i];
        cur.push_back(c);
        bool boundary = (c == '.' || c == '!' || c == '?');
        if (!boundary && c == kIdeographicStop[0] && i + 2 < doc.size() + 1 &&
            doc.substr(i, 3) == kIdeographicStop) {
            cur.append(doc.substr(i + 1, 2));
            i += 2;
            boundary = true;
        }
        if (boundary) {
            std::string sent = normalize_ws(cur);
            if (!sent.empty()) sentences.push_back(std::move(sent));
            cur.clear();
        }
    }
    std::string tail = normalize_ws(cur);
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

std::string digest(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace kgmasd::text
