#include "kgmasd/tokenizer.hpp"

#include <cctype>

namespace kgmasd::seg {

std::vector<std::string> WhitespacePunctTokenizer::tokenize(std::string_view s) const {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    };
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            flush();
        } else if (std::isalnum(c) || c >= 0x80) {
            cur.push_back(static_cast<char>(c));
        } else {
            flush();
            tokens.emplace_back(1, static_cast<char>(c));
        }
    }
    flush();
    return tokens;
}

std::shared_ptr<const Tokenizer> default_tokenizer() {
    static auto instance = std::make_shared<const WhitespacePunctTokenizer>();
    return instance;
}

}  // namespace kgmasd::seg
