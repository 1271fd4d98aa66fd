#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace kgmasd::seg {

// Pluggable token counter; the reference tokenizer is unspecified upstream.
class Tokenizer {
  public:
    virtual ~Tokenizer() = default;
    virtual std::vector<std::string> tokenize(std::string_view s) const = 0;
    virtual std::size_t count(std::string_view s) const { return tokenize(s).size(); }
};

// Maximal alphanumeric runs; each punctuation character is its own token.
class WhitespacePunctTokenizer final : public Tokenizer {
  public:
    std::vector<std::string> tokenize(std::string_view s) const override;
};

std::shared_ptr<const Tokenizer> default_tokenizer();

}  // namespace kgmasd::seg
