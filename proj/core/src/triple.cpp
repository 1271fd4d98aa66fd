#include "kgmasd/triple.hpp"

#include <stdexcept>
#include <unordered_map>

#include "kgmasd/text.hpp"

namespace kgmasd::kg {

std::string triple_key(const Triple& t) {
    return text::canon(t.head) + '\t' + text::canon(t.relation) + '\t' + text::canon(t.tail);
}

std::string to_display(const Triple& t) {
    return "(" + t.head + ", " + t.relation + ", " + t.tail + ")";
}

bool is_valid(const Triple& t) {
    return !text::normalize_ws(t.head).empty() && !text::normalize_ws(t.relation).empty() &&
           !text::normalize_ws(t.tail).empty() && t.confidence >= 0.0 && t.confidence <= 1.0;
}

Triple normalized(Triple t) {
    t.head = text::normalize_ws(t.head);
    t.relation = text::normalize_ws(t.relation);
    t.tail = text::normalize_ws(t.tail);
    if (t.head.empty() || t.relation.empty() || t.tail.empty())
        throw std::invalid_argument("malformed triple (empty field): " + to_display(t));
    if (t.confidence < 0.0 || t.confidence > 1.0)
        throw std::invalid_argument("confidence outside [0,1]: " + to_display(t));
    return t;
}

std::vector<Triple> distill_triples(const std::vector<Triple>& candidates) {
    std::vector<Triple> out;
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& c : candidates) {
        Triple t = normalized(c);
        const std::string key = triple_key(t);
        auto [it, inserted] = seen.emplace(key, out.size());
        if (inserted) {
            out.push_back(std::move(t));
        } else if (t.confidence > out[it->second].confidence) {
            out[it->second] = std::move(t);
        }
    }
    return out;
}

}  // namespace kgmasd::kg
