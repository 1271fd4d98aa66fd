#include "kgmasd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "kgmasd/text.hpp"

namespace kgmasd::metrics {

std::vector<std::string> eval_tokenize(const std::string& raw) {
    std::istringstream in(text::fold_case(raw));
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

namespace {

using Counter = std::unordered_map<std::string, std::size_t>;

Counter ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
    Counter counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (std::size_t k = 0; k < n; ++k) {
            if (k) key.push_back('\x1f');
            key += tokens[i + k];
        }
        ++counts[key];
    }
    return counts;
}

std::size_t clipped_overlap(const Counter& cand, const Counter& ref) {
    std::size_t match = 0;
    for (const auto& [gram, count] : cand) {
        auto it = ref.find(gram);
        if (it != ref.end()) match += std::min(count, it->second);
    }
    return match;
}

}  // namespace

double bleu4(const std::vector<std::vector<std::string>>& candidates,
             const std::vector<std::vector<std::string>>& references) {
    if (candidates.empty()) throw std::invalid_argument("bleu4: empty candidate list");
    if (candidates.size() != references.size())
        throw std::invalid_argument("bleu4: candidate/reference count mismatch");

    std::size_t match[4] = {0, 0, 0, 0};
    std::size_t total[4] = {0, 0, 0, 0};
    std::size_t cand_len = 0, ref_len = 0;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        cand_len += candidates[i].size();
        ref_len += references[i].size();
        for (std::size_t n = 1; n <= 4; ++n) {
            const Counter c = ngram_counts(candidates[i], n);
            const Counter r = ngram_counts(references[i], n);
            match[n - 1] += clipped_overlap(c, r);
            if (candidates[i].size() >= n) total[n - 1] += candidates[i].size() - n + 1;
        }
    }

    double log_precision_sum = 0.0;
    for (std::size_t n = 0; n < 4; ++n) {
        double num = static_cast<double>(match[n]);
        double den = static_cast<double>(total[n]);
        if (match[n] == 0) {  // smoothing only on zero-match orders
            num += 1.0;
            den += 1.0;
        }
        if (den <= 0.0) return 0.0;  // no n-grams at all
        log_precision_sum += 0.25 * std::log(num / den);
    }

    double bp = 1.0;
    if (cand_len < ref_len && cand_len > 0)
        bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
    if (cand_len == 0) return 0.0;
    return 100.0 * bp * std::exp(log_precision_sum);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference, RougeVariant variant) {
    if (reference.empty()) throw std::invalid_argument("rouge: empty reference");
    RougeScore score;
    if (candidate.empty()) return score;

    std::size_t matches = 0, cand_units = 0, ref_units = 0;
    switch (variant) {
        case RougeVariant::R1:
        case RougeVariant::R2: {
            const std::size_t n = variant == RougeVariant::R1 ? 1 : 2;
            const Counter c = ngram_counts(candidate, n);
            const Counter r = ngram_counts(reference, n);
            matches = clipped_overlap(c, r);
            cand_units = candidate.size() >= n ? candidate.size() - n + 1 : 0;
            ref_units = reference.size() >= n ? reference.size() - n + 1 : 0;
            break;
        }
        case RougeVariant::RL:
            matches = lcs_length(candidate, reference);
            cand_units = candidate.size();
            ref_units = reference.size();
            break;
    }
    if (ref_units == 0 || cand_units == 0) return score;
    score.recall = 100.0 * static_cast<double>(matches) / static_cast<double>(ref_units);
    score.precision = 100.0 * static_cast<double>(matches) / static_cast<double>(cand_units);
    if (score.recall + score.precision > 0.0)
        score.f1 = 2.0 * score.recall * score.precision / (score.recall + score.precision);
    return score;
}

ScoreReport score_corpus(const std::vector<std::string>& candidates,
                         const std::vector<std::string>& references) {
    if (candidates.size() != references.size())
        throw std::invalid_argument("score_corpus: candidate/reference count mismatch");
    ScoreReport report;
    std::vector<std::vector<std::string>> cand_tokens, ref_tokens;
    cand_tokens.reserve(candidates.size());
    ref_tokens.reserve(references.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        cand_tokens.push_back(eval_tokenize(candidates[i]));
        ref_tokens.push_back(eval_tokenize(references[i]));
    }
    report.bleu4 = bleu4(cand_tokens, ref_tokens);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ScoreReport::PerSample ps;
        ps.rouge1_f = rouge(cand_tokens[i], ref_tokens[i], RougeVariant::R1).f1;
        ps.rouge2_f = rouge(cand_tokens[i], ref_tokens[i], RougeVariant::R2).f1;
        ps.rougeL_f = rouge(cand_tokens[i], ref_tokens[i], RougeVariant::RL).f1;
        report.rouge1_f += ps.rouge1_f;
        report.rouge2_f += ps.rouge2_f;
        report.rougeL_f += ps.rougeL_f;
        report.per_sample.push_back(ps);
    }
    const double n = static_cast<double>(candidates.size());
    if (n > 0) {
        report.rouge1_f /= n;
        report.rouge2_f /= n;
        report.rougeL_f /= n;
    }
    return report;
}

}  // namespace kgmasd::metrics
