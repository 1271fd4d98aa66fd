#pragma once

#include <string>
#include <vector>

namespace kgmasd::metrics {

// Evaluation tokenizer: lowercased whitespace split (recorded in report
// config for comparability).
std::vector<std::string> eval_tokenize(const std::string& text);

// Corpus BLEU with n <= 4, uniform 1/4 weights, clipped counts, brevity
// penalty exp(1 - r/c) for c < r, x100. Add-one smoothing is applied only
// to n-gram orders with zero matches.
double bleu4(const std::vector<std::vector<std::string>>& candidates,
             const std::vector<std::vector<std::string>>& references);

enum class RougeVariant { R1, R2, RL };

struct RougeScore {
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;  // harmonic mean, beta = 1; all x100
};

// R1/R2: clipped unigram/bigram overlap. RL: longest common subsequence.
// Throws std::invalid_argument on an empty reference; an empty candidate
// scores all zeros.
RougeScore rouge(const std::vector<std::string>& candidate,
                 const std::vector<std::string>& reference, RougeVariant variant);

// LCS length; exposed for cross-checks against the n-gram counters.
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct ScoreReport {
    double bleu4 = 0.0;
    double rouge1_f = 0.0;  // arithmetic mean of per-sample F1
    double rouge2_f = 0.0;
    double rougeL_f = 0.0;
    struct PerSample {
        double rouge1_f = 0.0;
        double rouge2_f = 0.0;
        double rougeL_f = 0.0;
    };
    std::vector<PerSample> per_sample;

    static constexpr const char* kTokenizer = "lowercase_whitespace";
    static constexpr const char* kSmoothing = "add_one_on_zero_match_orders";
    static constexpr const char* kRougeAggregation = "mean_per_sample_f1";
};

ScoreReport score_corpus(const std::vector<std::string>& candidates,
                         const std::vector<std::string>& references);

}  // namespace kgmasd::metrics
