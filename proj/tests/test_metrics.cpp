#include <doctest.h>

#include <algorithm>
#include <random>

#include "kgmasd/metrics.hpp"

using namespace kgmasd::metrics;

namespace {
std::vector<std::string> toks(const std::string& s) { return eval_tokenize(s); }
}  // namespace

TEST_CASE("evaluation tokenizer lowercases and splits on whitespace") {
    CHECK(toks("Hello  World\tX") == std::vector<std::string>{"hello", "world", "x"});
    CHECK(toks("").empty());
}

TEST_CASE("BLEU identity and hand case") {
    CHECK(bleu4({toks("a b c d e")}, {toks("a b c d e")}) == doctest::Approx(100.0).epsilon(1e-9));
    // all precisions 1, BP = exp(1 - 5/4)
    CHECK(bleu4({toks("a b c d")}, {toks("a b c d e")}) == doctest::Approx(77.880).epsilon(1e-4));
}

TEST_CASE("BLEU smoothing keeps zero-overlap scores positive") {
    const double s = bleu4({toks("p q r s t")}, {toks("a b c d e")});
    CHECK(s > 0.0);
    CHECK(s < 30.0);  // smoothing floor, far from a real match
}

TEST_CASE("BLEU validates input arity") {
    CHECK_THROWS_AS(bleu4({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(bleu4({toks("a")}, {toks("a"), toks("b")}), std::invalid_argument);
}

TEST_CASE("BLEU clipping: repeated candidate tokens do not inflate precision") {
    const double repeated = bleu4({toks("the the the the")}, {toks("the cat sat down")});
    const double honest = bleu4({toks("the cat sat down")}, {toks("the cat sat down")});
    CHECK(repeated < honest);
}

TEST_CASE("shuffling a candidate never beats identity") {
    std::mt19937_64 rng(3);
    std::vector<std::string> ref = toks("one two three four five six");
    const double ident = bleu4({ref}, {ref});
    std::vector<std::string> cand = ref;
    for (int trial = 0; trial < 20; ++trial) {
        for (std::size_t i = cand.size(); i > 1; --i)
            std::swap(cand[i - 1], cand[rng() % i]);
        CHECK(bleu4({cand}, {ref}) <= ident + 1e-9);
    }
}

TEST_CASE("LCS length and its substring lower bound") {
    CHECK(lcs_length(toks("a b c"), toks("a c b")) == 2);
    CHECK(lcs_length({}, toks("a")) == 0);

    std::mt19937_64 rng(17);
    const char* alpha[] = {"a", "b", "c"};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> x, y;
        for (std::size_t i = 0; i < 3 + rng() % 8; ++i) x.push_back(alpha[rng() % 3]);
        for (std::size_t i = 0; i < 3 + rng() % 8; ++i) y.push_back(alpha[rng() % 3]);
        // longest common contiguous substring, brute force
        std::size_t best = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) {
                std::size_t k = 0;
                while (i + k < x.size() && j + k < y.size() && x[i + k] == y[j + k]) ++k;
                best = std::max(best, k);
            }
        CHECK(lcs_length(x, y) >= best);
    }
}

TEST_CASE("ROUGE hand cases") {
    for (auto v : {RougeVariant::R1, RougeVariant::R2, RougeVariant::RL}) {
        auto s = rouge(toks("a b c d"), toks("a b c d"), v);
        CHECK(s.f1 == doctest::Approx(100.0).epsilon(1e-9));
    }
    auto rl = rouge(toks("a b c"), toks("a c b"), RougeVariant::RL);
    CHECK(rl.f1 == doctest::Approx(66.667).epsilon(1e-4));
    CHECK(rl.recall == doctest::Approx(200.0 / 3.0));

    auto r1 = rouge(toks("x y"), toks("a b"), RougeVariant::R1);
    CHECK(r1.f1 == doctest::Approx(0.0));

    CHECK_THROWS_AS(rouge(toks("a"), {}, RougeVariant::R1), std::invalid_argument);
    auto empty = rouge({}, toks("a b"), RougeVariant::R2);
    CHECK(empty.f1 == 0.0);
}

TEST_CASE("score report aggregates as documented") {
    std::vector<std::string> cand{"a b c d", "x y"};
    std::vector<std::string> ref{"a b c d", "x y"};
    auto report = score_corpus(cand, ref);
    CHECK(report.bleu4 == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(report.per_sample.size() == 2);
    double mean = 0.0;
    for (const auto& ps : report.per_sample) mean += ps.rougeL_f;
    CHECK(report.rougeL_f == doctest::Approx(mean / 2.0));
    CHECK_THROWS_AS(score_corpus({"a"}, {}), std::invalid_argument);

    // ranges
    auto rough = score_corpus({"some words here", "b a"}, {"entirely different tokens", "a b"});
    for (double v : {rough.bleu4, rough.rouge1_f, rough.rouge2_f, rough.rougeL_f}) {
        CHECK(v >= 0.0);
        CHECK(v <= 100.0);
    }
}
