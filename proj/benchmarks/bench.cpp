#include <benchmark/benchmark.h>

#include <random>

#include "kgmasd/infotheory.hpp"
#include "kgmasd/knowledge_graph.hpp"
#include "kgmasd/metrics.hpp"
#include "kgmasd/segmenter.hpp"

using namespace kgmasd;

namespace {

seg::Document fuzz_doc(int sentences) {
    std::mt19937_64 rng(1);
    const char* words[] = {"pump", "valve", "motor", "sensor", "relay", "cable"};
    seg::Document doc;
    doc.id = "bench";
    for (int s = 0; s < sentences; ++s) {
        std::string sent;
        for (int w = 0; w < 12; ++w) {
            if (w) sent.push_back(' ');
            sent += words[rng() % 6];
        }
        doc.sentences.push_back(sent);
    }
    return doc;
}

void bm_offline_embed(benchmark::State& state) {
    seg::OfflineHashEmbedder e(384, 1);
    auto doc = fuzz_doc(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(e.embed(doc.sentences));
}
BENCHMARK(bm_offline_embed)->Arg(16)->Arg(64);

void bm_segment(benchmark::State& state) {
    seg::OfflineHashEmbedder e(128, 1);
    auto doc = fuzz_doc(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(seg::segment(doc, e));
}
BENCHMARK(bm_segment)->Arg(32)->Arg(128);

void bm_bleu4(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const char* words[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
    std::vector<std::vector<std::string>> cands, refs;
    for (int i = 0; i < 100; ++i) {
        std::vector<std::string> c, r;
        for (int t = 0; t < 30; ++t) {
            c.push_back(words[rng() % 8]);
            r.push_back(words[rng() % 8]);
        }
        cands.push_back(c);
        refs.push_back(r);
    }
    for (auto _ : state) benchmark::DoNotOptimize(metrics::bleu4(cands, refs));
}
BENCHMARK(bm_bleu4);

void bm_gamma(benchmark::State& state) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> p(4 * 5);
    double total = 0.0;
    for (auto& v : p) total += (v = u(rng));
    for (auto& v : p) v /= total;
    info::DiscreteJoint j(4, 5, p);
    for (auto _ : state) benchmark::DoNotOptimize(info::gamma_index(j));
}
BENCHMARK(bm_gamma);

void bm_retrieve_paths(benchmark::State& state) {
    kg::KnowledgeGraph g;
    std::vector<kg::Triple> batch;
    for (int i = 0; i < 2000; ++i) {
        kg::Triple t;
        t.head = "e" + std::to_string(i % 500);
        t.relation = "r" + std::to_string(i % 7);
        t.tail = "e" + std::to_string((i * 13 + 1) % 500);
        batch.push_back(std::move(t));
    }
    g.add_triples(batch);
    for (auto _ : state) benchmark::DoNotOptimize(g.retrieve_paths({"e1", "e2"}, 2));
}
BENCHMARK(bm_retrieve_paths);

}  // namespace

BENCHMARK_MAIN();
