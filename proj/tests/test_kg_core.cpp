#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "kgmasd/knowledge_graph.hpp"
#include "kgmasd/text.hpp"
#include "kgmasd/triple.hpp"

using namespace kgmasd;
using kg::KnowledgeGraph;
using kg::Triple;

namespace {
Triple t(const std::string& h, const std::string& r, const std::string& ta, double conf = 1.0) {
    Triple out;
    out.head = h;
    out.relation = r;
    out.tail = ta;
    out.confidence = conf;
    return out;
}

std::set<std::string> keys(const KnowledgeGraph& g) {
    std::set<std::string> out;
    for (const auto& tr : g.triples()) out.insert(kg::triple_key(tr));
    return out;
}
}  // namespace

TEST_CASE("triple normalization and validation") {
    Triple raw = t("  a  b ", "r", "c");
    Triple n = kg::normalized(raw);
    CHECK(n.head == "a b");
    CHECK_THROWS_AS(kg::normalized(t("", "r", "c")), std::invalid_argument);
    CHECK_THROWS_AS(kg::normalized(t("a", "   ", "c")), std::invalid_argument);
    CHECK_THROWS_AS(kg::normalized(t("a", "r", "c", 1.5)), std::invalid_argument);
    CHECK(kg::triple_key(t("A", "R", "B")) == kg::triple_key(t("a", "r", "b")));
}

TEST_CASE("add_triples inserts, dedups, keeps higher confidence") {
    KnowledgeGraph g;
    CHECK(g.add_triples({t("a", "r", "b")}) == 1);
    CHECK(g.size() == 1);

    CHECK(g.add_triples({t("A", "R", "B", 0.9)}) == 0);
    CHECK(g.size() == 1);
    CHECK(g.triples()[0].confidence == doctest::Approx(1.0));  // 0.9 does not beat 1.0

    KnowledgeGraph g2;
    CHECK(g2.add_triples({t("a", "r", "b", 0.5)}) == 1);
    g2.add_triples({t("A", "R", "B", 0.9)});
    CHECK(g2.triples()[0].confidence == doctest::Approx(0.9));

    KnowledgeGraph g3;
    CHECK(g3.add_triples({t("a", "r", "b"), t("a", "r", "b"), t("c", "r2", "d")}) == 2);
    CHECK(g3.size() == 2);
}

TEST_CASE("add_triples rejects malformed batches atomically") {
    KnowledgeGraph g;
    CHECK_THROWS_AS(g.add_triples({t("a", "r", "b"), t("", "r", "c")}), std::invalid_argument);
    CHECK(g.size() == 0);
}

TEST_CASE("add_triples is idempotent") {
    std::vector<Triple> batch{t("a", "r", "b"), t("b", "r", "c"), t("C", "r", "d")};
    KnowledgeGraph g;
    g.add_triples(batch);
    const auto before = keys(g);
    CHECK(g.add_triples(batch) == 0);
    CHECK(keys(g) == before);
}

TEST_CASE("entity index lists exactly the incident triples") {
    KnowledgeGraph g;
    g.add_triples({t("a", "r", "b"), t("b", "r", "c"), t("x", "r", "y")});
    auto adj = g.adjacent("b");
    CHECK(adj.size() == 2);
    CHECK(g.adjacent("nothere").empty());
    CHECK(g.has_entity("B"));
}

TEST_CASE("retrieve_paths BFS over a chain") {
    KnowledgeGraph g;
    g.add_triples({t("a", "r", "b"), t("b", "r", "c"), t("c", "r", "d")});

    auto h1 = g.retrieve_paths({"a"}, 1);
    CHECK(keys(h1) == std::set<std::string>{kg::triple_key(t("a", "r", "b"))});

    auto h3 = g.retrieve_paths({"a"}, 3);
    CHECK(h3.size() == 3);

    CHECK(g.retrieve_paths({"z"}, 2).empty());
    CHECK_THROWS_AS(g.retrieve_paths({"a"}, 0), std::invalid_argument);
    CHECK(h1.kind() == kg::GraphKind::Local);
}

TEST_CASE("retrieve_paths is monotone in hop budget") {
    KnowledgeGraph g;
    g.add_triples({t("a", "r", "b"), t("b", "r", "c"), t("c", "r", "d"), t("d", "r", "e"),
                   t("q", "r", "c"), t("e", "r", "a")});
    for (int h = 1; h <= 4; ++h) {
        auto lo = keys(g.retrieve_paths({"a"}, h));
        auto hi = keys(g.retrieve_paths({"a"}, h + 1));
        CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
    }
}

TEST_CASE("merge_local counts strictly new keys") {
    KnowledgeGraph g, l(kg::GraphKind::Local);
    g.add_triples({t("a", "r", "b"), t("b", "r", "c")});
    l.add_triples({t("x", "r", "y"), t("y", "r", "z"), t("z", "r", "w")});
    auto rep = g.merge_local(l);
    CHECK(rep.new_triples == 3);

    auto rep2 = g.merge_local(l);  // idempotent merge
    CHECK(rep2.new_triples == 0);

    KnowledgeGraph l2(kg::GraphKind::Local);
    l2.add_triples({t("x", "r", "y"), t("p", "r", "q")});  // overlap of exactly 1 key
    CHECK(g.merge_local(l2).new_triples == 1);
}

TEST_CASE("merge then retrieve covers the merged local graph") {
    KnowledgeGraph g, l(kg::GraphKind::Local);
    g.add_triples({t("a", "r", "b")});
    l.add_triples({t("m", "r", "n"), t("n", "r", "o")});
    g.merge_local(l);
    std::vector<std::string> seeds;
    for (const auto& e : l.entities()) seeds.push_back(e);
    auto back = keys(g.retrieve_paths(seeds, 2));
    auto want = keys(l);
    CHECK(std::includes(back.begin(), back.end(), want.begin(), want.end()));
}

TEST_CASE("JSONL round-trip with defaults and line-numbered errors") {
    KnowledgeGraph g;
    Triple a = t("Hydrogen sulfide", "is", "colorless gas", 0.9);
    a.provenance = {"doc-1#0", "relation_extractor", 2};
    g.add_triples({a, t("b", "r", "c")});

    std::ostringstream out;
    g.save_jsonl(out);
    std::istringstream in(out.str());
    auto g2 = KnowledgeGraph::load_jsonl(in);
    CHECK(keys(g2) == keys(g));
    bool found = false;
    for (const auto& tr : g2.triples())
        if (tr.head == "Hydrogen sulfide") {
            found = true;
            CHECK(tr.provenance.segment_id == "doc-1#0");
            CHECK(tr.confidence == doctest::Approx(0.9));
        }
    CHECK(found);

    std::istringstream partial(R"({"head":"a","relation":"r","tail":"b"})" "\n");
    auto g3 = KnowledgeGraph::load_jsonl(partial);
    CHECK(g3.triples()[0].confidence == doctest::Approx(1.0));

    std::istringstream bad("{\"head\":\"a\",\"relation\":\"r\",\"tail\":\"b\"}\nnot json\n");
    try {
        KnowledgeGraph::load_jsonl(bad);
        FAIL("expected parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("distill_triples dedups with order and confidence rules") {
    auto out = kg::distill_triples({t("a", "r", "b", 0.5), t("A", "r", "B", 0.8),
                                    t("c", "r2", "d", 0.6)});
    REQUIRE(out.size() == 2);
    CHECK(out[0].confidence == doctest::Approx(0.8));
    CHECK(out[1].head == "c");
    CHECK(kg::distill_triples({}).empty());
    auto trimmed = kg::distill_triples({t("  a ", "r", "b")});
    CHECK(trimmed[0].head == "a");
}

TEST_CASE("text helpers") {
    CHECK(text::normalize_ws("  a \t b  ") == "a b");
    CHECK(text::fold_case("AbC") == "abc");
    CHECK(text::canon(" A  B ") == "a b");
    CHECK(text::contains_ci("Hydrogen Sulfide is here", "hydrogen sulfide"));
    CHECK_FALSE(text::contains_ci("abc", "xyz"));
    auto parts = text::split("a; b ;c", ';');
    REQUIRE(parts.size() == 3);
    auto sents = text::split_sentences("First one. Second one! Third? Done");
    CHECK(sents.size() == 4);
    CHECK(text::digest("x") == text::digest("x"));
    CHECK(text::digest("x") != text::digest("y"));
}
