#include <doctest.h>

#include <string>
#include <vector>

#include "kgmasd/agents.hpp"

using namespace kgmasd;
using agents::CallMeta;
using agents::ScriptedBackend;

namespace {

const std::string kFixtures = KGMASD_FIXTURES_DIR;

ScriptedBackend scripted(std::vector<std::pair<CallMeta, std::string>> entries) {
    return ScriptedBackend(std::move(entries));
}

seg::Segment make_segment() {
    seg::Segment s;
    s.id = "doc-1#0";
    s.source_doc = "doc-1";
    s.sentences = {"Hydrogen sulfide is a colorless gas with a strong odor."};
    s.token_count = 10;
    s.below_min = true;
    return s;
}

kg::Triple make_triple(const std::string& h, const std::string& r, const std::string& t) {
    kg::Triple out;
    out.head = h;
    out.relation = r;
    out.tail = t;
    return out;
}

}  // namespace

TEST_CASE("extract_json_block handles fences, prose, and garbage") {
    CHECK(nlohmann::json::parse(agents::extract_json_block("```json\n{\"a\":1}\n```")) ==
          nlohmann::json{{"a", 1}});
    CHECK(agents::extract_json_block("Sure! Here it is: {\"a\": {\"b\": 2}} done") ==
          "{\"a\": {\"b\": 2}}");
    CHECK(agents::extract_json_block("text {\"s\":\"br{ace\"} more") == "{\"s\":\"br{ace\"}");
    CHECK_THROWS_AS(agents::extract_json_block("no json here"), agents::ProtocolError);
    CHECK_THROWS_AS(agents::extract_json_block("{broken"), agents::ProtocolError);
}

TEST_CASE("scripted backend exact match beats wildcard; miss raises") {
    auto b = scripted({{{"verifier", 1}, "one"}, {{"verifier", -1}, "any"}});
    CHECK(b.chat({}, {"verifier", 1}) == "one");
    CHECK(b.chat({}, {"verifier", 3}) == "any");
    CHECK_THROWS_AS(b.chat({}, {"kg_master", 1}), agents::ProtocolError);
}

TEST_CASE("scripted backend loads from file") {
    auto b = ScriptedBackend::from_file(kFixtures + "/scripted_approve_all.jsonl");
    CHECK(b.chat({}, {"verifier", 4}).find("approved") != std::string::npos);
}

TEST_CASE("kg_master_plan resolves seeds against the gkg") {
    kg::KnowledgeGraph gkg;
    gkg.add_triples({make_triple("Hydrogen sulfide", "class", "industrial gas")});

    auto b = scripted({{{"kg_master", -1},
                        R"({"subqueries":["q1","q2"],"candidate_relations":["is"],)"
                        R"("seed_entities":["hydrogen"]})"}});
    auto plan = agents::kg_master_plan("hydrogen sulfide properties", gkg, b);
    CHECK(plan.subqueries.size() == 2);
    CHECK(plan.candidate_relations == std::vector<std::string>{"is"});
    // matched both by query substring and proposed-mention substring
    CHECK(plan.seed_entities == std::vector<std::string>{"Hydrogen sulfide"});

    auto plan2 = agents::kg_master_plan("unrelated topic", gkg, b);
    // "hydrogen" is a substring of the stored entity, so mention matching still fires
    CHECK(plan2.seed_entities == std::vector<std::string>{"Hydrogen sulfide"});

    auto b2 = scripted({{{"kg_master", -1},
                         R"({"subqueries":[],"candidate_relations":[],"seed_entities":[]})"}});
    auto plan3 = agents::kg_master_plan("unrelated topic", gkg, b2);
    CHECK(plan3.seed_entities.empty());

    CHECK_THROWS_AS(agents::kg_master_plan("  ", gkg, b), std::invalid_argument);
}

TEST_CASE("kg_master_plan retries once on non-JSON replies") {
    int calls = 0;
    class Flaky final : public agents::ChatBackend {
      public:
        explicit Flaky(int& calls) : calls_(calls) {}
        std::string chat(const std::vector<agents::ChatMessage>&, const CallMeta&) override {
            ++calls_;
            if (calls_ == 1) return "sorry, no JSON";
            return R"({"subqueries":[],"candidate_relations":[],"seed_entities":[]})";
        }

      private:
        int& calls_;
    } flaky(calls);
    kg::KnowledgeGraph gkg;
    auto plan = agents::kg_master_plan("q", gkg, flaky);
    CHECK(calls == 2);
}

TEST_CASE("extract_entities dedups and keeps first-mention order") {
    auto b = scripted({{{"entity_extractor", -1},
                        R"({"entities":["Hydrogen sulfide","colorless gas","HYDROGEN SULFIDE",)"
                        R"("  colorless gas "]})"}});
    auto ents = agents::extract_entities(make_segment(), {}, b);
    CHECK(ents == std::vector<std::string>{"Hydrogen sulfide", "colorless gas"});

    auto empty = scripted({{{"entity_extractor", -1}, R"({"entities":[]})"}});
    CHECK(agents::extract_entities(make_segment(), {}, empty).empty());
}

TEST_CASE("extract_entities falls back to semicolon text") {
    auto b = scripted({{{"entity_extractor", -1}, "Hydrogen sulfide; colorless gas"}});
    auto ents = agents::extract_entities(make_segment(), {}, b);
    CHECK(ents == std::vector<std::string>{"Hydrogen sulfide", "colorless gas"});
}

TEST_CASE("extract_relations filters unknown entities") {
    auto b = scripted(
        {{{"relation_extractor", -1},
          R"({"triples":[{"head":"Hydrogen sulfide","relation":"is","tail":"colorless gas"},)"
          R"({"head":"Hydrogen sulfide","relation":"is","tail":"mystery"}]})"}});
    std::vector<std::string> entities{"Hydrogen sulfide", "colorless gas"};
    std::vector<agents::TraceEntry> trace;
    auto triples = agents::extract_relations(make_segment(), entities, {}, b,
                                             agents::PromptSet::defaults(), 1, {}, &trace);
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].tail == "colorless gas");
    CHECK(triples[0].confidence == doctest::Approx(0.5));
    CHECK(triples[0].provenance.segment_id == "doc-1#0");
    REQUIRE(!trace.empty());
    CHECK(trace.back().parsed_output["dropped"] == 1);

    CHECK(agents::extract_relations(make_segment(), {}, {}, b).empty());
}

TEST_CASE("verify_triples: totality, defaults, and rejection reasons") {
    auto triples = std::vector<kg::Triple>{make_triple("a", "r", "b"), make_triple("c", "r", "d")};

    auto all = scripted({{{"verifier", -1}, R"({"default":"approved"})"}});
    auto verdicts = agents::verify_triples(triples, make_segment(), all);
    REQUIRE(verdicts.size() == 2);
    for (const auto& v : verdicts) CHECK(v.decision == agents::Decision::Approved);

    auto mixed = scripted({{{"verifier", -1},
                            R"({"default":"approved","verdicts":[{"index":2,)"
                            R"("decision":"rejected","reason":"tail not in context"}]})"}});
    auto v2 = agents::verify_triples(triples, make_segment(), mixed);
    CHECK(v2[0].decision == agents::Decision::Approved);
    CHECK(v2[1].decision == agents::Decision::Rejected);
    CHECK(v2[1].reason == "tail not in context");

    auto partial = scripted({{{"verifier", -1},
                              R"({"verdicts":[{"index":1,"decision":"approved"}]})"}});
    CHECK_THROWS_AS(agents::verify_triples(triples, make_segment(), partial),
                    agents::ProtocolError);

    auto out_of_range = scripted({{{"verifier", -1},
                                   R"({"verdicts":[{"index":9,"decision":"approved"}]})"}});
    CHECK_THROWS_AS(agents::verify_triples(triples, make_segment(), out_of_range),
                    agents::ProtocolError);

    CHECK_THROWS_AS(agents::verify_triples({}, make_segment(), all), std::invalid_argument);
}

TEST_CASE("run_session: approve-all converges at step 1") {
    auto b = ScriptedBackend::from_file(kFixtures + "/scripted_approve_all.jsonl");
    kg::KnowledgeGraph gkg = kg::KnowledgeGraph::load_jsonl_file(kFixtures + "/gkg.jsonl");
    auto session = agents::run_session("hydrogen sulfide properties", {make_segment()}, gkg, b);
    CHECK(session.status == agents::SessionStatus::Converged);
    CHECK(session.step == 1);
    REQUIRE(session.z.size() == 1);
    CHECK(session.z[0].head == "Hydrogen sulfide");
    CHECK(session.z[0].confidence == doctest::Approx(0.9));
    REQUIRE(session.iterations.size() == 1);
    CHECK(session.iterations[0].approved == 1);
    CHECK(session.iterations[0].rejected == 0);
    CHECK(session.iterations[0].approval_rate == doctest::Approx(1.0));
}

TEST_CASE("run_session: reject-then-approve converges at step 2 with one resubmission") {
    auto b = ScriptedBackend::from_file(kFixtures + "/scripted_reject_then_approve.jsonl");
    kg::KnowledgeGraph gkg = kg::KnowledgeGraph::load_jsonl_file(kFixtures + "/gkg.jsonl");
    auto session = agents::run_session("hydrogen sulfide properties", {make_segment()}, gkg, b);
    CHECK(session.status == agents::SessionStatus::Converged);
    CHECK(session.step == 2);
    REQUIRE(session.iterations.size() == 2);
    CHECK(session.iterations[0].rejected == 1);
    CHECK(session.iterations[1].resubmitted == 1);
    CHECK(session.iterations[1].rejected == 0);
    CHECK(session.z.size() == 1);
    // approval rate non-decreasing when the rejection set shrinks
    CHECK(session.iterations[1].approval_rate >= session.iterations[0].approval_rate);
}

TEST_CASE("run_session: always-reject exhausts with only approved triples in z") {
    auto b = ScriptedBackend::from_file(kFixtures + "/scripted_always_reject.jsonl");
    kg::KnowledgeGraph gkg;
    agents::SessionConfig cfg;
    cfg.max_iterations = 3;
    auto session =
        agents::run_session("hydrogen sulfide properties", {make_segment()}, gkg, b, cfg);
    CHECK(session.status == agents::SessionStatus::Exhausted);
    CHECK(session.step == 3);
    CHECK(session.z.empty());
    for (const auto& s : session.iterations) CHECK(s.approved == 0);
}

TEST_CASE("run_session aborts on transport failure with partial trace") {
    class Dead final : public agents::ChatBackend {
      public:
        std::string chat(const std::vector<agents::ChatMessage>&, const CallMeta&) override {
            throw agents::TransportError("backend gone");
        }
    } dead;
    kg::KnowledgeGraph gkg;
    auto session = agents::run_session("q", {make_segment()}, gkg, dead);
    CHECK(session.status == agents::SessionStatus::Aborted);
    CHECK(session.error == "backend gone");
}

TEST_CASE("session serializes to JSON with trace and stats") {
    auto b = ScriptedBackend::from_file(kFixtures + "/scripted_approve_all.jsonl");
    kg::KnowledgeGraph gkg;
    auto session = agents::run_session("q", {make_segment()}, gkg, b);
    auto j = session.to_json();
    CHECK(j["status"] == "converged");
    CHECK(j["z"].size() == 1);
    CHECK(!j["trace"].empty());
    for (const auto& e : j["trace"]) CHECK(!e["prompt_digest"].get<std::string>().empty());
}

TEST_CASE("prompt templates render placeholders") {
    auto prompts = agents::PromptSet::defaults();
    auto txt = prompts.render(agents::kRoleKgMaster, {{"query", "Q!"}, {"feedback", ""}});
    CHECK(txt.find("Q!") != std::string::npos);
    CHECK(txt.find("{query}") == std::string::npos);
    CHECK_THROWS_AS(prompts.raw("nobody"), std::invalid_argument);
}
