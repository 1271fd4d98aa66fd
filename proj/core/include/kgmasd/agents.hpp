#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kgmasd/chat_backend.hpp"
#include "kgmasd/knowledge_graph.hpp"
#include "kgmasd/prompts.hpp"
#include "kgmasd/segmenter.hpp"
#include "kgmasd/triple.hpp"

namespace kgmasd::agents {

struct Plan {
    std::vector<std::string> subqueries;
    std::vector<std::string> candidate_relations;
    std::vector<std::string> seed_entities;  // resolved against the GKG entity index
};

enum class Decision { Approved, Rejected };

struct Verdict {
    std::string triple_key;
    Decision decision = Decision::Approved;
    std::string reason;
    double confidence = 0.9;
};

enum class SessionStatus { Running, Converged, Exhausted, Aborted };

struct TraceEntry {
    int iteration = 0;
    std::string agent_role;
    std::string prompt_digest;
    nlohmann::json parsed_output;
    std::vector<Verdict> verdicts;
};

struct IterationStats {
    int iteration = 0;
    std::size_t approved = 0;
    std::size_t rejected = 0;
    std::size_t resubmitted = 0;
    double approval_rate = 0.0;
};

struct SessionConfig {
    int max_iterations = 5;
    int hop_limit = 2;
    PromptSet prompts = PromptSet::defaults();
};

// MDP trajectory state: query, context segments, the growing verified
// triple set z, and the full call trace. Strictly sequential per session.
struct ExtractionSession {
    std::string query;
    std::vector<seg::Segment> context;
    std::vector<kg::Triple> z;  // Verifier-approved, deduplicated
    int step = 0;
    int max_iterations = 5;
    std::vector<TraceEntry> trace;
    std::vector<IterationStats> iterations;
    SessionStatus status = SessionStatus::Running;
    std::string error;

    nlohmann::json to_json() const;
};

Plan kg_master_plan(const std::string& query, const kg::KnowledgeGraph& gkg, ChatBackend& backend,
                    const PromptSet& prompts = PromptSet::defaults(), int iteration = 1,
                    const std::string& feedback = {}, std::vector<TraceEntry>* trace = nullptr);

std::vector<std::string> extract_entities(const seg::Segment& segment, const Plan& plan,
                                          ChatBackend& backend,
                                          const PromptSet& prompts = PromptSet::defaults(),
                                          int iteration = 1, const std::string& feedback = {},
                                          std::vector<TraceEntry>* trace = nullptr);

// Candidates referencing entities outside `entities` are dropped (recorded
// in the trace entry), not fatal. Empty entity list short-circuits to {}.
std::vector<kg::Triple> extract_relations(const seg::Segment& segment,
                                          const std::vector<std::string>& entities,
                                          const Plan& plan, ChatBackend& backend,
                                          const PromptSet& prompts = PromptSet::defaults(),
                                          int iteration = 1, const std::string& feedback = {},
                                          std::vector<TraceEntry>* trace = nullptr);

// Exactly one verdict per triple, aligned by index. Approved triples get
// the verifier-reported confidence (0.9 when unreported).
std::vector<Verdict> verify_triples(const std::vector<kg::Triple>& triples,
                                    const seg::Segment& context, ChatBackend& backend,
                                    const PromptSet& prompts = PromptSet::defaults(),
                                    int iteration = 1,
                                    std::vector<TraceEntry>* trace = nullptr);

// Bounded verifier loop: plan -> retrieve paths -> per segment extract /
// distill / verify. Rejected triples are resubmitted next iteration with
// the verdict reasons appended to the prompts. Terminates Converged when
// an iteration ends with zero rejections, Exhausted at max_iterations, or
// Aborted on backend failure (partial trace preserved).
ExtractionSession run_session(const std::string& query, const std::vector<seg::Segment>& segments,
                              const kg::KnowledgeGraph& gkg, ChatBackend& backend,
                              const SessionConfig& cfg = {});

}  // namespace kgmasd::agents
