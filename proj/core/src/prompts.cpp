#include "kgmasd/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kgmasd::agents {

namespace {

const char* kKgMasterPrompt = R"(You are the KG Master of an industrial knowledge-graph extraction team.
You manage knowledge base read operations and plan the extraction.
Decompose the query into focused subqueries, propose candidate relation
names, and list entities likely present in the knowledge base.

Query: {query}
{feedback}
Reply with a JSON object only:
{"subqueries": ["..."], "candidate_relations": ["..."], "seed_entities": ["..."]}
)";

const char* kEntityExtractorPrompt = R"(You are the Entity Extractor. Extract the important entities related to
industry, production, and management from the text fragment below. Keep
the surface form used in the text.

Fragment: {segment}
{feedback}
Reply with a JSON object only:
{"entities": ["..."]}
)";

const char* kRelationExtractorPrompt = R"(You are the Relation Extractor. Identify relationships between the listed
entities that are stated in the fragment. Use only entities from the list
for heads and tails.

Fragment: {segment}
Entities: {entities}
Candidate relations: {relations}
{feedback}
Reply with a JSON object only:
{"triples": [{"head": "...", "relation": "...", "tail": "..."}]}
)";

const char* kKrDistillerPrompt = R"(You are the KR Distiller. Aggregate the candidate triples below into a
clean, deduplicated list, preserving first-occurrence order.

Candidates: {candidates}
Reply with a JSON object only:
{"triples": [{"head": "...", "relation": "...", "tail": "..."}]}
)";

const char* kVerifierPrompt = R"(You are the Verifier. Judge each numbered triple against the fragment.
Approve a triple only when the fragment supports it; otherwise reject it
and give a concrete reason.

Fragment: {segment}
Triples:
{triples}
Reply with a JSON object only:
{"default": "approved", "verdicts": [{"index": 1, "decision": "approved", "confidence": 0.9}]}
Rejected entries must look like {"index": 2, "decision": "rejected", "reason": "..."}.
)";

}  // namespace

PromptSet PromptSet::defaults() {
    PromptSet p;
    p.templates_[kRoleKgMaster] = kKgMasterPrompt;
    p.templates_[kRoleEntityExtractor] = kEntityExtractorPrompt;
    p.templates_[kRoleRelationExtractor] = kRelationExtractorPrompt;
    p.templates_[kRoleKrDistiller] = kKrDistillerPrompt;
    p.templates_[kRoleVerifier] = kVerifierPrompt;
    return p;
}

PromptSet PromptSet::load_dir(const std::string& dir) {
    PromptSet p = defaults();
    for (auto& [role, tmpl] : p.templates_) {
        const std::filesystem::path path = std::filesystem::path(dir) / (role + ".txt");
        std::ifstream in(path, std::ios::binary);
        if (!in) continue;
        std::ostringstream ss;
        ss << in.rdbuf();
        tmpl = ss.str();
    }
    return p;
}

const std::string& PromptSet::raw(const std::string& role) const {
    auto it = templates_.find(role);
    if (it == templates_.end()) throw std::invalid_argument("unknown agent role: " + role);
    return it->second;
}

std::string PromptSet::render(const std::string& role,
                              const std::map<std::string, std::string>& vars) const {
    std::string out = raw(role);
    for (const auto& [name, value] : vars) {
        const std::string needle = "{" + name + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

}  // namespace kgmasd::agents
