#include "kgmasd/agents.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "kgmasd/text.hpp"

namespace kgmasd::agents {

using nlohmann::json;

namespace {

// One repair retry when the reply holds no parseable JSON.
json chat_json(ChatBackend& backend, const std::string& prompt, const CallMeta& meta,
               std::vector<TraceEntry>* trace) {
    std::vector<ChatMessage> messages{{"user", prompt}};
    std::string reply = backend.chat(messages, meta);
    json parsed;
    try {
        parsed = json::parse(extract_json_block(reply));
    } catch (const ProtocolError&) {
        messages.push_back({"assistant", reply});
        messages.push_back(
            {"user", "Your previous reply was not valid JSON. Reply with only the JSON object."});
        reply = backend.chat(messages, meta);
        parsed = json::parse(extract_json_block(reply));  // second failure propagates
    }
    if (trace) {
        TraceEntry e;
        e.iteration = meta.iteration;
        e.agent_role = meta.agent_role;
        e.prompt_digest = text::digest(prompt);
        e.parsed_output = parsed;
        trace->push_back(std::move(e));
    }
    return parsed;
}

std::vector<std::string> string_list(const json& j, const char* field) {
    std::vector<std::string> out;
    if (!j.contains(field)) return out;
    for (const auto& v : j[field])
        if (v.is_string()) out.push_back(v.get<std::string>());
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string feedback_block(const std::string& feedback) {
    if (feedback.empty()) return "";
    return "Verifier feedback on previously rejected triples:\n" + feedback + "\n";
}

}  // namespace

Plan kg_master_plan(const std::string& query, const kg::KnowledgeGraph& gkg, ChatBackend& backend,
                    const PromptSet& prompts, int iteration, const std::string& feedback,
                    std::vector<TraceEntry>* trace) {
    if (text::normalize_ws(query).empty())
        throw std::invalid_argument("kg_master_plan: empty query");

    const std::string prompt = prompts.render(
        kRoleKgMaster, {{"query", query}, {"feedback", feedback_block(feedback)}});
    const json parsed = chat_json(backend, prompt, {kRoleKgMaster, iteration}, trace);

    Plan plan;
    plan.subqueries = string_list(parsed, "subqueries");
    plan.candidate_relations = string_list(parsed, "candidate_relations");

    // Resolve seeds against the GKG: an entity is a seed when its folded
    // form appears in the query, or matches a backend-proposed mention
    // exactly or as a substring either way.
    const std::vector<std::string> proposed = string_list(parsed, "seed_entities");
    const std::string cquery = text::canon(query);
    for (const auto& entity : gkg.entities()) {
        const std::string centity = text::canon(entity);
        bool hit = cquery.find(centity) != std::string::npos;
        for (const auto& p : proposed) {
            if (hit) break;
            const std::string cp = text::canon(p);
            hit = centity == cp || centity.find(cp) != std::string::npos ||
                  cp.find(centity) != std::string::npos;
        }
        if (hit) plan.seed_entities.push_back(entity);
    }
    return plan;
}

std::vector<std::string> extract_entities(const seg::Segment& segment, const Plan& plan,
                                          ChatBackend& backend, const PromptSet& prompts,
                                          int iteration, const std::string& feedback,
                                          std::vector<TraceEntry>* trace) {
    const std::string prompt = prompts.render(
        kRoleEntityExtractor,
        {{"segment", segment.joined_text()}, {"feedback", feedback_block(feedback)}});
    const CallMeta meta{kRoleEntityExtractor, iteration};

    std::vector<std::string> raw;
    try {
        const json parsed = chat_json(backend, prompt, meta, trace);
        raw = string_list(parsed, "entities");
        if (parsed.contains("entities") && parsed["entities"].is_string())
            raw = text::split(parsed["entities"].get<std::string>(), ';');
    } catch (const ProtocolError&) {
        // Plain-text fallback: semicolon-separated entity list.
        const std::string reply = backend.chat({{"user", prompt}}, meta);
        raw = text::split(reply, ';');
        if (trace) {
            TraceEntry e;
            e.iteration = iteration;
            e.agent_role = kRoleEntityExtractor;
            e.prompt_digest = text::digest(prompt);
            e.parsed_output = json{{"entities_text", reply}};
            trace->push_back(std::move(e));
        }
    }

    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& r : raw) {
        const std::string e = text::normalize_ws(r);
        if (e.empty()) continue;
        if (seen.insert(text::fold_case(e)).second) out.push_back(e);
    }
    return out;
}

std::vector<kg::Triple> extract_relations(const seg::Segment& segment,
                                          const std::vector<std::string>& entities,
                                          const Plan& plan, ChatBackend& backend,
                                          const PromptSet& prompts, int iteration,
                                          const std::string& feedback,
                                          std::vector<TraceEntry>* trace) {
    if (entities.empty()) return {};

    const std::string prompt =
        prompts.render(kRoleRelationExtractor, {{"segment", segment.joined_text()},
                                                {"entities", join(entities, "; ")},
                                                {"relations", join(plan.candidate_relations, "; ")},
                                                {"feedback", feedback_block(feedback)}});
    const json parsed = chat_json(backend, prompt, {kRoleRelationExtractor, iteration}, trace);

    std::unordered_set<std::string> known;
    for (const auto& e : entities) known.insert(text::canon(e));

    std::vector<kg::Triple> out;
    std::size_t dropped = 0;
    if (parsed.contains("triples")) {
        for (const auto& tj : parsed["triples"]) {
            kg::Triple t;
            t.head = tj.value("head", "");
            t.relation = tj.value("relation", "");
            t.tail = tj.value("tail", "");
            t.confidence = 0.5;  // until verified
            t.provenance = {segment.id, kRoleRelationExtractor, iteration};
            if (!kg::is_valid(t) || !known.count(text::canon(t.head)) ||
                !known.count(text::canon(t.tail))) {
                ++dropped;
                continue;
            }
            out.push_back(std::move(t));
        }
    }
    if (trace && !trace->empty() && dropped > 0) trace->back().parsed_output["dropped"] = dropped;
    return out;
}

std::vector<Verdict> verify_triples(const std::vector<kg::Triple>& triples,
                                    const seg::Segment& context, ChatBackend& backend,
                                    const PromptSet& prompts, int iteration,
                                    std::vector<TraceEntry>* trace) {
    if (triples.empty()) throw std::invalid_argument("verify_triples: empty triple list");

    std::string listing;
    for (std::size_t i = 0; i < triples.size(); ++i)
        listing += std::to_string(i + 1) + ". " + kg::to_display(triples[i]) + "\n";

    const std::string prompt = prompts.render(
        kRoleVerifier, {{"segment", context.joined_text()}, {"triples", listing}});
    const json parsed = chat_json(backend, prompt, {kRoleVerifier, iteration}, trace);

    std::optional<Decision> fallback;
    if (parsed.contains("default")) {
        const std::string d = parsed["default"].get<std::string>();
        fallback = (d == "rejected" || d == "reject") ? Decision::Rejected : Decision::Approved;
    }

    std::vector<std::optional<Verdict>> slots(triples.size());
    if (parsed.contains("verdicts")) {
        for (const auto& vj : parsed["verdicts"]) {
            const int idx = vj.value("index", 0);
            if (idx < 1 || idx > static_cast<int>(triples.size()))
                throw ProtocolError("verdict index out of range: " + std::to_string(idx),
                                    parsed.dump());
            Verdict v;
            v.triple_key = kg::triple_key(triples[static_cast<std::size_t>(idx - 1)]);
            const std::string d = vj.value("decision", "approved");
            v.decision =
                (d == "rejected" || d == "reject") ? Decision::Rejected : Decision::Approved;
            v.reason = vj.value("reason", "");
            if (v.decision == Decision::Rejected && v.reason.empty()) v.reason = "unspecified";
            v.confidence = vj.value("confidence", 0.9);
            slots[static_cast<std::size_t>(idx - 1)] = std::move(v);
        }
    }

    std::vector<Verdict> out;
    out.reserve(triples.size());
    for (std::size_t i = 0; i < triples.size(); ++i) {
        if (slots[i]) {
            out.push_back(*slots[i]);
            continue;
        }
        if (!fallback)
            throw ProtocolError("verifier reply misses verdict " + std::to_string(i + 1) +
                                    " and declares no default",
                                parsed.dump());
        Verdict v;
        v.triple_key = kg::triple_key(triples[i]);
        v.decision = *fallback;
        if (v.decision == Decision::Rejected) v.reason = "rejected by default";
        out.push_back(std::move(v));
    }
    if (trace && !trace->empty()) trace->back().verdicts = out;
    return out;
}

ExtractionSession run_session(const std::string& query, const std::vector<seg::Segment>& segments,
                              const kg::KnowledgeGraph& gkg, ChatBackend& backend,
                              const SessionConfig& cfg) {
    if (cfg.max_iterations < 1)
        throw std::invalid_argument("run_session: max_iterations must be >= 1");

    ExtractionSession session;
    session.query = query;
    session.context = segments;
    session.max_iterations = cfg.max_iterations;

    std::unordered_map<std::string, std::size_t> z_index;  // key -> index in z
    // segment id -> rejected triples carried into the next iteration
    std::unordered_map<std::string, std::vector<kg::Triple>> pending;
    std::string feedback;

    try {
        for (int t = 1; t <= cfg.max_iterations; ++t) {
            IterationStats stats;
            stats.iteration = t;
            for (const auto& [_, v] : pending) stats.resubmitted += v.size();

            const Plan plan = kg_master_plan(query, gkg, backend, cfg.prompts, t, feedback,
                                             &session.trace);
            const kg::KnowledgeGraph lhkg =
                plan.seed_entities.empty()
                    ? kg::KnowledgeGraph(kg::GraphKind::Local)
                    : gkg.retrieve_paths(plan.seed_entities, cfg.hop_limit);
            (void)lhkg;  // retrieval primes context; triples flow through the verifier

            std::unordered_map<std::string, std::vector<kg::Triple>> next_pending;
            std::string next_feedback;

            for (const auto& segment : segments) {
                const auto entities = extract_entities(segment, plan, backend, cfg.prompts, t,
                                                       feedback, &session.trace);
                auto candidates = extract_relations(segment, entities, plan, backend, cfg.prompts,
                                                    t, feedback, &session.trace);
                if (auto it = pending.find(segment.id); it != pending.end())
                    candidates.insert(candidates.end(), it->second.begin(), it->second.end());

                const auto distilled = kg::distill_triples(candidates);
                if (distilled.empty()) continue;

                const auto verdicts =
                    verify_triples(distilled, segment, backend, cfg.prompts, t, &session.trace);
                for (std::size_t i = 0; i < distilled.size(); ++i) {
                    kg::Triple triple = distilled[i];
                    const Verdict& v = verdicts[i];
                    if (v.decision == Decision::Approved) {
                        ++stats.approved;
                        triple.confidence = v.confidence;
                        const std::string key = kg::triple_key(triple);
                        auto [it, fresh] = z_index.emplace(key, session.z.size());
                        if (fresh)
                            session.z.push_back(std::move(triple));
                        else
                            session.z[it->second] = std::move(triple);  // approved revision
                    } else {
                        ++stats.rejected;
                        next_pending[segment.id].push_back(triple);
                        next_feedback +=
                            kg::to_display(triple) + " rejected: " + v.reason + "\n";
                    }
                }
            }

            const std::size_t total = stats.approved + stats.rejected;
            stats.approval_rate = total ? static_cast<double>(stats.approved) / total : 1.0;
            session.iterations.push_back(stats);
            session.step = t;

            if (stats.rejected == 0) {
                session.status = SessionStatus::Converged;
                return session;
            }
            pending = std::move(next_pending);
            feedback = std::move(next_feedback);
        }
        session.status = SessionStatus::Exhausted;
    } catch (const TransportError& e) {
        session.status = SessionStatus::Aborted;
        session.error = e.what();
    }
    return session;
}

namespace {
const char* status_name(SessionStatus s) {
    switch (s) {
        case SessionStatus::Running: return "running";
        case SessionStatus::Converged: return "converged";
        case SessionStatus::Exhausted: return "exhausted";
        case SessionStatus::Aborted: return "aborted";
    }
    return "unknown";
}
}  // namespace

json ExtractionSession::to_json() const {
    json jz = json::array();
    for (const auto& t : z)
        jz.push_back({{"head", t.head},
                      {"relation", t.relation},
                      {"tail", t.tail},
                      {"confidence", t.confidence},
                      {"provenance",
                       {{"segment_id", t.provenance.segment_id},
                        {"agent_role", t.provenance.agent_role},
                        {"iteration", t.provenance.iteration}}}});
    json jtrace = json::array();
    for (const auto& e : trace) {
        json verdicts = json::array();
        for (const auto& v : e.verdicts)
            verdicts.push_back({{"triple_key", v.triple_key},
                                {"decision", v.decision == Decision::Approved ? "approved"
                                                                              : "rejected"},
                                {"reason", v.reason},
                                {"confidence", v.confidence}});
        jtrace.push_back({{"iteration", e.iteration},
                          {"agent_role", e.agent_role},
                          {"prompt_digest", e.prompt_digest},
                          {"parsed_output", e.parsed_output},
                          {"verdicts", verdicts}});
    }
    json jiters = json::array();
    for (const auto& s : iterations)
        jiters.push_back({{"iteration", s.iteration},
                          {"approved", s.approved},
                          {"rejected", s.rejected},
                          {"resubmitted", s.resubmitted},
                          {"approval_rate", s.approval_rate}});
    return json{{"query", query},       {"step", step},
                {"max_iterations", max_iterations}, {"status", status_name(status)},
                {"error", error},       {"z", jz},
                {"iterations", jiters}, {"trace", jtrace}};
}

}  // namespace kgmasd::agents
