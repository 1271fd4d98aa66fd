#include "kgmasd/knowledge_graph.hpp"

#include <fstream>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "kgmasd/text.hpp"

namespace kgmasd::kg {

using nlohmann::json;

KnowledgeGraph::KnowledgeGraph(const KnowledgeGraph& other) {
    std::shared_lock lk(other.mutex_);
    kind_ = other.kind_;
    triples_ = other.triples_;
    key_to_idx_ = other.key_to_idx_;
    entity_index_ = other.entity_index_;
    entity_names_ = other.entity_names_;
    relation_count_ = other.relation_count_;
}

KnowledgeGraph& KnowledgeGraph::operator=(const KnowledgeGraph& other) {
    if (this == &other) return *this;
    KnowledgeGraph tmp(other);
    *this = std::move(tmp);
    return *this;
}

KnowledgeGraph::KnowledgeGraph(KnowledgeGraph&& other) noexcept {
    kind_ = other.kind_;
    triples_ = std::move(other.triples_);
    key_to_idx_ = std::move(other.key_to_idx_);
    entity_index_ = std::move(other.entity_index_);
    entity_names_ = std::move(other.entity_names_);
    relation_count_ = std::move(other.relation_count_);
}

KnowledgeGraph& KnowledgeGraph::operator=(KnowledgeGraph&& other) noexcept {
    if (this == &other) return *this;
    kind_ = other.kind_;
    triples_ = std::move(other.triples_);
    key_to_idx_ = std::move(other.key_to_idx_);
    entity_index_ = std::move(other.entity_index_);
    entity_names_ = std::move(other.entity_names_);
    relation_count_ = std::move(other.relation_count_);
    return *this;
}

std::size_t KnowledgeGraph::size() const {
    std::shared_lock lk(mutex_);
    return triples_.size();
}

std::vector<Triple> KnowledgeGraph::triples() const {
    std::shared_lock lk(mutex_);
    return triples_;
}

std::size_t KnowledgeGraph::add_one_locked(Triple t) {
    const std::string key = triple_key(t);
    auto it = key_to_idx_.find(key);
    if (it != key_to_idx_.end()) {
        if (t.confidence > triples_[it->second].confidence) triples_[it->second] = std::move(t);
        return 0;
    }
    const std::size_t idx = triples_.size();
    for (const std::string* ent : {&t.head, &t.tail}) {
        const std::string ckey = text::canon(*ent);
        auto [eit, fresh] = entity_index_.try_emplace(ckey);
        eit->second.push_back(idx);
        if (fresh) entity_names_.push_back(text::normalize_ws(*ent));
    }
    ++relation_count_[text::canon(t.relation)];
    key_to_idx_.emplace(key, idx);
    triples_.push_back(std::move(t));
    return 1;
}

std::size_t KnowledgeGraph::add_triples(const std::vector<Triple>& ts) {
    std::vector<Triple> normed;
    normed.reserve(ts.size());
    for (const auto& t : ts) normed.push_back(normalized(t));  // throws before any insert

    std::unique_lock lk(mutex_);
    std::size_t added = 0;
    for (auto& t : normed) added += add_one_locked(std::move(t));
    return added;
}

bool KnowledgeGraph::contains(const Triple& t) const {
    std::shared_lock lk(mutex_);
    return key_to_idx_.count(triple_key(t)) > 0;
}

bool KnowledgeGraph::has_entity(const std::string& entity) const {
    std::shared_lock lk(mutex_);
    return entity_index_.count(text::canon(entity)) > 0;
}

std::vector<std::string> KnowledgeGraph::entities() const {
    std::shared_lock lk(mutex_);
    return entity_names_;
}

std::vector<Triple> KnowledgeGraph::adjacent(const std::string& entity) const {
    std::shared_lock lk(mutex_);
    std::vector<Triple> out;
    auto it = entity_index_.find(text::canon(entity));
    if (it == entity_index_.end()) return out;
    for (std::size_t idx : it->second) out.push_back(triples_[idx]);
    return out;
}

KnowledgeGraph KnowledgeGraph::retrieve_paths(const std::vector<std::string>& seeds,
                                              int max_hops) const {
    if (max_hops < 1) throw std::invalid_argument("retrieve_paths: max_hops must be >= 1");
    std::shared_lock lk(mutex_);

    KnowledgeGraph local(GraphKind::Local);
    std::unordered_set<std::string> visited;
    std::vector<std::string> frontier;
    for (const auto& s : seeds) {
        const std::string key = text::canon(s);
        if (entity_index_.count(key) && visited.insert(key).second) frontier.push_back(key);
    }

    std::unordered_set<std::size_t> collected;
    std::vector<Triple> batch;
    for (int hop = 0; hop < max_hops && !frontier.empty(); ++hop) {
        std::vector<std::string> next;
        for (const auto& ekey : frontier) {
            auto it = entity_index_.find(ekey);
            if (it == entity_index_.end()) continue;
            for (std::size_t idx : it->second) {
                if (!collected.insert(idx).second) continue;
                const Triple& t = triples_[idx];
                batch.push_back(t);
                for (const std::string* other : {&t.head, &t.tail}) {
                    const std::string okey = text::canon(*other);
                    if (visited.insert(okey).second) next.push_back(okey);
                }
            }
        }
        frontier = std::move(next);
    }
    local.add_triples(batch);
    return local;
}

MergeReport KnowledgeGraph::merge_local(const KnowledgeGraph& lhkg) {
    const std::vector<Triple> incoming = lhkg.triples();
    MergeReport report;
    std::unique_lock lk(mutex_);
    for (const auto& raw : incoming) {
        Triple t = normalized(raw);
        const std::string hkey = text::canon(t.head);
        const std::string tkey = text::canon(t.tail);
        const bool head_new = !entity_index_.count(hkey);
        const bool tail_new = !entity_index_.count(tkey) && tkey != hkey;
        const bool rel_new = !relation_count_.count(text::canon(t.relation));
        if (add_one_locked(std::move(t)) > 0) {
            ++report.new_triples;
            if (head_new) ++report.new_entities;
            if (tail_new) ++report.new_entities;
            if (rel_new) ++report.new_relations;
        }
    }
    return report;
}

namespace {
json triple_to_json(const Triple& t) {
    return json{{"head", t.head},
                {"relation", t.relation},
                {"tail", t.tail},
                {"confidence", t.confidence},
                {"provenance",
                 {{"segment_id", t.provenance.segment_id},
                  {"agent_role", t.provenance.agent_role},
                  {"iteration", t.provenance.iteration}}}};
}
}  // namespace

void KnowledgeGraph::save_jsonl(std::ostream& out) const {
    for (const auto& t : triples()) out << triple_to_json(t).dump() << '\n';
}

void KnowledgeGraph::save_jsonl_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    save_jsonl(out);
}

KnowledgeGraph KnowledgeGraph::load_jsonl(std::istream& in, GraphKind kind) {
    KnowledgeGraph kg(kind);
    std::vector<Triple> batch;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("triple JSONL parse error at line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
        Triple t;
        t.head = j.at("head").get<std::string>();
        t.relation = j.at("relation").get<std::string>();
        t.tail = j.at("tail").get<std::string>();
        t.confidence = j.value("confidence", 1.0);
        if (j.contains("provenance")) {
            const json& p = j["provenance"];
            t.provenance.segment_id = p.value("segment_id", "");
            t.provenance.agent_role = p.value("agent_role", "");
            t.provenance.iteration = p.value("iteration", 0);
        }
        batch.push_back(std::move(t));
    }
    kg.add_triples(batch);
    return kg;
}

KnowledgeGraph KnowledgeGraph::load_jsonl_file(const std::string& path, GraphKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    return load_jsonl(in, kind);
}

}  // namespace kgmasd::kg
