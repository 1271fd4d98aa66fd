#pragma once

#include <iosfwd>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "kgmasd/triple.hpp"

namespace kgmasd::kg {

enum class GraphKind { Global, Local };

struct MergeReport {
    std::size_t new_triples = 0;
    std::size_t new_entities = 0;
    std::size_t new_relations = 0;
};

// Deduplicated triple store with an entity adjacency index.
// Concurrency contract: many concurrent readers, mutations serialized
// (single writer). Triples are immutable values once stored.
class KnowledgeGraph {
  public:
    explicit KnowledgeGraph(GraphKind kind = GraphKind::Global) : kind_(kind) {}

    KnowledgeGraph(const KnowledgeGraph& other);
    KnowledgeGraph& operator=(const KnowledgeGraph& other);
    KnowledgeGraph(KnowledgeGraph&&) noexcept;
    KnowledgeGraph& operator=(KnowledgeGraph&&) noexcept;

    GraphKind kind() const { return kind_; }
    std::size_t size() const;
    bool empty() const { return size() == 0; }
    std::vector<Triple> triples() const;

    // Inserts after normalization; case-folded duplicates are not re-added
    // but the higher confidence is kept. Returns the number of new keys.
    // Throws std::invalid_argument on a malformed triple (nothing inserted).
    std::size_t add_triples(const std::vector<Triple>& ts);

    bool contains(const Triple& t) const;
    bool has_entity(const std::string& entity) const;

    // Original-cased entity names, first-insertion order.
    std::vector<std::string> entities() const;
    std::vector<Triple> adjacent(const std::string& entity) const;

    // Induced subgraph of triples reachable from any seed within max_hops
    // undirected hops (breadth-first frontier). Unknown seeds contribute
    // nothing. Throws std::invalid_argument when max_hops < 1.
    KnowledgeGraph retrieve_paths(const std::vector<std::string>& seeds, int max_hops) const;

    // Absorbs lhkg via add_triples semantics; counts strictly new keys.
    MergeReport merge_local(const KnowledgeGraph& lhkg);

    // JSONL persistence: one triple object per line, UTF-8, LF endings.
    // Import accepts missing confidence/provenance (defaults 1.0 / empty).
    void save_jsonl(std::ostream& out) const;
    void save_jsonl_file(const std::string& path) const;
    static KnowledgeGraph load_jsonl(std::istream& in, GraphKind kind = GraphKind::Global);
    static KnowledgeGraph load_jsonl_file(const std::string& path,
                                          GraphKind kind = GraphKind::Global);

  private:
    std::size_t add_one_locked(Triple t);

    GraphKind kind_;
    mutable std::shared_mutex mutex_;
    std::vector<Triple> triples_;
    std::unordered_map<std::string, std::size_t> key_to_idx_;
    // canon(entity) -> indices of incident triples
    std::unordered_map<std::string, std::vector<std::size_t>> entity_index_;
    std::vector<std::string> entity_names_;  // original casing, first seen
    std::unordered_map<std::string, std::size_t> relation_count_;
};

}  // namespace kgmasd::kg
