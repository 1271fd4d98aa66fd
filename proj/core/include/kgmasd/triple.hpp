#pragma once

#include <string>
#include <vector>

namespace kgmasd::kg {

struct Provenance {
    std::string segment_id;
    std::string agent_role;
    int iteration = 0;

    bool operator==(const Provenance&) const = default;
};

// One (head, relation, tail) fact. Fields are stored as given (minus
// leading/trailing/collapsed whitespace); identity for dedup is the
// case-folded key.
struct Triple {
    std::string head;
    std::string relation;
    std::string tail;
    double confidence = 1.0;
    Provenance provenance;

    bool operator==(const Triple&) const = default;
};

// Canonical dedup key: case-folded, whitespace-normalized "head\trelation\ttail".
std::string triple_key(const Triple& t);

// Normalizes whitespace in place and validates invariants.
// Throws std::invalid_argument naming the offending triple when a field is
// empty after normalization or confidence is outside [0,1].
Triple normalized(Triple t);

bool is_valid(const Triple& t);

std::string to_display(const Triple& t);

// Case-folded dedup preserving first-occurrence order; on key collision the
// higher-confidence triple wins (in place).
std::vector<Triple> distill_triples(const std::vector<Triple>& candidates);

}  // namespace kgmasd::kg
