#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "kgmasd/instruction.hpp"
#include "kgmasd/knowledge_graph.hpp"
#include "kgmasd/segmenter.hpp"

namespace kgmasd::data {

struct SplitSpec {
    double train = 0.0;
    double test = 0.0;
    double val = 0.0;
    std::uint64_t seed = 0;

    void validate() const;  // ratios positive, sum to 1 within 1e-9
};

struct SplitResult {
    std::vector<InstructionSample> train;
    std::vector<InstructionSample> test;
    std::vector<InstructionSample> val;
};

// One sample per (triple, supporting segment) pair; a segment supports a
// triple when its text contains both head and tail (case-insensitive).
// Triples with no supporting segment are skipped (count returned via
// skipped, when given).
std::vector<InstructionSample> gen_rte_samples(const kg::KnowledgeGraph& lhkg,
                                               const std::vector<seg::Segment>& segments,
                                               std::size_t* skipped = nullptr);

// One completion sample per triple: the input names head + relation with
// segment context, the output is the held-out tail. Hold-out is always
// the tail. Degenerate triples (tail == head) are emitted with an
// extras["degenerate"] flag.
std::vector<InstructionSample> gen_kgc_samples(const kg::KnowledgeGraph& lhkg,
                                               const std::vector<seg::Segment>& segments,
                                               std::size_t* skipped = nullptr);

// JSONL round-trip. Unknown keys on import land in extras; a bare
// {instruction,input,output} object gets theme=Unlabeled, mode=QA,
// lkg_weight=1.0. Malformed lines raise with the 1-based line number.
void export_jsonl(const std::vector<InstructionSample>& samples, std::ostream& out);
void export_jsonl_file(const std::vector<InstructionSample>& samples, const std::string& path);
std::vector<InstructionSample> import_jsonl(std::istream& in);
std::vector<InstructionSample> import_jsonl_file(const std::string& path);

// Stratified by theme; within each theme, samples are shuffled by seed and
// partitioned at floor(n * cumulative ratio). Deterministic per seed.
SplitResult split_dataset(const std::vector<InstructionSample>& samples, const SplitSpec& spec);

// theme name -> percentage of samples; percentages sum to 100.
std::map<std::string, double> theme_stats(const std::vector<InstructionSample>& samples);

// RFC-4180 CSV with header instruction,input,output,theme,mode,lkg_weight,provenance.
void export_audit_csv(const std::vector<InstructionSample>& samples, std::ostream& out);
void export_audit_csv_file(const std::vector<InstructionSample>& samples,
                           const std::string& path);

// Reference fine-tuning recipe recorded for downstream trainers; this
// project never runs the training itself.
nlohmann::json training_recipe();

}  // namespace kgmasd::data
