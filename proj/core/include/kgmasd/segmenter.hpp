#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "kgmasd/embedding.hpp"
#include "kgmasd/tokenizer.hpp"

namespace kgmasd::seg {

struct Document {
    std::string id;
    std::vector<std::string> sentences;
};

struct Segment {
    std::string id;
    std::vector<std::string> sentences;
    std::size_t token_count = 0;
    std::string source_doc;
    bool below_min = false;

    std::string joined_text() const;
};

struct SegmenterConfig {
    double threshold = 0.5;
    int window = 8;
    int min_sentences = 2;
    std::size_t max_tokens = 512;
    bool merge_singletons = true;
    std::shared_ptr<const Tokenizer> tokenizer = default_tokenizer();
};

// Greedy merge pass: a candidate sentence joins the open segment when its
// max cosine similarity to the trailing window of already-accepted
// sentences clears the threshold and the token cap allows. A final pass
// folds singleton segments into the adjacent segment with the higher
// boundary similarity when the cap allows; otherwise they keep the
// below_min flag. Sentence order is preserved exactly.
//
// Sentences are never re-embedded after merging. A single sentence longer
// than max_tokens becomes its own (oversized) segment; callers should
// pre-split such inputs.
std::vector<Segment> segment(const Document& doc, EmbeddingProvider& provider,
                             const SegmenterConfig& cfg = {});

// JSONL persistence: {"id","source_doc","sentences":[...],"token_count","flags":[...]}.
void save_segments_jsonl(const std::vector<Segment>& segments, std::ostream& out);
void save_segments_jsonl_file(const std::vector<Segment>& segments, const std::string& path);
std::vector<Segment> load_segments_jsonl(std::istream& in);
std::vector<Segment> load_segments_jsonl_file(const std::string& path);

// Documents persist as JSONL {"id","text"} or {"id","sentences":[...]}.
std::vector<Document> load_documents_jsonl_file(const std::string& path);

}  // namespace kgmasd::seg
