#include "kgmasd/segmenter.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kgmasd/text.hpp"

namespace kgmasd::seg {

using nlohmann::json;

std::string Segment::joined_text() const {
    std::string out;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i) out.push_back(' ');
        out += sentences[i];
    }
    return out;
}

namespace {

struct OpenSegment {
    std::vector<std::size_t> idx;  // sentence indices into the document
    std::size_t tokens = 0;
};

double window_similarity(const std::vector<std::vector<float>>& emb, const OpenSegment& seg,
                         std::size_t cand, int window) {
    double best = -1.0;
    const std::size_t n = seg.idx.size();
    const std::size_t lo = n > static_cast<std::size_t>(window) ? n - window : 0;
    for (std::size_t j = lo; j < n; ++j) {
        double sim = cosine(emb[cand], emb[seg.idx[j]]);
        if (sim > best) best = sim;
    }
    return best;
}

}  // namespace

std::vector<Segment> segment(const Document& doc, EmbeddingProvider& provider,
                             const SegmenterConfig& cfg) {
    if (doc.sentences.empty()) throw std::invalid_argument("segment: empty document");
    const Tokenizer& tok = *cfg.tokenizer;

    const auto emb = provider.embed(doc.sentences);
    std::vector<std::size_t> counts(doc.sentences.size());
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) counts[i] = tok.count(doc.sentences[i]);

    // Greedy merge pass.
    std::vector<OpenSegment> runs;
    OpenSegment open{{0}, counts[0]};
    for (std::size_t i = 1; i < doc.sentences.size(); ++i) {
        const double sim = window_similarity(emb, open, i, cfg.window);
        if (sim >= cfg.threshold && open.tokens + counts[i] <= cfg.max_tokens) {
            open.idx.push_back(i);
            open.tokens += counts[i];
        } else {
            runs.push_back(std::move(open));
            open = OpenSegment{{i}, counts[i]};
        }
    }
    runs.push_back(std::move(open));

    // Fold singletons into the neighbor with the higher boundary similarity.
    if (cfg.merge_singletons) {
        for (std::size_t i = 0; i < runs.size();) {
            if (runs[i].idx.size() != 1 || runs.size() == 1) {
                ++i;
                continue;
            }
            const std::size_t s = runs[i].idx.front();
            double sim_prev = -2.0, sim_next = -2.0;
            if (i > 0) sim_prev = cosine(emb[s], emb[runs[i - 1].idx.back()]);
            if (i + 1 < runs.size()) sim_next = cosine(emb[s], emb[runs[i + 1].idx.front()]);

            auto fits_prev = [&] { return i > 0 && runs[i - 1].tokens + counts[s] <= cfg.max_tokens; };
            auto fits_next = [&] {
                return i + 1 < runs.size() && runs[i + 1].tokens + counts[s] <= cfg.max_tokens;
            };

            bool prefer_prev = sim_prev >= sim_next;
            if (prefer_prev && fits_prev()) {
                runs[i - 1].idx.push_back(s);
                runs[i - 1].tokens += counts[s];
                runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i));
            } else if (fits_next()) {
                auto& nxt = runs[i + 1];
                nxt.idx.insert(nxt.idx.begin(), s);
                nxt.tokens += counts[s];
                runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i));
            } else if (!prefer_prev && fits_prev()) {
                runs[i - 1].idx.push_back(s);
                runs[i - 1].tokens += counts[s];
                runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
                ++i;  // kept, flagged below
            }
        }
    }

    std::vector<Segment> out;
    out.reserve(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        Segment seg;
        seg.id = doc.id + "#" + std::to_string(i);
        seg.source_doc = doc.id;
        for (std::size_t idx : runs[i].idx) seg.sentences.push_back(doc.sentences[idx]);
        seg.token_count = tok.count(seg.joined_text());
        seg.below_min = static_cast<int>(seg.sentences.size()) < cfg.min_sentences;
        out.push_back(std::move(seg));
    }
    return out;
}

void save_segments_jsonl(const std::vector<Segment>& segments, std::ostream& out) {
    for (const auto& s : segments) {
        json flags = json::array();
        if (s.below_min) flags.push_back("below_min");
        json j{{"id", s.id},
               {"source_doc", s.source_doc},
               {"sentences", s.sentences},
               {"token_count", s.token_count},
               {"flags", flags}};
        out << j.dump() << '\n';
    }
}

void save_segments_jsonl_file(const std::vector<Segment>& segments, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    save_segments_jsonl(segments, out);
}

std::vector<Segment> load_segments_jsonl(std::istream& in) {
    std::vector<Segment> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("segment JSONL parse error at line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
        Segment s;
        s.id = j.at("id").get<std::string>();
        s.source_doc = j.value("source_doc", "");
        s.sentences = j.at("sentences").get<std::vector<std::string>>();
        s.token_count = j.value("token_count", std::size_t{0});
        if (j.contains("flags"))
            for (const auto& f : j["flags"])
                if (f == "below_min") s.below_min = true;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Segment> load_segments_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    return load_segments_jsonl(in);
}

std::vector<Document> load_documents_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("document JSONL parse error at line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
        Document d;
        d.id = j.at("id").get<std::string>();
        if (j.contains("sentences"))
            d.sentences = j["sentences"].get<std::vector<std::string>>();
        else
            d.sentences = text::split_sentences(j.at("text").get<std::string>());
        docs.push_back(std::move(d));
    }
    return docs;
}

}  // namespace kgmasd::seg
