#include "kgmasd/datafactory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "kgmasd/text.hpp"

namespace kgmasd::data {

using nlohmann::json;

void SplitSpec::validate() const {
    if (train <= 0.0 || test <= 0.0 || val <= 0.0)
        throw std::invalid_argument("split ratios must all be positive");
    if (std::abs(train + test + val - 1.0) > 1e-9)
        throw std::invalid_argument("split ratios must sum to 1");
}

namespace {

const char* kRteInstruction =
    "Extract the relation triple between entities mentioned in the text.";
const char* kKgcInstruction =
    "Infer the missing tail entity for the given head entity and relation using the context.";

bool segment_supports(const seg::Segment& s, const kg::Triple& t) {
    const std::string body = s.joined_text();
    return text::contains_ci(body, t.head) && text::contains_ci(body, t.tail);
}

bool segment_mentions_head(const seg::Segment& s, const kg::Triple& t) {
    return text::contains_ci(s.joined_text(), t.head);
}

}  // namespace

std::vector<InstructionSample> gen_rte_samples(const kg::KnowledgeGraph& lhkg,
                                               const std::vector<seg::Segment>& segments,
                                               std::size_t* skipped) {
    std::vector<InstructionSample> out;
    std::size_t skip_count = 0;
    for (const auto& t : lhkg.triples()) {
        bool located = false;
        for (const auto& s : segments) {
            if (!segment_supports(s, t)) continue;
            located = true;
            InstructionSample sample;
            sample.instruction = kRteInstruction;
            sample.input = s.joined_text();
            sample.output =
                "Subject: " + t.head + "; Predicate: " + t.relation + "; Object: " + t.tail;
            sample.mode = Mode::RTE;
            sample.provenance_triples = {kg::triple_key(t)};
            sample.lkg_weight = t.confidence > 0.0 ? t.confidence : 1.0;
            out.push_back(std::move(sample));
        }
        if (!located) ++skip_count;
    }
    if (skipped) *skipped = skip_count;
    return out;
}

std::vector<InstructionSample> gen_kgc_samples(const kg::KnowledgeGraph& lhkg,
                                               const std::vector<seg::Segment>& segments,
                                               std::size_t* skipped) {
    std::vector<InstructionSample> out;
    std::size_t skip_count = 0;
    for (const auto& t : lhkg.triples()) {
        const seg::Segment* support = nullptr;
        for (const auto& s : segments) {
            if (segment_mentions_head(s, t)) {
                support = &s;
                break;
            }
        }
        if (!support) {
            ++skip_count;
            continue;
        }
        InstructionSample sample;
        sample.instruction = kKgcInstruction;
        sample.input = "Entity: " + t.head + "; Relation: " + t.relation +
                       "; Context: " + support->joined_text();
        sample.output = t.tail;
        sample.mode = Mode::KGC;
        sample.provenance_triples = {kg::triple_key(t)};
        sample.lkg_weight = t.confidence > 0.0 ? t.confidence : 1.0;
        if (text::canon(t.head) == text::canon(t.tail)) sample.extras["degenerate"] = true;
        out.push_back(std::move(sample));
    }
    if (skipped) *skipped = skip_count;
    return out;
}

void export_jsonl(const std::vector<InstructionSample>& samples, std::ostream& out) {
    for (const auto& s : samples) {
        json j = s.extras.is_object() ? s.extras : json::object();
        j["instruction"] = s.instruction;
        j["input"] = s.input;
        j["output"] = s.output;
        j["theme"] = theme_name(s.theme);
        j["mode"] = mode_name(s.mode);
        j["provenance_triples"] = s.provenance_triples;
        j["lkg_weight"] = s.lkg_weight;
        out << j.dump() << '\n';
    }
}

void export_jsonl_file(const std::vector<InstructionSample>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    export_jsonl(samples, out);
}

std::vector<InstructionSample> import_jsonl(std::istream& in) {
    std::vector<InstructionSample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error("sample JSONL parse error at line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
        InstructionSample s;
        try {
            s.instruction = j.at("instruction").get<std::string>();
            s.input = j.value("input", "");
            s.output = j.at("output").get<std::string>();
        } catch (const json::exception& e) {
            throw std::runtime_error("sample JSONL schema error at line " +
                                     std::to_string(lineno) + ": " + e.what());
        }
        if (j.contains("theme")) {
            auto t = theme_from_name(j["theme"].get<std::string>());
            if (!t)
                throw std::runtime_error("unknown theme at line " + std::to_string(lineno) + ": " +
                                         j["theme"].get<std::string>());
            s.theme = *t;
        }
        if (j.contains("mode")) {
            auto m = mode_from_name(j["mode"].get<std::string>());
            if (!m)
                throw std::runtime_error("unknown mode at line " + std::to_string(lineno));
            s.mode = *m;
        }
        if (j.contains("provenance_triples"))
            s.provenance_triples = j["provenance_triples"].get<std::vector<std::string>>();
        s.lkg_weight = j.value("lkg_weight", 1.0);
        for (auto& [key, value] : j.items()) {
            static const char* known[] = {"instruction", "input",  "output",
                                          "theme",       "mode",   "provenance_triples",
                                          "lkg_weight"};
            if (std::find(std::begin(known), std::end(known), key) == std::end(known))
                s.extras[key] = value;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<InstructionSample> import_jsonl_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    return import_jsonl(in);
}

namespace {

// Platform-independent Fisher-Yates (std::shuffle's draw sequence is
// implementation-defined).
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

SplitResult split_dataset(const std::vector<InstructionSample>& samples, const SplitSpec& spec) {
    spec.validate();
    if (samples.size() < 3) throw std::invalid_argument("split_dataset: need at least 3 samples");

    std::map<std::string, std::vector<std::size_t>> by_theme;
    for (std::size_t i = 0; i < samples.size(); ++i)
        by_theme[theme_name(samples[i].theme)].push_back(i);

    SplitResult result;
    for (auto& [theme, idx] : by_theme) {
        std::uint64_t th = 1469598103934665603ull;  // FNV-1a, stable across platforms
        for (unsigned char c : theme) th = (th ^ c) * 1099511628211ull;
        std::mt19937_64 rng(spec.seed ^ th);
        deterministic_shuffle(idx, rng);
        const auto n = static_cast<double>(idx.size());
        const auto c1 = static_cast<std::size_t>(std::floor(n * spec.train));
        const auto c2 = static_cast<std::size_t>(std::floor(n * (spec.train + spec.test)));
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const InstructionSample& s = samples[idx[k]];
            if (k < c1)
                result.train.push_back(s);
            else if (k < c2)
                result.test.push_back(s);
            else
                result.val.push_back(s);
        }
    }
    return result;
}

std::map<std::string, double> theme_stats(const std::vector<InstructionSample>& samples) {
    std::map<std::string, double> stats;
    if (samples.empty()) return stats;
    for (const auto& s : samples) stats[theme_name(s.theme)] += 1.0;
    for (auto& [_, v] : stats) v = v * 100.0 / static_cast<double>(samples.size());
    return stats;
}

namespace {
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out.push_back(c);
        if (c == '"') out.push_back('"');
    }
    out.push_back('"');
    return out;
}
}  // namespace

void export_audit_csv(const std::vector<InstructionSample>& samples, std::ostream& out) {
    out << "instruction,input,output,theme,mode,lkg_weight,provenance\r\n";
    for (const auto& s : samples) {
        std::string prov;
        for (std::size_t i = 0; i < s.provenance_triples.size(); ++i) {
            if (i) prov.push_back(';');
            prov += s.provenance_triples[i];
        }
        char weight[32];
        std::snprintf(weight, sizeof(weight), "%g", s.lkg_weight);
        out << csv_field(s.instruction) << ',' << csv_field(s.input) << ','
            << csv_field(s.output) << ',' << theme_name(s.theme) << ',' << mode_name(s.mode)
            << ',' << weight << ',' << csv_field(prov) << "\r\n";
    }
}

void export_audit_csv_file(const std::vector<InstructionSample>& samples,
                           const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    export_audit_csv(samples, out);
}

json training_recipe() {
    return json{{"method", "lora"},  {"rank", 16},       {"alpha", 64},
                {"learning_rate", 2e-5}, {"batch_size", 64}, {"epochs", 5},
                {"note", "reference hyperparameters for a downstream trainer; "
                         "this toolkit exports data only"}};
}

}  // namespace kgmasd::data
