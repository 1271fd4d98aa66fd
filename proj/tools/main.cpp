// kgmasd: segmentation, agent extraction, instruction-data generation and
// the numerical theory lab behind one command-line entry point.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgmasd/agents.hpp"
#include "kgmasd/control.hpp"
#include "kgmasd/datafactory.hpp"
#include "kgmasd/infotheory.hpp"
#include "kgmasd/knowledge_graph.hpp"
#include "kgmasd/metrics.hpp"
#include "kgmasd/segmenter.hpp"
#include "kgmasd/sgdlab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kConfigSchemaVersion = 1;

// write-temp-then-rename so partial output never lands under the target name
void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for write: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

std::unique_ptr<kgmasd::seg::EmbeddingProvider> make_embedder(const std::string& spec,
                                                              int dimension,
                                                              std::uint64_t seed) {
    if (spec == "offline")
        return std::make_unique<kgmasd::seg::OfflineHashEmbedder>(dimension, seed);
    kgmasd::seg::EmbeddingProviderConfig cfg;
    cfg.endpoint = spec;
    cfg.dimension = dimension;
    return std::make_unique<kgmasd::seg::HttpEmbedder>(cfg);
}

std::unique_ptr<kgmasd::agents::ChatBackend> make_backend(const std::string& spec,
                                                          const std::string& model) {
    const std::string scripted_prefix = "scripted:";
    if (spec.rfind(scripted_prefix, 0) == 0) {
        return std::make_unique<kgmasd::agents::ScriptedBackend>(
            kgmasd::agents::ScriptedBackend::from_file(spec.substr(scripted_prefix.size())));
    }
    kgmasd::agents::ChatBackendConfig cfg;
    cfg.endpoint = spec == "http" ? env_or("KGMASD_LLM_BASE_URL", "") : spec;
    cfg.model = model;
    return std::make_unique<kgmasd::agents::HttpChatBackend>(cfg);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    return json::parse(in);
}

struct GlobalConfig {
    json root = json::object();

    template <typename T>
    void apply(const char* section, const char* key, T& target) const {
        if (root.contains(section) && root[section].contains(key))
            target = root[section][key].get<T>();
    }
};

int run_segment(const std::string& in_path, const std::string& out_path,
                const std::string& embed_spec, int dimension, double threshold, int window,
                int min_sentences, std::size_t max_tokens, std::uint64_t seed) {
    auto provider = make_embedder(embed_spec, dimension, seed);
    kgmasd::seg::SegmenterConfig cfg;
    cfg.threshold = threshold;
    cfg.window = window;
    cfg.min_sentences = min_sentences;
    cfg.max_tokens = max_tokens;

    std::vector<kgmasd::seg::Segment> all;
    for (const auto& doc : kgmasd::seg::load_documents_jsonl_file(in_path)) {
        auto segs = kgmasd::seg::segment(doc, *provider, cfg);
        all.insert(all.end(), segs.begin(), segs.end());
    }
    std::ostringstream buf;
    kgmasd::seg::save_segments_jsonl(all, buf);
    write_atomic(out_path, buf.str());
    std::cout << "wrote " << all.size() << " segments to " << out_path << "\n";
    return 0;
}

int run_extract(const std::string& segments_path, const std::string& gkg_path,
                const std::string& query, const std::string& backend_spec,
                const std::string& model, const std::string& prompts_dir,
                const std::string& out_dir, int max_iterations, int hop_limit) {
    const auto segments = kgmasd::seg::load_segments_jsonl_file(segments_path);
    kgmasd::kg::KnowledgeGraph gkg =
        gkg_path.empty() ? kgmasd::kg::KnowledgeGraph()
                         : kgmasd::kg::KnowledgeGraph::load_jsonl_file(gkg_path);
    auto backend = make_backend(backend_spec, model);

    kgmasd::agents::SessionConfig cfg;
    cfg.max_iterations = max_iterations;
    cfg.hop_limit = hop_limit;
    if (!prompts_dir.empty()) cfg.prompts = kgmasd::agents::PromptSet::load_dir(prompts_dir);

    const auto session = kgmasd::agents::run_session(query, segments, gkg, *backend, cfg);

    fs::create_directories(out_dir);
    write_atomic((fs::path(out_dir) / "session.json").string(), session.to_json().dump(2) + "\n");

    kgmasd::kg::KnowledgeGraph lhkg(kgmasd::kg::GraphKind::Local);
    lhkg.add_triples(session.z);
    std::ostringstream buf;
    lhkg.save_jsonl(buf);
    write_atomic((fs::path(out_dir) / "lhkg.jsonl").string(), buf.str());

    std::cout << "session status=" << session.to_json()["status"].get<std::string>()
              << " step=" << session.step << " triples=" << session.z.size() << "\n";
    return session.status == kgmasd::agents::SessionStatus::Aborted ? 2 : 0;
}

int run_distill(const std::string& lhkg_path, const std::string& segments_path,
                const std::string& mode, const std::string& out_path,
                const std::string& recipe_out) {
    const auto lhkg =
        kgmasd::kg::KnowledgeGraph::load_jsonl_file(lhkg_path, kgmasd::kg::GraphKind::Local);
    const auto segments = kgmasd::seg::load_segments_jsonl_file(segments_path);

    std::vector<kgmasd::data::InstructionSample> samples;
    std::size_t skipped = 0;
    if (mode == "rte" || mode == "both") {
        std::size_t s = 0;
        auto rte = kgmasd::data::gen_rte_samples(lhkg, segments, &s);
        samples.insert(samples.end(), rte.begin(), rte.end());
        skipped += s;
    }
    if (mode == "kgc" || mode == "both") {
        std::size_t s = 0;
        auto kgc = kgmasd::data::gen_kgc_samples(lhkg, segments, &s);
        samples.insert(samples.end(), kgc.begin(), kgc.end());
        skipped += s;
    }
    std::ostringstream buf;
    kgmasd::data::export_jsonl(samples, buf);
    write_atomic(out_path, buf.str());
    if (!recipe_out.empty())
        write_atomic(recipe_out, kgmasd::data::training_recipe().dump(2) + "\n");
    std::cout << "wrote " << samples.size() << " samples to " << out_path << " (skipped "
              << skipped << " unsupported triples)\n";
    return 0;
}

int run_split(const std::string& in_path, const std::string& out_dir, double train, double test,
              double val, std::uint64_t seed) {
    const auto samples = kgmasd::data::import_jsonl_file(in_path);
    kgmasd::data::SplitSpec spec{train, test, val, seed};
    const auto result = kgmasd::data::split_dataset(samples, spec);
    fs::create_directories(out_dir);
    for (const auto& [name, part] :
         {std::pair{"train", &result.train}, {"test", &result.test}, {"val", &result.val}}) {
        std::ostringstream buf;
        kgmasd::data::export_jsonl(*part, buf);
        write_atomic((fs::path(out_dir) / (std::string(name) + ".jsonl")).string(), buf.str());
    }
    std::cout << "train=" << result.train.size() << " test=" << result.test.size()
              << " val=" << result.val.size() << "\n";
    return 0;
}

int run_stats(const std::string& in_path) {
    const auto samples = kgmasd::data::import_jsonl_file(in_path);
    json out = json::object();
    for (const auto& [theme, pct] : kgmasd::data::theme_stats(samples)) out[theme] = pct;
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_audit(const std::string& in_path, const std::string& out_path) {
    const auto samples = kgmasd::data::import_jsonl_file(in_path);
    std::ostringstream buf;
    kgmasd::data::export_audit_csv(samples, buf);
    write_atomic(out_path, buf.str());
    std::cout << "wrote audit CSV for " << samples.size() << " samples to " << out_path << "\n";
    return 0;
}

std::map<std::string, std::string> load_id_text_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(path + ": parse error at line " + std::to_string(lineno) +
                                     ": " + e.what());
        }
        out[j.at("id").get<std::string>()] = j.at("text").get<std::string>();
    }
    return out;
}

int run_eval(const std::string& pred_path, const std::string& ref_path,
             const std::string& out_path) {
    const auto preds = load_id_text_jsonl(pred_path);
    const auto refs = load_id_text_jsonl(ref_path);
    std::vector<std::string> cand, ref;
    for (const auto& [id, text] : refs) {
        auto it = preds.find(id);
        if (it == preds.end()) throw std::runtime_error("missing prediction for id: " + id);
        cand.push_back(it->second);
        ref.push_back(text);
    }
    const auto report = kgmasd::metrics::score_corpus(cand, ref);
    json out{{"config",
              {{"tokenizer", kgmasd::metrics::ScoreReport::kTokenizer},
               {"bleu_smoothing", kgmasd::metrics::ScoreReport::kSmoothing},
               {"rouge_aggregation", kgmasd::metrics::ScoreReport::kRougeAggregation}}},
             {"bleu4", report.bleu4},
             {"rouge1_f", report.rouge1_f},
             {"rouge2_f", report.rouge2_f},
             {"rougeL_f", report.rougeL_f}};
    json per = json::array();
    for (const auto& ps : report.per_sample)
        per.push_back(
            {{"rouge1_f", ps.rouge1_f}, {"rouge2_f", ps.rouge2_f}, {"rougeL_f", ps.rougeL_f}});
    out["per_sample"] = per;
    if (out_path.empty())
        std::cout << out.dump(2) << "\n";
    else
        write_atomic(out_path, out.dump(2) + "\n");
    return 0;
}

int run_theory_gamma(const std::string& joint_path) {
    const json j = load_json_file(joint_path);
    const auto rows = j.at("p").get<std::vector<std::vector<double>>>();
    if (rows.empty()) throw std::runtime_error("joint: empty table");
    std::vector<double> flat;
    for (const auto& r : rows) {
        if (r.size() != rows[0].size()) throw std::runtime_error("joint: ragged table");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    kgmasd::info::DiscreteJoint joint(rows.size(), rows[0].size(), flat);
    json out{{"gamma", kgmasd::info::gamma_index(joint)},
             {"h_y", kgmasd::info::entropy_y(joint)},
             {"h_y_given_s", kgmasd::info::conditional_entropy(joint)},
             {"mutual_information", kgmasd::info::mutual_information(joint)},
             {"bayes_accuracy", kgmasd::info::bayes_accuracy(joint)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_theory_sgd(double gamma, int steps, int seeds, int dim, double alpha_frac,
                   double sigma0_sq, double c, std::uint64_t seed, const std::string& out_path) {
    std::vector<double> eigs;
    for (int i = 0; i < dim; ++i)
        eigs.push_back(dim == 1 ? 1.0 : 0.5 + 9.5 * i / (dim - 1));  // mu=0.5, L=10
    kgmasd::sgd::QuadraticProblem problem(eigs, seed);
    kgmasd::sgd::NoiseModel noise{sigma0_sq, c, gamma};
    const double alpha = alpha_frac / problem.smoothness();
    const double gap = 0.5 * problem.hessian()(0, 0);  // f(e_1)

    const auto trace = kgmasd::sgd::run_sgd(problem, noise, alpha, steps, seeds, seed + 1);
    std::ostringstream buf;
    buf << "k,mean_subopt,stderr,bound\n";
    for (std::size_t k = 0; k < trace.mean_subopt.size(); ++k)
        buf << k << ',' << trace.mean_subopt[k] << ',' << trace.stderr_subopt[k] << ','
            << kgmasd::sgd::theorem2_bound(problem, noise, alpha, static_cast<int>(k), gap)
            << '\n';
    if (out_path.empty())
        std::cout << buf.str();
    else
        write_atomic(out_path, buf.str());
    return 0;
}

kgmasd::ctrl::LinearAgentSystem topology_from_spec(const std::string& spec) {
    using kgmasd::ctrl::LinearAgentSystem;
    if (spec == "chain" || spec == "default") return LinearAgentSystem::default_five_agent();
    if (spec == "star") {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(5, 5);
        for (int i = 0; i < 4; ++i) w(i, 4) = w(4, i) = 1.0;
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(5, 1);
        b(4, 0) = 1.0;
        return LinearAgentSystem::make(w, b, Eigen::MatrixXd::Constant(1, 5, 0.5));
    }
    const json j = load_json_file(spec);
    auto to_matrix = [](const json& rows) {
        const auto data = rows.get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd m(data.size(), data.empty() ? 0 : data[0].size());
        for (std::size_t i = 0; i < data.size(); ++i)
            for (std::size_t k = 0; k < data[i].size(); ++k)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = data[i][k];
        return m;
    };
    return LinearAgentSystem::make(to_matrix(j.at("adjacency")), to_matrix(j.at("b")),
                                   to_matrix(j.at("k")));
}

int run_theory_control(const std::string& topology, double dt, int steps,
                       const std::string& out_path) {
    const auto system = topology_from_spec(topology);
    const auto report = kgmasd::ctrl::controllability(system.a, system.b);
    const int exact = kgmasd::ctrl::exact_rank(report.q_c);

    Eigen::VectorXd x0 = Eigen::VectorXd::Ones(system.n());
    const auto traj = kgmasd::ctrl::simulate(system, x0, dt, steps);

    std::ostringstream buf;
    buf << "t";
    for (int i = 1; i <= system.n(); ++i) buf << ",x" << i;
    buf << "\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        buf << traj.t[k];
        for (int i = 0; i < system.n(); ++i) buf << ',' << traj.x[k](i);
        buf << "\n";
    }
    if (out_path.empty())
        std::cout << buf.str();
    else
        write_atomic(out_path, buf.str());

    json summary{{"rank", report.rank},
                 {"exact_rank", exact},
                 {"controllable", report.controllable},
                 {"converged", traj.converged}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KG-MASD toolkit: segmentation, multi-agent KG extraction, instruction-data "
                 "generation, evaluation, and the theory lab"};
    app.set_version_flag("--version", std::string("kgmasd ") + kVersion + " (config schema v" +
                                          std::to_string(kConfigSchemaVersion) + ")");
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override file values");
    GlobalConfig cfg;

    // segment
    auto* seg_cmd = app.add_subcommand("segment", "Split documents into coherent segments");
    std::string seg_in, seg_out;
    std::string embed_spec = env_or("KGMASD_EMBED_BASE_URL", "offline");
    int dimension = 384, window = 8, min_sentences = 2;
    double threshold = 0.5;
    std::size_t max_tokens = 512;
    std::uint64_t seed = 0;
    seg_cmd->add_option("--in", seg_in, "input documents JSONL")->required();
    seg_cmd->add_option("--out", seg_out, "output segments JSONL")->required();
    seg_cmd->add_option("--embed", embed_spec, "'offline' or embedding base URL");
    seg_cmd->add_option("--embed-url", embed_spec, "embedding base URL");
    seg_cmd->add_option("--dimension", dimension);
    seg_cmd->add_option("--threshold", threshold);
    seg_cmd->add_option("--window", window);
    seg_cmd->add_option("--min-sentences", min_sentences);
    seg_cmd->add_option("--max-tokens", max_tokens);
    seg_cmd->add_option("--seed", seed);

    // extract
    auto* ext_cmd = app.add_subcommand("extract", "Run the five-agent extraction session");
    std::string ext_segments, ext_gkg, ext_query, ext_backend = "http", ext_model = "default";
    std::string ext_prompts, ext_out_dir = ".";
    int max_iterations = 5, hop_limit = 2;
    ext_cmd->add_option("--segments", ext_segments, "segments JSONL")->required();
    ext_cmd->add_option("--gkg", ext_gkg, "global KG triples JSONL");
    ext_cmd->add_option("--query", ext_query, "extraction query")->required();
    ext_cmd->add_option("--backend", ext_backend, "'scripted:<path>', 'http', or a base URL");
    ext_cmd->add_option("--model", ext_model);
    ext_cmd->add_option("--prompts-dir", ext_prompts, "role prompt template overrides");
    ext_cmd->add_option("--out-dir", ext_out_dir)->required();
    ext_cmd->add_option("--max-iterations", max_iterations);
    ext_cmd->add_option("--hop-limit", hop_limit);

    // distill
    auto* dis_cmd = app.add_subcommand("distill", "Generate RTE/KGC instruction samples");
    std::string dis_lhkg, dis_segments, dis_mode = "both", dis_out, dis_recipe;
    dis_cmd->add_option("--lhkg", dis_lhkg, "local KG triples JSONL")->required();
    dis_cmd->add_option("--segments", dis_segments, "segments JSONL")->required();
    dis_cmd->add_option("--mode", dis_mode)->check(CLI::IsMember({"rte", "kgc", "both"}));
    dis_cmd->add_option("--out", dis_out, "output samples JSONL")->required();
    dis_cmd->add_option("--recipe-out", dis_recipe, "write the training recipe JSON here");

    // split
    auto* spl_cmd = app.add_subcommand("split", "Stratified train/test/val split");
    std::string spl_in, spl_out_dir;
    double r_train = 0.6, r_test = 0.2, r_val = 0.2;
    std::uint64_t spl_seed = 0;
    spl_cmd->add_option("--in", spl_in)->required();
    spl_cmd->add_option("--out-dir", spl_out_dir)->required();
    spl_cmd->add_option("--train", r_train);
    spl_cmd->add_option("--test", r_test);
    spl_cmd->add_option("--val", r_val);
    spl_cmd->add_option("--seed", spl_seed);

    // stats
    auto* sta_cmd = app.add_subcommand("stats", "Theme histogram of a sample set");
    std::string sta_in;
    sta_cmd->add_option("--in", sta_in)->required();

    // audit
    auto* aud_cmd = app.add_subcommand("audit", "Export the audit CSV");
    std::string aud_in, aud_out;
    aud_cmd->add_option("--in", aud_in)->required();
    aud_cmd->add_option("--out", aud_out)->required();

    // eval
    auto* eva_cmd = app.add_subcommand("eval", "Score predictions with BLEU-4 / ROUGE");
    std::string eva_pred, eva_ref, eva_out;
    eva_cmd->add_option("--pred", eva_pred)->required();
    eva_cmd->add_option("--ref", eva_ref)->required();
    eva_cmd->add_option("--out", eva_out, "output JSON (stdout when omitted)");

    // theory
    auto* theory = app.add_subcommand("theory", "Numerical verification lab");
    theory->require_subcommand(1);
    auto* gam_cmd = theory->add_subcommand("gamma", "Prior-quality index of a finite joint");
    std::string gam_joint;
    gam_cmd->add_option("--joint", gam_joint, "JSON {\"p\":[[...],...]}")->required();

    auto* sgd_cmd = theory->add_subcommand("sgd", "SGD error-floor experiment");
    double sgd_gamma = 0.0, alpha_frac = 0.5, sigma0_sq = 1.0, noise_c = 1.0;
    int sgd_steps = 200, sgd_seeds = 100, sgd_dim = 5;
    std::uint64_t sgd_seed = 1;
    std::string sgd_out;
    sgd_cmd->add_option("--gamma", sgd_gamma)->check(CLI::Range(0.0, 1.0));
    sgd_cmd->add_option("--steps", sgd_steps);
    sgd_cmd->add_option("--seeds", sgd_seeds);
    sgd_cmd->add_option("--dim", sgd_dim);
    sgd_cmd->add_option("--alpha-frac", alpha_frac, "step size as a fraction of 1/L");
    sgd_cmd->add_option("--sigma0-sq", sigma0_sq);
    sgd_cmd->add_option("--c", noise_c);
    sgd_cmd->add_option("--seed", sgd_seed);
    sgd_cmd->add_option("--out", sgd_out, "output CSV (stdout when omitted)");

    auto* con_cmd = theory->add_subcommand("control", "Agent-network controllability & stability");
    std::string con_topology = "chain", con_out;
    double con_dt = 0.01;
    int con_steps = 3000;
    con_cmd->add_option("--topology", con_topology, "'chain', 'star', or a topology JSON file");
    con_cmd->add_option("--dt", con_dt);
    con_cmd->add_option("--steps", con_steps);
    con_cmd->add_option("--out", con_out, "output CSV (stdout when omitted)");

    // Config file values act as defaults; explicit flags win.
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") cfg.root = load_json_file(argv[i + 1]);
        cfg.apply("segmenter", "threshold", threshold);
        cfg.apply("segmenter", "window", window);
        cfg.apply("segmenter", "min_sentences", min_sentences);
        cfg.apply("segmenter", "max_tokens", max_tokens);
        cfg.apply("embed", "url", embed_spec);
        cfg.apply("embed", "dimension", dimension);
        cfg.apply("backend", "url", ext_backend);
        cfg.apply("backend", "model", ext_model);
        cfg.apply("session", "max_iterations", max_iterations);
        cfg.apply("session", "hop_limit", hop_limit);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/version or the usage error
        return code == 0 ? 0 : 1;
    }

    try {
        if (*seg_cmd)
            return run_segment(seg_in, seg_out, embed_spec, dimension, threshold, window,
                               min_sentences, max_tokens, seed);
        if (*ext_cmd)
            return run_extract(ext_segments, ext_gkg, ext_query, ext_backend, ext_model,
                               ext_prompts, ext_out_dir, max_iterations, hop_limit);
        if (*dis_cmd) return run_distill(dis_lhkg, dis_segments, dis_mode, dis_out, dis_recipe);
        if (*spl_cmd) return run_split(spl_in, spl_out_dir, r_train, r_test, r_val, spl_seed);
        if (*sta_cmd) return run_stats(sta_in);
        if (*aud_cmd) return run_audit(aud_in, aud_out);
        if (*eva_cmd) return run_eval(eva_pred, eva_ref, eva_out);
        if (*gam_cmd) return run_theory_gamma(gam_joint);
        if (*sgd_cmd)
            return run_theory_sgd(sgd_gamma, sgd_steps, sgd_seeds, sgd_dim, alpha_frac, sigma0_sq,
                                  noise_c, sgd_seed, sgd_out);
        if (*con_cmd) return run_theory_control(con_topology, con_dt, con_steps, con_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
