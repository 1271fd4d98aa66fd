#include "kgmasd/embedding.hpp"

#include <cmath>
#include <cstdint>

#include <httplib.h>
#include <json.hpp>

#include "kgmasd/text.hpp"

namespace kgmasd::seg {

using nlohmann::json;

double cosine(const std::vector<float>& u, const std::vector<float>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: length mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += static_cast<double>(u[i]) * v[i];
        nu += static_cast<double>(u[i]) * u[i];
        nv += static_cast<double>(v[i]) * v[i];
    }
    if (nu == 0.0 || nv == 0.0)
        throw std::invalid_argument("cosine: undefined similarity for zero-norm input");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

OfflineHashEmbedder::OfflineHashEmbedder(int dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension < 1) throw std::invalid_argument("embedding dimension must be >= 1");
}

namespace {
std::uint64_t mix(std::uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 33;
    return h;
}
}  // namespace

std::vector<std::vector<float>> OfflineHashEmbedder::embed(
    const std::vector<std::string>& sentences) {
    if (sentences.empty()) throw std::invalid_argument("embed: empty sentence list");
    std::vector<std::vector<float>> out;
    out.reserve(sentences.size());
    for (const auto& raw : sentences) {
        const std::string s = text::canon(raw);
        std::vector<float> vec(static_cast<std::size_t>(dimension_), 0.0f);
        const std::string padded = "^^" + s + "$$";
        for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
            std::uint64_t h = seed_;
            for (std::size_t k = 0; k < 3; ++k)
                h = mix(h ^ static_cast<unsigned char>(padded[i + k]) ^ (k << 8));
            const std::size_t bucket = h % static_cast<std::uint64_t>(dimension_);
            const float sign = (mix(h ^ 0x5157ull) & 1) ? 1.0f : -1.0f;
            vec[bucket] += sign;
        }
        double norm = 0.0;
        for (float x : vec) norm += static_cast<double>(x) * x;
        if (norm == 0.0) {
            vec[0] = 1.0f;  // empty/degenerate sentence maps to a fixed unit vector
        } else {
            const float inv = static_cast<float>(1.0 / std::sqrt(norm));
            for (float& x : vec) x *= inv;
        }
        out.push_back(std::move(vec));
    }
    return out;
}

HttpEmbedder::HttpEmbedder(EmbeddingProviderConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.dimension < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    if (cfg_.endpoint.empty()) throw std::invalid_argument("embedding endpoint not set");
}

std::vector<std::vector<float>> HttpEmbedder::embed(const std::vector<std::string>& sentences) {
    if (sentences.empty()) throw std::invalid_argument("embed: empty sentence list");
    httplib::Client client(cfg_.endpoint);
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout));

    json body{{"inputs", sentences}};
    auto res = client.Post("/embed", body.dump(), "application/json");
    if (!res) throw TransportError("embedding provider unreachable: " + cfg_.endpoint);
    if (res->status != 200)
        throw TransportError("embedding provider returned HTTP " + std::to_string(res->status));

    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("embedding reply is not JSON: ") + e.what());
    }
    if (!reply.contains("vectors") || !reply["vectors"].is_array())
        throw ContractViolation("embedding reply missing \"vectors\" array");
    std::vector<std::vector<float>> out;
    for (const auto& v : reply["vectors"]) out.push_back(v.get<std::vector<float>>());
    if (out.size() != sentences.size())
        throw ContractViolation("embedding reply arity mismatch: expected " +
                                std::to_string(sentences.size()) + ", got " +
                                std::to_string(out.size()));
    for (const auto& v : out)
        if (static_cast<int>(v.size()) != cfg_.dimension)
            throw ContractViolation("embedding dimension mismatch: expected " +
                                    std::to_string(cfg_.dimension) + ", got " +
                                    std::to_string(v.size()));
    return out;
}

}  // namespace kgmasd::seg
