#pragma once

#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgmasd::seg {

struct EmbeddingProviderConfig {
    std::string endpoint;
    int dimension = 384;
    std::chrono::milliseconds timeout{10000};
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sentence -> dense vector provider. Implementations must tolerate
// concurrent calls.
class EmbeddingProvider {
  public:
    virtual ~EmbeddingProvider() = default;
    virtual int dimension() const = 0;
    // One vector per input sentence, each of length dimension().
    // Throws TransportError / ContractViolation.
    virtual std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) = 0;
};

// Deterministic offline provider: seeded feature-hash of character trigrams
// projected onto the configured dimension, L2-normalized. Test-only
// fidelity, no network.
class OfflineHashEmbedder final : public EmbeddingProvider {
  public:
    explicit OfflineHashEmbedder(int dimension = 384, std::uint64_t seed = 0x6b676d617364ull);
    int dimension() const override { return dimension_; }
    std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) override;

  private:
    int dimension_;
    std::uint64_t seed_;
};

// POST {endpoint}/embed {"inputs":[...]} -> {"vectors":[[...],...]}.
class HttpEmbedder final : public EmbeddingProvider {
  public:
    explicit HttpEmbedder(EmbeddingProviderConfig cfg);
    int dimension() const override { return cfg_.dimension; }
    std::vector<std::vector<float>> embed(const std::vector<std::string>& sentences) override;

  private:
    EmbeddingProviderConfig cfg_;
};

// Cosine similarity. Throws std::invalid_argument on length mismatch or a
// zero-norm input.
double cosine(const std::vector<float>& u, const std::vector<float>& v);

}  // namespace kgmasd::seg
