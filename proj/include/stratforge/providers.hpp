#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "stratforge/error.hpp"
#include "stratforge/json_io.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

// Thrown when a replay script has no entry for a prompt: always a test or
// script bug, never retryable.
class ReplayMiss : public ProviderError {
public:
    explicit ReplayMiss(const std::string& what) : ProviderError(what, /*retryable=*/false) {}
};

class CompletionProvider {
public:
    virtual ~CompletionProvider() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string id() const = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual Eigen::VectorXd embed(const std::string& text) = 0;  // unit norm
    virtual int dimension() const = 0;
    virtual std::string id() const = 0;
};

// Deterministic stand-in for a live service, loaded from a JSON script:
//   {
//     "embedder": {"id": "...", "dimension": D},
//     "completions": { "<sha256(prompt)>": "response" | ["r1","r2",...] },
//     "embeddings":  { "<sha256(text)>": [d0, d1, ...] }
//   }
// A string value is returned on every call; a list value is consumed in call
// order and errors past its end (this is how m independent summaries of one
// prompt are scripted). Embedding vectors are normalized on load. Thread-safe,
// though replay runs pin workers=1 so list consumption order is well-defined.
class ReplayProvider : public CompletionProvider, public EmbeddingProvider {
public:
    explicit ReplayProvider(const json& script, std::string script_label = "replay");
    static std::shared_ptr<ReplayProvider> from_file(const std::string& path);

    std::string complete(const std::string& prompt) override;
    Eigen::VectorXd embed(const std::string& text) override;
    int dimension() const override { return dimension_; }
    std::string id() const override { return id_; }

private:
    struct Entry {
        std::vector<std::string> responses;
        bool consume = false;  // list form: advance cursor per call
        size_t cursor = 0;
    };
    std::mutex mu_;
    std::map<std::string, Entry> completions_;
    std::map<std::string, Eigen::VectorXd> embeddings_;
    int dimension_ = 0;
    std::string id_;
    std::string label_;
};

// OpenAI-style chat/embeddings client over HTTP. Payload construction is
// separated out so the request shape (temperature included) is testable
// without a network.
json build_completion_payload(const std::string& prompt, const PipelineConfig& config);
json build_embedding_payload(const std::string& text, const PipelineConfig& config);

class HttpCompletionProvider : public CompletionProvider {
public:
    explicit HttpCompletionProvider(const PipelineConfig& config);
    std::string complete(const std::string& prompt) override;
    std::string id() const override;

private:
    PipelineConfig config_;
    std::string api_key_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
public:
    HttpEmbeddingProvider(const PipelineConfig& config, int dimension);
    Eigen::VectorXd embed(const std::string& text) override;
    int dimension() const override { return dimension_; }
    std::string id() const override;

private:
    PipelineConfig config_;
    std::string api_key_;
    int dimension_;
};

struct ProviderBundle {
    std::shared_ptr<CompletionProvider> completion;
    std::shared_ptr<EmbeddingProvider> embedding;
    bool replay = false;
    std::string replay_script_hash;  // manifest provenance
};

// --replay <script> wires both interfaces to one ReplayProvider and pins
// workers to 1; otherwise live providers are built from config + API key env.
ProviderBundle make_providers(const std::string& replay_script_path, PipelineConfig& config);

} // namespace stratforge
