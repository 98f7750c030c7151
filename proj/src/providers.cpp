#include "stratforge/providers.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "stratforge/embedding.hpp"
#include "stratforge/hash.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

ReplayProvider::ReplayProvider(const json& script, std::string script_label)
    : label_(std::move(script_label)) {
    const json& emb = script.contains("embedder") ? script.at("embedder") : json::object();
    id_ = emb.value("id", "replay");
    dimension_ = emb.value("dimension", 0);

    if (script.contains("completions")) {
        for (auto it = script.at("completions").begin(); it != script.at("completions").end(); ++it) {
            Entry e;
            if (it.value().is_string()) {
                e.responses.push_back(it.value().get<std::string>());
                e.consume = false;
            } else if (it.value().is_array()) {
                for (const json& r : it.value()) e.responses.push_back(r.get<std::string>());
                e.consume = true;
            } else {
                throw ConfigError(label_ + ": completion entry must be string or list");
            }
            completions_[it.key()] = std::move(e);
        }
    }
    if (script.contains("embeddings")) {
        for (auto it = script.at("embeddings").begin(); it != script.at("embeddings").end(); ++it) {
            Eigen::VectorXd v = vector_from_json(it.value(), label_);
            if (dimension_ == 0) dimension_ = static_cast<int>(v.size());
            if (static_cast<int>(v.size()) != dimension_)
                throw ConfigError(label_ + ": embedding dimension mismatch for key " + it.key());
            embeddings_[it.key()] = normalized_or_throw(v);
        }
    }
}

std::shared_ptr<ReplayProvider> ReplayProvider::from_file(const std::string& path) {
    return std::make_shared<ReplayProvider>(read_json_file(path), path);
}

std::string ReplayProvider::complete(const std::string& prompt) {
    if (prompt.empty()) throw Error("provider_complete: empty prompt");
    std::string key = sha256_hex(prompt);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = completions_.find(key);
    if (it == completions_.end())
        throw ReplayMiss(label_ + ": no scripted response for prompt hash " + key +
                         " (prompt begins: " + prompt.substr(0, 120) + ")");
    Entry& e = it->second;
    if (!e.consume) return e.responses.front();
    if (e.cursor >= e.responses.size())
        throw ReplayMiss(label_ + ": scripted response list exhausted for prompt hash " + key);
    return e.responses[e.cursor++];
}

Eigen::VectorXd ReplayProvider::embed(const std::string& text) {
    if (text.empty()) throw Error("provider_embed: empty text");
    std::string key = sha256_hex(text);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = embeddings_.find(key);
    if (it == embeddings_.end())
        throw ReplayMiss(label_ + ": no scripted embedding for text hash " + key +
                         " (text begins: " + text.substr(0, 120) + ")");
    return it->second;
}

json build_completion_payload(const std::string& prompt, const PipelineConfig& config) {
    return json{{"model", config.model},
                {"temperature", config.temperature},
                {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})}};
}

json build_embedding_payload(const std::string& text, const PipelineConfig& config) {
    return json{{"model", config.model}, {"input", text}};
}

namespace {

std::string getenv_or_throw(const std::string& var) {
    const char* v = std::getenv(var.c_str());
    if (!v || !*v)
        throw ConfigError("live provider needs an API key: set " + var +
                          " or run with --replay");
    return v;
}

// POST with bounded retries on transport errors and 5xx/429.
json post_json_with_retry(const std::string& endpoint, const std::string& path,
                          const std::string& api_key, const json& payload, int max_retries) {
    std::string last_error;
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        httplib::Client client(endpoint);
        client.set_connection_timeout(30);
        client.set_read_timeout(120);
        httplib::Headers headers{{"Authorization", "Bearer " + api_key}};
        auto res = client.Post(path, headers, payload.dump(), "application/json");
        if (res && res->status >= 200 && res->status < 300)
            return parse_json(res->body, "provider response");
        if (res && res->status >= 400 && res->status < 500 && res->status != 429)
            throw ProviderError("provider rejected request (HTTP " + std::to_string(res->status) +
                                    "): " + res->body.substr(0, 300),
                                /*retryable=*/false, attempt);
        last_error = res ? "HTTP " + std::to_string(res->status)
                         : "transport error " + httplib::to_string(res.error());
        if (attempt < max_retries)
            std::this_thread::sleep_for(std::chrono::milliseconds(200 * attempt));
    }
    throw ProviderError("provider unreachable after " + std::to_string(max_retries) +
                            " attempts: " + last_error,
                        /*retryable=*/true, max_retries);
}

} // namespace

HttpCompletionProvider::HttpCompletionProvider(const PipelineConfig& config)
    : config_(config), api_key_(getenv_or_throw(config.api_key_env)) {
    if (config_.endpoint.empty()) throw ConfigError("live provider needs 'endpoint' in config");
}

std::string HttpCompletionProvider::complete(const std::string& prompt) {
    if (prompt.empty()) throw Error("provider_complete: empty prompt");
    json payload = build_completion_payload(prompt, config_);
    json res = post_json_with_retry(config_.endpoint, "/v1/chat/completions", api_key_, payload, 3);
    try {
        return res.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed completion response: ") + e.what(),
                            /*retryable=*/false);
    }
}

std::string HttpCompletionProvider::id() const {
    return "live:" + config_.endpoint + "#" + config_.model;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(const PipelineConfig& config, int dimension)
    : config_(config), api_key_(getenv_or_throw(config.api_key_env)), dimension_(dimension) {
    if (config_.endpoint.empty()) throw ConfigError("live provider needs 'endpoint' in config");
}

Eigen::VectorXd HttpEmbeddingProvider::embed(const std::string& text) {
    if (text.empty()) throw Error("provider_embed: empty text");
    json payload = build_embedding_payload(text, config_);
    json res = post_json_with_retry(config_.endpoint, "/v1/embeddings", api_key_, payload, 3);
    try {
        Eigen::VectorXd v =
            vector_from_json(res.at("data").at(0).at("embedding"), "embedding response");
        if (dimension_ == 0) dimension_ = static_cast<int>(v.size());
        if (static_cast<int>(v.size()) != dimension_)
            throw ProviderError("embedding dimension changed mid-run", /*retryable=*/false);
        return normalized_or_throw(v);
    } catch (const json::exception& e) {
        throw ProviderError(std::string("malformed embedding response: ") + e.what(),
                            /*retryable=*/false);
    }
}

std::string HttpEmbeddingProvider::id() const {
    return "live:" + config_.endpoint + "#" + config_.model;
}

ProviderBundle make_providers(const std::string& replay_script_path, PipelineConfig& config) {
    ProviderBundle bundle;
    if (!replay_script_path.empty()) {
        std::string raw = read_text_file(replay_script_path);
        auto replay = std::make_shared<ReplayProvider>(parse_json(raw, replay_script_path),
                                                       replay_script_path);
        bundle.completion = replay;
        bundle.embedding = replay;
        bundle.replay = true;
        bundle.replay_script_hash = sha256_hex(raw);
        if (config.workers != 1) {
            log_info("replay mode pins workers to 1 for deterministic script consumption");
            config.workers = 1;
        }
        return bundle;
    }
    bundle.completion = std::make_shared<HttpCompletionProvider>(config);
    bundle.embedding = std::make_shared<HttpEmbeddingProvider>(config, 0);
    return bundle;
}

} // namespace stratforge
