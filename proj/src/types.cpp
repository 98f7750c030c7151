#include "stratforge/types.hpp"

#include <cmath>

#include "stratforge/diff.hpp"
#include "stratforge/error.hpp"

namespace stratforge {

namespace {
bool is_lower_hex_40(const std::string& s) {
    if (s.size() != 40) return false;
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}
} // namespace

std::string language_name(Language lang) {
    return lang == Language::C ? "C" : "CPP";
}

Language language_from_name(const std::string& name) {
    if (name == "C" || name == "c") return Language::C;
    if (name == "CPP" || name == "C++" || name == "cpp") return Language::CPP;
    throw Error("unknown language: " + name);
}

void CommitRecord::validate() const {
    if (!is_lower_hex_40(commit_hash))
        throw Error("commit_hash must be 40 lowercase hex chars: '" + commit_hash + "'");
    if (code_before == code_after)
        throw Error("commit " + commit_hash + ": code_before equals code_after");
    std::string applied = apply_unified_diff(code_before, diff);
    if (applied != code_after)
        throw Error("commit " + commit_hash + ": diff does not transform code_before into code_after");
}

json CommitRecord::to_json() const {
    return json{{"repo_id", repo_id},
                {"commit_hash", commit_hash},
                {"message", message},
                {"function_name", function_name},
                {"code_before", code_before},
                {"code_after", code_after},
                {"diff", diff},
                {"language", language_name(language)}};
}

CommitRecord CommitRecord::from_json(const json& j, const std::string& ctx) {
    CommitRecord c;
    c.repo_id = require_field(j, "repo_id", ctx).get<std::string>();
    c.commit_hash = require_field(j, "commit_hash", ctx).get<std::string>();
    c.message = require_field(j, "message", ctx).get<std::string>();
    c.function_name = require_field(j, "function_name", ctx).get<std::string>();
    c.code_before = require_field(j, "code_before", ctx).get<std::string>();
    c.code_after = require_field(j, "code_after", ctx).get<std::string>();
    c.diff = require_field(j, "diff", ctx).get<std::string>();
    c.language = language_from_name(require_field(j, "language", ctx).get<std::string>());
    return c;
}

void StrategySummary::validate() const {
    if (embedding.size() == 0) throw Error("summary " + commit_hash + ": empty embedding");
    double norm = embedding.norm();
    if (std::abs(norm - 1.0) > 1e-6)
        throw Error("summary " + commit_hash + ": embedding norm " + std::to_string(norm) +
                    " not within 1e-6 of 1");
    for (const std::string& c : candidate_texts)
        if (c == text) return;
    throw Error("summary " + commit_hash + ": text is not one of candidate_texts");
}

json StrategySummary::to_json() const {
    json cands = json::array();
    for (const std::string& c : candidate_texts) cands.push_back(c);
    return json{{"commit_hash", commit_hash},
                {"text", text},
                {"embedding", vector_to_json(embedding)},
                {"candidate_texts", cands}};
}

StrategySummary StrategySummary::from_json(const json& j, const std::string& ctx) {
    StrategySummary s;
    s.commit_hash = require_field(j, "commit_hash", ctx).get<std::string>();
    s.text = require_field(j, "text", ctx).get<std::string>();
    s.embedding = vector_from_json(require_field(j, "embedding", ctx), ctx);
    for (const json& c : require_field(j, "candidate_texts", ctx))
        s.candidate_texts.push_back(c.get<std::string>());
    return s;
}

json StrategyCluster::to_json() const {
    json members = json::array();
    for (const std::string& h : member_hashes) members.push_back(h);
    return json{{"strategy_text", strategy_text}, {"member_hashes", members}, {"size", size}};
}

StrategyCluster StrategyCluster::from_json(const json& j, const std::string& ctx) {
    StrategyCluster c;
    c.strategy_text = require_field(j, "strategy_text", ctx).get<std::string>();
    for (const json& m : require_field(j, "member_hashes", ctx))
        c.member_hashes.push_back(m.get<std::string>());
    c.size = require_field(j, "size", ctx).get<int>();
    if (c.size != static_cast<int>(c.member_hashes.size()))
        throw Error(ctx + ": size does not match member_hashes length");
    return c;
}

std::string rule_status_name(RuleStatus s) {
    return s == RuleStatus::Validated ? "Validated" : "Failed";
}

RuleStatus rule_status_from_name(const std::string& name) {
    if (name == "Validated") return RuleStatus::Validated;
    if (name == "Failed") return RuleStatus::Failed;
    throw Error("unknown rule status: " + name);
}

json AnalysisRule::meta_to_json() const {
    return json{{"rule_id", rule_id},
                {"cluster_id", cluster_id},
                {"source_commit", source_commit},
                {"source_repo", source_repo},
                {"attempt_index", attempt_index},
                {"iterations_used", iterations_used},
                {"status", rule_status_name(status)}};
}

AnalysisRule AnalysisRule::meta_from_json(const json& j, const std::string& ctx) {
    AnalysisRule r;
    r.rule_id = require_field(j, "rule_id", ctx).get<std::string>();
    r.cluster_id = require_field(j, "cluster_id", ctx).get<std::string>();
    r.source_commit = require_field(j, "source_commit", ctx).get<std::string>();
    r.source_repo = require_field(j, "source_repo", ctx).get<std::string>();
    r.attempt_index = require_field(j, "attempt_index", ctx).get<int>();
    r.iterations_used = require_field(j, "iterations_used", ctx).get<int>();
    r.status = rule_status_from_name(require_field(j, "status", ctx).get<std::string>());
    return r;
}

void PipelineConfig::validate() const {
    auto positive = [](int v, const char* name) {
        if (v < 1) throw ConfigError(std::string(name) + " must be >= 1");
    };
    positive(m_summaries, "m_summaries");
    positive(min_cluster_size, "min_cluster_size");
    positive(n_sample_commits, "n_sample_commits");
    positive(n_attempts, "n_attempts");
    positive(max_iterations, "max_iterations");
    positive(top_k_locations, "top_k_locations");
    positive(min_pts, "min_pts");
    positive(workers, "workers");
    if (!(eps_sim > 0.0 && eps_sim < 1.0)) throw ConfigError("eps_sim must be in (0,1)");
    if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
}

json PipelineConfig::to_json() const {
    return json{{"m_summaries", m_summaries},
                {"eps_sim", eps_sim},
                {"min_cluster_size", min_cluster_size},
                {"n_sample_commits", n_sample_commits},
                {"n_attempts", n_attempts},
                {"max_iterations", max_iterations},
                {"top_k_locations", top_k_locations},
                {"temperature", temperature},
                {"min_pts", min_pts},
                {"seed", seed},
                {"workers", workers},
                {"engine_path", engine_path},
                {"endpoint", endpoint},
                {"model", model},
                {"api_key_env", api_key_env}};
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig c;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "m_summaries") c.m_summaries = v.get<int>();
        else if (k == "eps_sim") c.eps_sim = v.get<double>();
        else if (k == "min_cluster_size") c.min_cluster_size = v.get<int>();
        else if (k == "n_sample_commits") c.n_sample_commits = v.get<int>();
        else if (k == "n_attempts") c.n_attempts = v.get<int>();
        else if (k == "max_iterations") c.max_iterations = v.get<int>();
        else if (k == "top_k_locations") c.top_k_locations = v.get<int>();
        else if (k == "temperature") c.temperature = v.get<double>();
        else if (k == "min_pts") c.min_pts = v.get<int>();
        else if (k == "seed") c.seed = v.get<std::uint64_t>();
        else if (k == "workers") c.workers = v.get<int>();
        else if (k == "engine_path") c.engine_path = v.get<std::string>();
        else if (k == "endpoint") c.endpoint = v.get<std::string>();
        else if (k == "model") c.model = v.get<std::string>();
        else if (k == "api_key_env") c.api_key_env = v.get<std::string>();
        else throw ConfigError("unknown config key: " + k);
    }
    c.validate();
    return c;
}

json ScanHit::to_json() const {
    return json{{"rule_id", rule_id},
                {"cluster_id", cluster_id},
                {"file_path", file_path},
                {"start_line", start_line},
                {"end_line", end_line}};
}

ScanHit ScanHit::from_json(const json& j, const std::string& ctx) {
    ScanHit h;
    h.rule_id = require_field(j, "rule_id", ctx).get<std::string>();
    h.cluster_id = require_field(j, "cluster_id", ctx).get<std::string>();
    h.file_path = require_field(j, "file_path", ctx).get<std::string>();
    h.start_line = require_field(j, "start_line", ctx).get<int>();
    h.end_line = require_field(j, "end_line", ctx).get<int>();
    if (h.start_line < 1 || h.end_line < h.start_line)
        throw Error(ctx + ": invalid line range");
    return h;
}

json RankedLocation::to_json() const {
    return json{{"file_path", file_path},
                {"function_name", function_name},
                {"start_line", start_line},
                {"end_line", end_line},
                {"cluster_id", cluster_id},
                {"hit_count", hit_count}};
}

RankedLocation RankedLocation::from_json(const json& j, const std::string& ctx) {
    RankedLocation loc;
    loc.file_path = require_field(j, "file_path", ctx).get<std::string>();
    loc.function_name = require_field(j, "function_name", ctx).get<std::string>();
    loc.start_line = require_field(j, "start_line", ctx).get<int>();
    loc.end_line = require_field(j, "end_line", ctx).get<int>();
    loc.cluster_id = require_field(j, "cluster_id", ctx).get<std::string>();
    loc.hit_count = require_field(j, "hit_count", ctx).get<int>();
    if (loc.start_line < 1 || loc.end_line < loc.start_line)
        throw ParseError(ctx + ": bad line range", 0);
    if (loc.hit_count < 1) throw ParseError(ctx + ": hit_count must be >= 1", 0);
    return loc;
}

std::string ablation_mode_name(AblationMode m) {
    switch (m) {
        case AblationMode::Full: return "full";
        case AblationMode::NoLocation: return "no-location";
        case AblationMode::NoStrategy: return "no-strategy";
    }
    return "full";
}

AblationMode ablation_mode_from_name(const std::string& name) {
    if (name == "full") return AblationMode::Full;
    if (name == "no-location") return AblationMode::NoLocation;
    if (name == "no-strategy") return AblationMode::NoStrategy;
    throw Error("unknown ablation mode: " + name + " (expected full|no-location|no-strategy)");
}

json OptimizationCandidate::to_json() const {
    return json{{"file_path", file_path},
                {"function_name", function_name},
                {"start_line", start_line},
                {"end_line", end_line},
                {"strategy_text", strategy_text},
                {"original_code", original_code},
                {"optimized_code", optimized_code},
                {"diff", diff},
                {"ablation_mode", ablation_mode_name(ablation_mode)}};
}

void BenchTask::validate() const {
    if (code_before == code_after)
        throw Error("bench task " + commit_hash + ": code_before equals code_after");
}

json BenchTask::to_json() const {
    return json{{"repo_id", repo_id},
                {"commit_hash", commit_hash},
                {"code_before", code_before},
                {"code_after", code_after}};
}

BenchTask BenchTask::from_json(const json& j, const std::string& ctx) {
    BenchTask t;
    t.repo_id = require_field(j, "repo_id", ctx).get<std::string>();
    t.commit_hash = require_field(j, "commit_hash", ctx).get<std::string>();
    t.code_before = require_field(j, "code_before", ctx).get<std::string>();
    t.code_after = require_field(j, "code_after", ctx).get<std::string>();
    t.validate();
    return t;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw Error(ctx + ": embedding must be a JSON array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    Eigen::Index i = 0;
    for (const json& x : j) v[i++] = x.get<double>();
    return v;
}

} // namespace stratforge
