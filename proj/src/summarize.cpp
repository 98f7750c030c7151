#include "stratforge/summarize.hpp"

#include "stratforge/embedding.hpp"
#include "stratforge/error.hpp"
#include "stratforge/prompts.hpp"

namespace stratforge {

std::vector<std::string> summarize_commit(const CommitRecord& commit,
                                          CompletionProvider& provider, int m) {
    if (m < 1) throw Error("summarize_commit: m must be >= 1");
    std::string prompt = summarize_prompt(commit);
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) out.push_back(provider.complete(prompt));
    return out;
}

StrategySummary select_summary(const std::vector<std::string>& candidates,
                               EmbeddingProvider& embedder) {
    if (candidates.empty()) throw Error("select_summary: no candidates");

    std::vector<Eigen::VectorXd> vecs;
    vecs.reserve(candidates.size());
    for (const std::string& c : candidates) vecs.push_back(embedder.embed(c));

    size_t best = 0;
    double best_avg = -2.0;
    const size_t m = candidates.size();
    for (size_t i = 0; i < m; ++i) {
        double sum = 0;
        for (size_t j = 0; j < m; ++j)
            if (j != i) sum += cosine_similarity(vecs[i], vecs[j]);
        double avg = m > 1 ? sum / static_cast<double>(m - 1) : 0.0;
        if (avg > best_avg) {  // strict: ties keep the lowest index
            best_avg = avg;
            best = i;
        }
    }

    StrategySummary s;
    s.text = candidates[best];
    s.embedding = vecs[best];
    s.candidate_texts = candidates;
    return s;
}

SummarizeResult summarize_all(const std::vector<CommitRecord>& commits,
                              CompletionProvider& provider, EmbeddingProvider& embedder, int m) {
    SummarizeResult result;
    for (const CommitRecord& commit : commits) {
        try {
            std::vector<std::string> candidates = summarize_commit(commit, provider, m);
            StrategySummary s = select_summary(candidates, embedder);
            s.commit_hash = commit.commit_hash;
            s.validate();
            result.summaries.push_back(std::move(s));
        } catch (const ReplayMiss&) {
            throw;  // an unscripted prompt is a broken replay script, not a provider outage
        } catch (const ProviderError& e) {
            log_warn("summarize: " + commit.commit_hash + " marked Unsummarized: " + e.what());
            result.unsummarized.push_back(commit.commit_hash);
        }
    }
    return result;
}

} // namespace stratforge
