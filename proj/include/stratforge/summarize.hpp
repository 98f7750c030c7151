#pragma once

#include <string>
#include <vector>

#include "stratforge/providers.hpp"
#include "stratforge/types.hpp"

namespace stratforge {

// m independent provider calls with the fixed summarization prompt, responses
// returned in call order.
std::vector<std::string> summarize_commit(const CommitRecord& commit,
                                          CompletionProvider& provider, int m);

// Embed every candidate and return the one with the highest average cosine
// similarity to the other m-1 (tie-break: lowest index; m=1: the sole
// candidate, average defined as 0). commit_hash is left empty for the caller.
StrategySummary select_summary(const std::vector<std::string>& candidates,
                               EmbeddingProvider& embedder);

struct SummarizeResult {
    std::vector<StrategySummary> summaries;       // commit order preserved
    std::vector<std::string> unsummarized;        // commit hashes skipped on provider failure
};

// Whole-batch driver; a provider failure marks that commit Unsummarized and
// moves on instead of failing the run.
SummarizeResult summarize_all(const std::vector<CommitRecord>& commits,
                              CompletionProvider& provider, EmbeddingProvider& embedder, int m);

} // namespace stratforge
