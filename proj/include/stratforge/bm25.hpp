#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stratforge/types.hpp"

namespace stratforge {

// Lowercased identifier/word tokens: maximal [A-Za-z0-9_] runs.
std::vector<std::string> bm25_tokenize(std::string_view text);

struct RetrievedExample {
    CommitRecord record;
    double score = 0;
};

// Okapi BM25 (k1=1.2, b=0.75, Lucene idf) over code_before. Entries whose
// repo_id equals exclude_repo are removed before scoring. Returns the top
// min(k, base) documents in ASCENDING score order — the prompt wants the most
// similar example last, closest to the query. Score ties keep insertion order
// during selection, so ranking is deterministic for a fixed base ordering and
// permutation-invariant whenever scores are distinct.
std::vector<RetrievedExample> bm25_retrieve(const std::string& query_code,
                                            const std::vector<CommitRecord>& knowledge_base,
                                            int k, const std::string& exclude_repo = "");

} // namespace stratforge
