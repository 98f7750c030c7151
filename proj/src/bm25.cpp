#include "stratforge/bm25.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "stratforge/error.hpp"

namespace stratforge {

std::vector<std::string> bm25_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        unsigned char u = static_cast<unsigned char>(ch);
        if (std::isalnum(u) || ch == '_') {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<RetrievedExample> bm25_retrieve(const std::string& query_code,
                                            const std::vector<CommitRecord>& knowledge_base,
                                            int k, const std::string& exclude_repo) {
    if (k < 1) throw Error("bm25: k must be >= 1");

    std::vector<const CommitRecord*> docs;
    for (const CommitRecord& c : knowledge_base)
        if (exclude_repo.empty() || c.repo_id != exclude_repo) docs.push_back(&c);
    if (docs.empty()) throw Error("bm25: knowledge base is empty after exclusion");

    const double k1 = 1.2;
    const double b = 0.75;

    std::vector<std::map<std::string, int>> tf(docs.size());
    std::vector<double> dl(docs.size());
    double total_len = 0;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        auto toks = bm25_tokenize(docs[i]->code_before);
        dl[i] = static_cast<double>(toks.size());
        total_len += dl[i];
        for (auto& t : toks) ++tf[i][t];
    }
    double avgdl = total_len / static_cast<double>(docs.size());
    if (avgdl <= 0) avgdl = 1;

    std::set<std::string> query_terms;
    for (auto& t : bm25_tokenize(query_code)) query_terms.insert(std::move(t));

    std::map<std::string, int> df;
    for (const auto& term : query_terms)
        for (std::size_t i = 0; i < docs.size(); ++i)
            if (tf[i].count(term)) ++df[term];

    double n = static_cast<double>(docs.size());
    std::vector<double> score(docs.size(), 0.0);
    for (const auto& term : query_terms) {
        auto dfit = df.find(term);
        if (dfit == df.end()) continue;
        double d = static_cast<double>(dfit->second);
        double idf = std::log(1.0 + (n - d + 0.5) / (d + 0.5));
        for (std::size_t i = 0; i < docs.size(); ++i) {
            auto it = tf[i].find(term);
            if (it == tf[i].end()) continue;
            double f = static_cast<double>(it->second);
            score[i] += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * dl[i] / avgdl));
        }
    }

    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return score[a] > score[c]; });
    std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());

    std::vector<RetrievedExample> out;
    out.reserve(take);
    for (std::size_t r = take; r > 0; --r)  // reversed: ascending similarity
        out.push_back({*docs[order[r - 1]], score[order[r - 1]]});
    return out;
}

} // namespace stratforge
