#include "stratforge/cluster.hpp"

#include <algorithm>
#include <deque>

#include "stratforge/embedding.hpp"
#include "stratforge/error.hpp"
#include "stratforge/hash.hpp"
#include "stratforge/text.hpp"

namespace stratforge {

namespace {
std::string content_cluster_id(std::vector<std::string> member_hashes) {
    std::sort(member_hashes.begin(), member_hashes.end());
    return "c" + sha256_hex_prefix(join(member_hashes, "\n"), 12);
}
} // namespace

ClusterResult cluster_summaries(const std::vector<StrategySummary>& summaries, double eps_sim,
                                int min_pts) {
    if (!(eps_sim > 0.0 && eps_sim < 1.0)) throw Error("eps_sim must be in (0,1)");
    ClusterResult result;
    if (summaries.empty()) return result;

    // canonical order: sort by commit hash so the partition is input-order free
    std::vector<const StrategySummary*> pts;
    pts.reserve(summaries.size());
    for (const StrategySummary& s : summaries) pts.push_back(&s);
    std::sort(pts.begin(), pts.end(), [](const StrategySummary* a, const StrategySummary* b) {
        return a->commit_hash < b->commit_hash;
    });

    const size_t n = pts.size();
    const Eigen::Index dim = pts[0]->embedding.size();
    for (const StrategySummary* p : pts)
        if (p->embedding.size() != dim)
            throw Error("cluster_summaries: embedding dimension mismatch for " + p->commit_hash);

    std::vector<std::vector<size_t>> neighbors(n);
    for (size_t i = 0; i < n; ++i) {
        neighbors[i].push_back(i);  // a point neighbors itself
        for (size_t j = i + 1; j < n; ++j) {
            if (cosine_similarity(pts[i]->embedding, pts[j]->embedding) >= eps_sim) {
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
            }
        }
        std::sort(neighbors[i].begin(), neighbors[i].end());
    }

    std::vector<bool> core(n);
    for (size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= static_cast<size_t>(min_pts);

    // BFS from each unassigned core point in index order; expansion proceeds
    // only through core points, border points are claimed by the first cluster
    // to reach them.
    constexpr int kUnassigned = -1;
    std::vector<int> assignment(n, kUnassigned);
    int next_cluster = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!core[i] || assignment[i] != kUnassigned) continue;
        int cid = next_cluster++;
        std::deque<size_t> queue{i};
        assignment[i] = cid;
        while (!queue.empty()) {
            size_t cur = queue.front();
            queue.pop_front();
            if (!core[cur]) continue;  // border: absorbed but not expanded
            for (size_t nb : neighbors[cur]) {
                if (assignment[nb] != kUnassigned) continue;
                assignment[nb] = cid;
                queue.push_back(nb);
            }
        }
    }

    std::vector<std::vector<std::string>> members(static_cast<size_t>(next_cluster));
    for (size_t i = 0; i < n; ++i) {
        if (assignment[i] == kUnassigned)
            result.noise.push_back(pts[i]->commit_hash);
        else
            members[static_cast<size_t>(assignment[i])].push_back(pts[i]->commit_hash);
    }

    for (std::vector<std::string>& m : members) {
        std::sort(m.begin(), m.end());
        StrategyCluster c;
        c.cluster_id = content_cluster_id(m);
        c.member_hashes = m;
        c.size = static_cast<int>(m.size());
        result.clusters.push_back(std::move(c));
    }
    std::sort(result.clusters.begin(), result.clusters.end(),
              [](const StrategyCluster& a, const StrategyCluster& b) {
                  if (a.size != b.size) return a.size > b.size;
                  return a.member_hashes.front() < b.member_hashes.front();
              });
    std::sort(result.noise.begin(), result.noise.end());
    return result;
}

std::string medoid_hash(const std::vector<std::string>& member_hashes,
                        const std::map<std::string, const StrategySummary*>& by_hash) {
    if (member_hashes.empty()) throw Error("medoid of empty cluster");
    std::vector<std::string> sorted = member_hashes;
    std::sort(sorted.begin(), sorted.end());

    std::string best;
    double best_avg = -2.0;
    for (const std::string& h : sorted) {
        auto it = by_hash.find(h);
        if (it == by_hash.end()) throw Error("medoid: no summary for member " + h);
        double sum = 0;
        for (const std::string& other : sorted) {
            if (other == h) continue;
            auto ot = by_hash.find(other);
            if (ot == by_hash.end()) throw Error("medoid: no summary for member " + other);
            sum += cosine_similarity(it->second->embedding, ot->second->embedding);
        }
        double avg = sorted.size() > 1 ? sum / static_cast<double>(sorted.size() - 1) : 0.0;
        if (avg > best_avg) {  // strict: ties keep the lowest hash (sorted order)
            best_avg = avg;
            best = h;
        }
    }
    return best;
}

std::vector<StrategyCluster> prune_clusters(const std::vector<StrategyCluster>& clusters,
                                            const std::vector<StrategySummary>& summaries,
                                            int min_cluster_size) {
    std::map<std::string, const StrategySummary*> by_hash;
    for (const StrategySummary& s : summaries) by_hash[s.commit_hash] = &s;

    std::vector<StrategyCluster> out;
    for (const StrategyCluster& c : clusters) {
        if (c.size < min_cluster_size) continue;
        StrategyCluster kept = c;
        kept.strategy_text = by_hash.at(medoid_hash(c.member_hashes, by_hash))->text;
        out.push_back(std::move(kept));
    }
    return out;
}

} // namespace stratforge
