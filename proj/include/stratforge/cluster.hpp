#pragma once

#include <map>
#include <string>
#include <vector>

#include "stratforge/types.hpp"

namespace stratforge {

struct ClusterResult {
    std::vector<StrategyCluster> clusters;  // sorted: size desc, then smallest member hash
    std::vector<std::string> noise;         // commit hashes, sorted
};

// DBSCAN over summaries where the neighborhood predicate is
// cosine_similarity >= eps_sim (cosine distance <= 1 - eps_sim). A point is a
// core point iff it has >= min_pts neighbors counting itself; clusters are
// maximal density-connected sets grown core-first in canonical (commit hash)
// order, so border points attach to the earliest-created adjacent cluster.
// cluster_id = "c" + first 12 hex of SHA-256 over the sorted member hashes —
// content-derived, so identical inputs get identical ids. strategy_text is
// left empty; prune_clusters assigns the medoid's summary.
ClusterResult cluster_summaries(const std::vector<StrategySummary>& summaries, double eps_sim,
                                int min_pts);

// Drops clusters below min_cluster_size and stamps each survivor's
// strategy_text with its medoid member's summary (highest average similarity
// to co-members; tie-break lowest hash).
std::vector<StrategyCluster> prune_clusters(const std::vector<StrategyCluster>& clusters,
                                            const std::vector<StrategySummary>& summaries,
                                            int min_cluster_size);

// The medoid member hash of the given member set.
std::string medoid_hash(const std::vector<std::string>& member_hashes,
                        const std::map<std::string, const StrategySummary*>& by_hash);

} // namespace stratforge
