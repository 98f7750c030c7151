#pragma once

#include <string>
#include <vector>

#include "stratforge/types.hpp"

namespace stratforge {

// On-disk layout:
//   library_root/
//     index.json                      written last, so a crash never leaves an indexed
//     clusters/<cluster_id>/meta.json   library pointing at missing files
//     rules/<rule_id>.yaml
struct LibraryIndex {
    std::string version;
    json config_snapshot = json::object();
    std::uint64_t seed = 0;
    std::string embedder_id;
    int embedding_dim = 0;
    std::vector<std::string> cluster_ids;          // sorted
    std::vector<std::string> rule_ids;             // sorted
    std::vector<json> rule_meta;                   // AnalysisRule metadata, sorted by rule_id
    std::vector<std::string> ruleless_clusters;    // kept for provenance, never scanned
    double eps_distance = 0;  // 1 - eps_sim, the cosine-distance reading of the radius

    json to_json() const;
    static LibraryIndex from_json(const json& j, const std::string& ctx);
};

struct StrategyLibrary {
    LibraryIndex index;
    std::vector<StrategyCluster> clusters;  // sorted by cluster_id
    std::vector<AnalysisRule> rules;        // sorted by rule_id
};

// Validates rule->cluster references before touching disk, writes every file
// atomically (tmp + rename), index last.
void library_store_write(const std::string& library_root, const StrategyLibrary& lib);

StrategyLibrary library_store_read(const std::string& library_root);

} // namespace stratforge
