#include "stratforge/library_store.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "stratforge/error.hpp"
#include "stratforge/text.hpp"
#include "stratforge/version.hpp"

namespace fs = std::filesystem;

namespace stratforge {

json LibraryIndex::to_json() const {
    json j{{"version", version},
           {"config", config_snapshot},
           {"seed", seed},
           {"embedder_id", embedder_id},
           {"embedding_dim", embedding_dim},
           {"eps_distance", eps_distance},
           {"cluster_ids", cluster_ids},
           {"rule_ids", rule_ids},
           {"ruleless_clusters", ruleless_clusters}};
    j["rules"] = rule_meta;
    return j;
}

LibraryIndex LibraryIndex::from_json(const json& j, const std::string& ctx) {
    LibraryIndex idx;
    idx.version = require_field(j, "version", ctx).get<std::string>();
    idx.config_snapshot = require_field(j, "config", ctx);
    idx.seed = require_field(j, "seed", ctx).get<std::uint64_t>();
    idx.embedder_id = require_field(j, "embedder_id", ctx).get<std::string>();
    idx.embedding_dim = require_field(j, "embedding_dim", ctx).get<int>();
    idx.eps_distance = require_field(j, "eps_distance", ctx).get<double>();
    for (const json& c : require_field(j, "cluster_ids", ctx))
        idx.cluster_ids.push_back(c.get<std::string>());
    for (const json& r : require_field(j, "rule_ids", ctx))
        idx.rule_ids.push_back(r.get<std::string>());
    for (const json& r : require_field(j, "rules", ctx)) idx.rule_meta.push_back(r);
    for (const json& c : require_field(j, "ruleless_clusters", ctx))
        idx.ruleless_clusters.push_back(c.get<std::string>());
    return idx;
}

void library_store_write(const std::string& library_root, const StrategyLibrary& lib) {
    // validate references before any write
    std::set<std::string> cluster_ids;
    for (const StrategyCluster& c : lib.clusters) {
        if (c.cluster_id.empty()) throw Error("cluster with empty id");
        if (!cluster_ids.insert(c.cluster_id).second)
            throw Error("duplicate cluster id: " + c.cluster_id);
    }
    std::set<std::string> rule_ids;
    for (const AnalysisRule& r : lib.rules) {
        if (!cluster_ids.count(r.cluster_id))
            throw Error("rule " + r.rule_id + " references unknown cluster " + r.cluster_id);
        if (!rule_ids.insert(r.rule_id).second) throw Error("duplicate rule id: " + r.rule_id);
    }

    fs::create_directories(fs::path(library_root) / "clusters");
    fs::create_directories(fs::path(library_root) / "rules");

    std::vector<StrategyCluster> clusters = lib.clusters;
    std::sort(clusters.begin(), clusters.end(),
              [](const StrategyCluster& a, const StrategyCluster& b) {
                  return a.cluster_id < b.cluster_id;
              });
    std::vector<AnalysisRule> rules = lib.rules;
    std::sort(rules.begin(), rules.end(),
              [](const AnalysisRule& a, const AnalysisRule& b) { return a.rule_id < b.rule_id; });

    for (const AnalysisRule& r : rules) {
        std::string path = (fs::path(library_root) / "rules" / (r.rule_id + ".yaml")).string();
        write_text_file_atomic(path, r.yaml_text);
    }
    for (const StrategyCluster& c : clusters) {
        fs::path dir = fs::path(library_root) / "clusters" / c.cluster_id;
        fs::create_directories(dir);
        write_json_file((dir / "meta.json").string(), c.to_json());
    }

    LibraryIndex idx = lib.index;
    idx.version = idx.version.empty() ? kVersion : idx.version;
    idx.cluster_ids.clear();
    for (const StrategyCluster& c : clusters) idx.cluster_ids.push_back(c.cluster_id);
    idx.rule_ids.clear();
    idx.rule_meta.clear();
    for (const AnalysisRule& r : rules) {
        idx.rule_ids.push_back(r.rule_id);
        idx.rule_meta.push_back(r.meta_to_json());
    }
    std::sort(idx.ruleless_clusters.begin(), idx.ruleless_clusters.end());
    write_json_file((fs::path(library_root) / "index.json").string(), idx.to_json());
}

StrategyLibrary library_store_read(const std::string& library_root) {
    StrategyLibrary lib;
    std::string index_path = (fs::path(library_root) / "index.json").string();
    lib.index = LibraryIndex::from_json(read_json_file(index_path), index_path);

    for (const std::string& cid : lib.index.cluster_ids) {
        std::string meta_path =
            (fs::path(library_root) / "clusters" / cid / "meta.json").string();
        StrategyCluster c = StrategyCluster::from_json(read_json_file(meta_path), meta_path);
        c.cluster_id = cid;
        lib.clusters.push_back(std::move(c));
    }
    std::set<std::string> seen;
    for (const json& meta : lib.index.rule_meta) {
        AnalysisRule r = AnalysisRule::meta_from_json(meta, index_path);
        if (!seen.insert(r.rule_id).second)
            throw Error(index_path + ": rule listed twice: " + r.rule_id);
        r.yaml_text =
            read_text_file((fs::path(library_root) / "rules" / (r.rule_id + ".yaml")).string());
        lib.rules.push_back(std::move(r));
    }
    if (lib.index.rule_ids.size() != lib.rules.size())
        throw Error(index_path + ": rule_ids and rules disagree");
    return lib;
}

} // namespace stratforge
