#pragma once

#include <string>
#include <vector>

#include "stratforge/json_io.hpp"
#include "stratforge/miner.hpp"
#include "stratforge/types.hpp"

namespace stratforge::testing {

// Deterministic 40-hex commit hash, distinct per n.
std::string fake_hash(int n);

// CommitRecord whose diff is regenerated at function granularity so
// validate() passes.
CommitRecord make_commit(const std::string& repo, int hash_n, const std::string& message,
                         const std::string& function_name, const std::string& code_before,
                         const std::string& code_after);

// Replay-script builder keyed the same way the replay provider looks entries
// up (SHA-256 of the exact prompt / text).
class ReplayScript {
public:
    ReplayScript& embedder(const std::string& id, int dim);
    ReplayScript& completion(const std::string& prompt, const std::string& response);
    ReplayScript& completion_list(const std::string& prompt,
                                  const std::vector<std::string>& responses);
    ReplayScript& embedding(const std::string& text, const std::vector<double>& v);
    json to_json() const;
    std::string write(const std::string& path) const;

private:
    json completions_ = json::object();
    json embeddings_ = json::object();
    std::string embedder_id_ = "replay-embedder";
    int dim_ = 8;
};

// A small mixed corpus: two real strategy groups (a condition-reorder family
// of five commits and a strlen-hoist family of four), three one-off
// strategies that should end up as clustering noise, and four raw commits the
// miner must reject (no keyword, two functions changed, verifier says NO,
// duplicate message).
struct FixtureCorpus {
    std::vector<RawCommit> raw;       // corpus order, 16 entries
    std::vector<CommitRecord> mined;  // the 12 expected survivors, corpus order

    std::vector<std::string> swap_hashes;   // commit hashes per strategy group
    std::vector<std::string> hoist_hashes;
    std::vector<std::string> noise_hashes;

    std::string summary_swap;   // scripted one-sentence summaries
    std::string summary_hoist;
    std::vector<std::string> summary_noise;

    std::string rule_pattern_swap;   // patterns inside the scripted rules
    std::string rule_pattern_hoist;
};

FixtureCorpus make_fixture_corpus();

// Writes the raw corpus as dir/commits.jsonl.
void write_corpus_dir(const std::string& dir, const FixtureCorpus& fc);

// Replay entries covering mine + summarize + cluster + rules for the fixture.
ReplayScript make_fixture_replay(const FixtureCorpus& fc);

} // namespace stratforge::testing
