#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sstg/ingest.hpp"

namespace sstg {

// An n-phrase: a contiguous window of n tokens bounded by a sentence.
// The key is the words joined by single spaces, which round-trips
// because tokens never contain whitespace.
struct Fragment {
    std::string key;
    int n = 0;

    std::vector<std::string> words() const;
};

// Rebuilds the word count of a key (spaces + 1). Keys are never empty.
int fragment_length(const std::string& key);

// Every contiguous window of 1..n_max tokens within the sentence.
// A w-token sentence yields max(0, w-n+1) fragments at each n.
std::vector<Fragment> fractionate(const std::vector<Token>& tokens, int n_max);

struct FragmentStats {
    std::uint64_t count = 0;
    double relevance = 0.0;
    std::int64_t last_tick = 0;
    int n = 0;
};

struct InvariantRow {
    std::string key;
    int n = 0;
    std::uint64_t count = 0;
    double relevance = 0.0;
};

// Longitudinal store of fragment statistics with lazy exponential
// decay: relevance is multiplied by forget_rate for every tick that
// passed since the fragment was last observed, then boosted. Entries
// that are never re-observed keep their count forever but fade until
// prune() collects them.
class FragmentStore {
public:
    explicit FragmentStore(double forget_rate) : forget_rate_(forget_rate) {}

    // Applies decay + boost + count for each fragment occurrence.
    // Throws OrderingError when tick moves backwards.
    void observe(const std::vector<Fragment>& fragments, std::int64_t tick, double boost);

    // Decayed relevance as of tick; 0 for unknown keys. Read-only.
    double relevance_at(const std::string& key, std::int64_t tick) const;

    std::uint64_t count_of(const std::string& key) const;
    bool contains(const std::string& key) const { return entries_.count(key) != 0; }

    // Fragments with decayed relevance >= min_relevance and
    // count >= min_count, sorted by (count desc, key asc).
    std::vector<InvariantRow> invariants(std::int64_t tick, std::uint64_t min_count,
                                         double min_relevance) const;

    // Drops entries whose decayed relevance fell below floor, except
    // anything observed at the current tick. Returns how many entries
    // were removed. Throws ConfigError when floor <= 0.
    std::size_t prune(std::int64_t tick, double floor);

    std::size_t size() const { return entries_.size(); }
    std::int64_t tick() const { return tick_; }
    double forget_rate() const { return forget_rate_; }

    // Deterministic dump of the full store, sorted by key; used for
    // workspace persistence.
    std::vector<std::pair<std::string, FragmentStats>> sorted_entries() const;
    void restore_entry(const std::string& key, const FragmentStats& stats);
    void set_tick(std::int64_t tick) { tick_ = tick; }

    // Repeat rate for the given phrase length: the fraction of
    // distinct fragments of that length with count >= 2.
    double repeat_rate(int n) const;

private:
    double forget_rate_;
    std::int64_t tick_ = -1;
    std::unordered_map<std::string, FragmentStats> entries_;
};

// One line per fragment: "<count>\t<n>\t<key>", LF endings, sorted by
// (count desc, key asc).
std::string format_invariant_dump(const std::vector<InvariantRow>& rows);

}  // namespace sstg
