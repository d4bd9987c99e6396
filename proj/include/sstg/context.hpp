#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sstg/fragments.hpp"

namespace sstg {

// The agent's short-term buffer: fragment key -> decaying relevance.
// An entry is buffered (visible) only while its decayed relevance sits
// at or above the floor; with a floor above the boost that means
// fragments repeated in quick succession. Entries keep accumulating
// below the floor so repetition can lift them into view, and are
// garbage-collected once they decay to a hundredth of the floor.
class RunningContext {
public:
    RunningContext(double forget_rate, double floor)
        : forget_rate_(forget_rate), floor_(floor) {}

    // Decays all entries to tick, boosts each fragment occurrence,
    // then sweeps entries below the floor.
    // Throws OrderingError when tick moves backwards.
    void update(const std::vector<Fragment>& fragments, std::int64_t tick, double boost);

    // Adds one key directly (narration seeds).
    void add_key(const std::string& key, std::int64_t tick, double boost);

    // Buffered membership: decayed relevance at or above the floor.
    bool contains(const std::string& key) const;

    // Number of buffered fragments.
    std::size_t size() const;
    std::int64_t tick() const { return tick_; }

    // Total word length of all buffered fragments (the nu numerator
    // sample for the current tick).
    std::uint64_t pool_words() const;

    // Buffered fragments as (key, relevance), sorted by key.
    std::vector<std::pair<std::string, double>> snapshot() const;

    // Buffered keys, sorted.
    std::vector<std::string> keys() const;

    void clear();

    // Workspace persistence.
    struct Entry {
        double relevance = 0.0;
        std::int64_t last_tick = 0;
        int n = 0;
    };
    std::vector<std::pair<std::string, Entry>> sorted_entries() const;
    void restore_entry(const std::string& key, const Entry& e) { entries_[key] = e; }
    void set_tick(std::int64_t tick) { tick_ = tick; }
    double forget_rate() const { return forget_rate_; }
    double floor() const { return floor_; }

private:
    void sweep();
    double decayed(const Entry& e) const;

    double forget_rate_;
    double floor_;
    std::int64_t tick_ = -1;
    std::unordered_map<std::string, Entry> entries_;
};

// Importance of a sentence: the sum over its fragment occurrences of
// the store's decayed relevance, doubled (coactivation_weight) for
// fragments that were already present in the running context.
// The context passed here must not yet include this sentence.
double score_sentence(const std::vector<Fragment>& fragments, const FragmentStore& store,
                      const RunningContext& ctx, std::int64_t tick, double coactivation_weight);

// Exact running quantile: keeps the ceil((1-q)*n) largest scores in a
// top set and the rest below, rebalancing as the stream grows. The
// estimate is the smallest member of the top set, i.e. the exact
// empirical q-quantile. Memory is one double per observation, which
// is what desk scale affords in exchange for an unbiased tail.
class QuantileEstimator {
public:
    explicit QuantileEstimator(double quantile);

    void update(double x);
    bool primed() const { return count_ >= 5; }
    double estimate() const;
    std::uint64_t count() const { return count_; }

    // Persistence.
    double quantile() const { return q_; }
    std::vector<double> state() const;
    void restore(const std::vector<double>& state);

private:
    std::uint64_t target_top_size() const;
    void rebalance();

    double q_;
    std::uint64_t count_ = 0;
    std::multiset<double> top_;   // the k largest scores seen
    std::multiset<double> rest_;  // everything below the top set
};

// Adaptive importance cutoff holding the retained fraction near
// target_density. Sentences scoring at or above the running
// (1 - density) quantile are retained; the estimator warms up on the
// first five sentences, which are retained.
class SelectionPolicy {
public:
    explicit SelectionPolicy(double target_density);

    // Decides on the current score, then feeds it to the estimator.
    bool decide(double score);

    double target_density() const { return density_; }
    QuantileEstimator& estimator() { return est_; }
    const QuantileEstimator& estimator() const { return est_; }

private:
    double density_;
    QuantileEstimator est_;
};

struct ContextRatio {
    double nu = 0.0;
    std::uint64_t window = 0;
};

// nu = (mean buffered fragment words per sentence) / (mean sentence
// word length), over a window of per-sentence samples.
// Throws DomainError on an empty window or zero total sentence length.
ContextRatio context_ratio(std::uint64_t pool_word_sum, std::uint64_t sentence_word_sum,
                           std::uint64_t window);

}  // namespace sstg
