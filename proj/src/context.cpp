#include "sstg/context.hpp"

#include <algorithm>
#include <cmath>

#include "sstg/errors.hpp"

namespace sstg {

void RunningContext::update(const std::vector<Fragment>& fragments, std::int64_t tick,
                            double boost) {
    if (tick < tick_)
        throw OrderingError("running context tick moved backwards: " + std::to_string(tick) +
                            " after " + std::to_string(tick_));
    tick_ = tick;
    for (const Fragment& f : fragments) {
        Entry& e = entries_[f.key];
        if (e.n == 0) {
            e.n = f.n;
            e.relevance = boost;
        } else {
            e.relevance = e.relevance * std::pow(forget_rate_, double(tick - e.last_tick)) + boost;
        }
        e.last_tick = tick;
    }
    sweep();
}

void RunningContext::add_key(const std::string& key, std::int64_t tick, double boost) {
    if (tick < tick_)
        throw OrderingError("running context tick moved backwards");
    tick_ = tick;
    Entry& e = entries_[key];
    if (e.n == 0) {
        e.n = fragment_length(key);
        e.relevance = boost;
    } else {
        e.relevance = e.relevance * std::pow(forget_rate_, double(tick - e.last_tick)) + boost;
    }
    e.last_tick = tick;
}

double RunningContext::decayed(const Entry& e) const {
    return e.relevance *
           std::pow(forget_rate_, double(std::max<std::int64_t>(0, tick_ - e.last_tick)));
}

void RunningContext::sweep() {
    // sub-floor entries stay as invisible accumulators until they fall
    // to a hundredth of the floor
    const double gc_floor = floor_ * 0.01;
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (decayed(it->second) < gc_floor)
            it = entries_.erase(it);
        else
            ++it;
    }
}

bool RunningContext::contains(const std::string& key) const {
    auto it = entries_.find(key);
    return it != entries_.end() && decayed(it->second) >= floor_;
}

std::size_t RunningContext::size() const {
    std::size_t n = 0;
    for (const auto& [key, e] : entries_)
        if (decayed(e) >= floor_) ++n;
    return n;
}

std::uint64_t RunningContext::pool_words() const {
    std::uint64_t total = 0;
    for (const auto& [key, e] : entries_)
        if (decayed(e) >= floor_) total += static_cast<std::uint64_t>(e.n);
    return total;
}

std::vector<std::pair<std::string, double>> RunningContext::snapshot() const {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [key, e] : entries_) {
        double rel = decayed(e);
        if (rel >= floor_) out.emplace_back(key, rel);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

std::vector<std::string> RunningContext::keys() const {
    std::vector<std::string> out;
    for (const auto& [key, e] : entries_)
        if (decayed(e) >= floor_) out.push_back(key);
    std::sort(out.begin(), out.end());
    return out;
}

void RunningContext::clear() {
    entries_.clear();
    // tick is preserved: time does not rewind when attention resets
}

std::vector<std::pair<std::string, RunningContext::Entry>> RunningContext::sorted_entries()
    const {
    std::vector<std::pair<std::string, Entry>> rows(entries_.begin(), entries_.end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
}

double score_sentence(const std::vector<Fragment>& fragments, const FragmentStore& store,
                      const RunningContext& ctx, std::int64_t tick,
                      double coactivation_weight) {
    double score = 0.0;
    for (const Fragment& f : fragments) {
        double rel = store.relevance_at(f.key, tick);
        score += ctx.contains(f.key) ? rel * coactivation_weight : rel;
    }
    return score;
}

QuantileEstimator::QuantileEstimator(double quantile) : q_(quantile) {}

std::uint64_t QuantileEstimator::target_top_size() const {
    if (count_ == 0) return 0;
    double tail = (1.0 - q_) * double(count_);
    auto k = static_cast<std::uint64_t>(tail + 0.5);
    return std::max<std::uint64_t>(1, std::min(k == 0 ? 1 : k, count_));
}

void QuantileEstimator::rebalance() {
    std::uint64_t k = target_top_size();
    while (top_.size() > k) {
        auto it = top_.begin();  // smallest of the top set
        rest_.insert(*it);
        top_.erase(it);
    }
    while (top_.size() < k && !rest_.empty()) {
        auto it = std::prev(rest_.end());  // largest below
        top_.insert(*it);
        rest_.erase(it);
    }
}

void QuantileEstimator::update(double x) {
    ++count_;
    if (!top_.empty() && x >= *top_.begin())
        top_.insert(x);
    else
        rest_.insert(x);
    rebalance();
}

double QuantileEstimator::estimate() const {
    if (top_.empty()) return 0.0;
    return *top_.begin();
}

std::vector<double> QuantileEstimator::state() const {
    std::vector<double> out;
    out.push_back(double(count_));
    out.push_back(double(top_.size()));
    for (double v : top_) out.push_back(v);
    for (double v : rest_) out.push_back(v);
    return out;
}

void QuantileEstimator::restore(const std::vector<double>& state) {
    if (state.size() < 2) throw ParseError("estimator state must hold count and top size");
    count_ = static_cast<std::uint64_t>(state[0]);
    auto top_size = static_cast<std::size_t>(state[1]);
    if (state.size() != 2 + count_)
        throw ParseError("estimator state does not match its count");
    top_.clear();
    rest_.clear();
    for (std::size_t i = 0; i < count_; ++i) {
        if (i < top_size) top_.insert(state[2 + i]);
        else rest_.insert(state[2 + i]);
    }
}

SelectionPolicy::SelectionPolicy(double target_density)
    : density_(target_density), est_(1.0 - target_density) {
    if (!(target_density > 0.0 && target_density <= 1.0))
        throw ConfigError("target_density must be in (0,1]");
}

bool SelectionPolicy::decide(double score) {
    if (density_ >= 1.0) {
        est_.update(score);
        return true;
    }
    bool keep = !est_.primed() || score >= est_.estimate();
    est_.update(score);
    return keep;
}

ContextRatio context_ratio(std::uint64_t pool_word_sum, std::uint64_t sentence_word_sum,
                           std::uint64_t window) {
    if (window == 0) throw DomainError("context ratio window is empty");
    if (sentence_word_sum == 0)
        throw DomainError("context ratio undefined: average sentence length is zero");
    ContextRatio r;
    r.window = window;
    r.nu = double(pool_word_sum) / double(sentence_word_sum);
    return r;
}

}  // namespace sstg
