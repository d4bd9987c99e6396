#include "sstg/fragments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sstg/errors.hpp"

namespace sstg {

std::vector<std::string> Fragment::words() const {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= key.size()) {
        std::size_t sp = key.find(' ', start);
        if (sp == std::string::npos) {
            out.push_back(key.substr(start));
            break;
        }
        out.push_back(key.substr(start, sp - start));
        start = sp + 1;
    }
    return out;
}

int fragment_length(const std::string& key) {
    return 1 + static_cast<int>(std::count(key.begin(), key.end(), ' '));
}

std::vector<Fragment> fractionate(const std::vector<Token>& tokens, int n_max) {
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    const int w = static_cast<int>(tokens.size());
    std::vector<Fragment> out;
    if (w == 0) return out;
    out.reserve(static_cast<std::size_t>(w) * static_cast<std::size_t>(std::min(n_max, w)));
    for (int n = 1; n <= std::min(n_max, w); ++n) {
        for (int start = 0; start + n <= w; ++start) {
            Fragment f;
            f.n = n;
            std::size_t bytes = static_cast<std::size_t>(n - 1);
            for (int k = 0; k < n; ++k) bytes += tokens[start + k].text.size();
            f.key.reserve(bytes);
            for (int k = 0; k < n; ++k) {
                if (k) f.key.push_back(' ');
                f.key += tokens[start + k].text;
            }
            out.push_back(std::move(f));
        }
    }
    return out;
}

void FragmentStore::observe(const std::vector<Fragment>& fragments, std::int64_t tick,
                            double boost) {
    if (tick < tick_)
        throw OrderingError("fragment store tick moved backwards: " + std::to_string(tick) +
                            " after " + std::to_string(tick_));
    tick_ = tick;
    for (const Fragment& f : fragments) {
        FragmentStats& st = entries_[f.key];
        if (st.count == 0) {
            st.n = f.n;
            st.relevance = boost;
        } else {
            st.relevance =
                st.relevance * std::pow(forget_rate_, double(tick - st.last_tick)) + boost;
        }
        st.last_tick = tick;
        st.count += 1;
    }
}

double FragmentStore::relevance_at(const std::string& key, std::int64_t tick) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return 0.0;
    const FragmentStats& st = it->second;
    if (tick <= st.last_tick) return st.relevance;
    return st.relevance * std::pow(forget_rate_, double(tick - st.last_tick));
}

std::uint64_t FragmentStore::count_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.count;
}

std::vector<InvariantRow> FragmentStore::invariants(std::int64_t tick, std::uint64_t min_count,
                                                    double min_relevance) const {
    std::vector<InvariantRow> rows;
    for (const auto& [key, st] : entries_) {
        if (st.count < min_count) continue;
        double rel = st.relevance * std::pow(forget_rate_, double(std::max<std::int64_t>(
                                                 0, tick - st.last_tick)));
        if (rel < min_relevance) continue;
        rows.push_back(InvariantRow{key, st.n, st.count, rel});
    }
    std::sort(rows.begin(), rows.end(), [](const InvariantRow& a, const InvariantRow& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.key < b.key;
    });
    return rows;
}

std::size_t FragmentStore::prune(std::int64_t tick, double floor) {
    if (!(floor > 0.0)) throw ConfigError("prune floor must be positive");
    std::size_t removed = 0;
    for (auto it = entries_.begin(); it != entries_.end();) {
        const FragmentStats& st = it->second;
        if (st.last_tick == tick) {  // observed this tick, always kept
            ++it;
            continue;
        }
        double rel = st.relevance * std::pow(forget_rate_, double(std::max<std::int64_t>(
                                                 0, tick - st.last_tick)));
        if (rel < floor) {
            it = entries_.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

std::vector<std::pair<std::string, FragmentStats>> FragmentStore::sorted_entries() const {
    std::vector<std::pair<std::string, FragmentStats>> rows(entries_.begin(), entries_.end());
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
}

void FragmentStore::restore_entry(const std::string& key, const FragmentStats& stats) {
    entries_[key] = stats;
}

double FragmentStore::repeat_rate(int n) const {
    std::uint64_t distinct = 0;
    std::uint64_t repeated = 0;
    for (const auto& [key, st] : entries_) {
        if (st.n != n) continue;
        ++distinct;
        if (st.count >= 2) ++repeated;
    }
    if (distinct == 0) return 0.0;
    return double(repeated) / double(distinct);
}

std::string format_invariant_dump(const std::vector<InvariantRow>& rows) {
    std::ostringstream out;
    for (const InvariantRow& r : rows)
        out << r.count << '\t' << r.n << '\t' << r.key << '\n';
    return out.str();
}

}  // namespace sstg
