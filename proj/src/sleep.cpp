#include "sstg/sleep.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "sstg/errors.hpp"

namespace sstg {

const char* to_string(Band band) {
    switch (band) {
        case Band::Weak: return "WEAK";
        case Band::Meaningful: return "MEANINGFUL";
        case Band::Self: return "SELF";
    }
    return "?";
}

void Horizon::validate() const {
    if (!(weak_max > 0.0 && weak_max < meaningful_max && meaningful_max <= self_min &&
          self_min < 100.0))
        throw ConfigError("horizon must satisfy 0 < weak_max < meaningful_max <= self_min < 100");
}

Band Horizon::classify(double d) const {
    if (d < weak_max) return Band::Weak;
    if (d >= self_min) return Band::Self;
    return Band::Meaningful;  // includes the sub-self middle range
}

namespace {

std::uint64_t sorted_intersection_size(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
    std::uint64_t n = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int cmp = a[i].compare(b[j]);
        if (cmp == 0) {
            ++n;
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return n;
}

// Union-find over hub ordinals.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            std::size_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

double overlap_percent(const std::vector<std::string>& a, const std::vector<std::string>& b,
                       bool union_denominator) {
    if (a.empty() && b.empty()) return 0.0;
    std::uint64_t inter = sorted_intersection_size(a, b);
    double denom = union_denominator ? double(a.size() + b.size() - inter)
                                     : double(a.size() + b.size());
    return 100.0 * 2.0 * double(inter) / denom;
}

OverlapScore overlap(const HubNode& a, const HubNode& b, const Horizon& horizon,
                     bool union_denominator) {
    if (a.fragments.empty() || b.fragments.empty())
        throw DomainError("overlap of a degenerate hub with no fragments");
    OverlapScore score;
    score.a = std::min(a.ordinal, b.ordinal);
    score.b = std::max(a.ordinal, b.ordinal);
    score.d = overlap_percent(a.keys(), b.keys(), union_denominator);
    score.band = horizon.classify(score.d);
    return score;
}

SleepReport sleep_graph(SpacetimeGraph& graph, const Horizon& horizon,
                        bool union_denominator) {
    horizon.validate();
    SleepReport report;

    graph.clear_near_and_regions();
    const auto& hubs = graph.hub_nodes();
    if (hubs.empty()) return report;

    // Inverted fragment->hub index restricts the quadratic sweep to
    // pairs that share at least one key.
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_key;
    for (const HubNode& h : hubs)
        for (const auto& [key, w] : h.fragments) by_key[key].push_back(h.ordinal);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
    for (const auto& [key, members] : by_key) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                candidates.emplace_back(std::min(members[i], members[j]),
                                        std::max(members[i], members[j]));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::vector<std::vector<std::string>> keys(hubs.size());
    for (const HubNode& h : hubs) keys[h.ordinal] = h.keys();

    for (const auto& [a, b] : candidates) {
        ++report.pairs_compared;
        double d = overlap_percent(keys[a], keys[b], union_denominator);
        if (horizon.classify(d) != Band::Meaningful) continue;
        graph.add_link(Relation::Near, NodeId{NodeKind::Hub, a}, NodeId{NodeKind::Hub, b}, d);
        ++report.near_installed;
    }

    report.regions_formed = form_regions(graph);
    return report;
}

std::uint64_t form_regions(SpacetimeGraph& graph) {
    const auto& hubs = graph.hub_nodes();
    if (hubs.empty()) return 0;

    DisjointSets sets(hubs.size());
    for (const Link& l : graph.links())
        if (l.relation == Relation::Near) sets.unite(l.from.ordinal, l.to.ordinal);

    // Components keyed by their smallest member; map iteration order
    // gives deterministic region numbering by that smallest ordinal.
    std::map<std::size_t, std::vector<std::uint32_t>> components;
    for (std::uint32_t h = 0; h < hubs.size(); ++h)
        components[sets.find(h)].push_back(h);

    for (auto& [root, members] : components) {
        NodeId region = graph.add_region(members);
        for (std::uint32_t h : members)
            graph.add_link(Relation::Contains, region, NodeId{NodeKind::Hub, h});
    }
    graph.recompute_region_spectra();
    return components.size();
}

const std::vector<RegionNode>& regions(const SpacetimeGraph& graph) {
    if (!graph.slept())
        throw StalenessError("regions are stale: run sleep on this graph first");
    return graph.region_nodes();
}

std::vector<SpectrumEntry> themes(const RegionNode& region, std::size_t top_k) {
    std::vector<SpectrumEntry> out = region.spectrum;  // already ranked
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

std::string format_region_report(const SpacetimeGraph& graph) {
    const std::vector<RegionNode>& regs = regions(graph);
    std::ostringstream out;
    for (const RegionNode& r : regs) {
        std::uint64_t internal_links = 0;
        for (const Link& l : graph.links()) {
            if (l.relation != Relation::Near) continue;
            bool from_in = std::binary_search(r.hubs.begin(), r.hubs.end(), l.from.ordinal);
            bool to_in = std::binary_search(r.hubs.begin(), r.hubs.end(), l.to.ordinal);
            if (from_in && to_in) ++internal_links;
        }
        out << "REGION " << r.ordinal << " hubs=" << r.hubs.size()
            << " links=" << internal_links << '\n';
        for (const SpectrumEntry& s : r.spectrum)
            out << s.multiplicity << '\t' << s.n << '\t' << s.key << '\n';
    }
    return out.str();
}

}  // namespace sstg
