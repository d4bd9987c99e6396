#include "sstg/graph.hpp"

#include <algorithm>
#include <map>

#include "sstg/errors.hpp"
#include "sstg/fragments.hpp"

namespace sstg {

namespace {

std::uint64_t pack(NodeId id) {
    return (std::uint64_t(static_cast<std::uint8_t>(id.kind)) << 32) | id.ordinal;
}

LinkKey pack_link(Relation rel, NodeId from, NodeId to) {
    return LinkKey{static_cast<std::uint8_t>(rel), static_cast<std::uint8_t>(from.kind),
                   from.ordinal, static_cast<std::uint8_t>(to.kind), to.ordinal};
}

void reject_separators(const std::string& value, const char* what) {
    if (value.find('\t') != std::string::npos || value.find('\n') != std::string::npos ||
        value.find('\r') != std::string::npos)
        throw DomainError(std::string(what) + " must not contain tabs or newlines");
}

}  // namespace

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Fragment: return "FRAGMENT";
        case NodeKind::Event: return "EVENT";
        case NodeKind::Hub: return "HUB";
        case NodeKind::Region: return "REGION";
    }
    return "?";
}

const char* to_string(Relation rel) {
    switch (rel) {
        case Relation::Follows: return "FOLLOWS";
        case Relation::Contains: return "CONTAINS";
        case Relation::Expresses: return "EXPRESSES";
        case Relation::Near: return "NEAR";
    }
    return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view s) {
    if (s == "FRAGMENT") return NodeKind::Fragment;
    if (s == "EVENT") return NodeKind::Event;
    if (s == "HUB") return NodeKind::Hub;
    if (s == "REGION") return NodeKind::Region;
    return std::nullopt;
}

std::optional<Relation> parse_relation(std::string_view s) {
    if (s == "FOLLOWS") return Relation::Follows;
    if (s == "CONTAINS") return Relation::Contains;
    if (s == "EXPRESSES") return Relation::Expresses;
    if (s == "NEAR") return Relation::Near;
    return std::nullopt;
}

std::vector<std::string> HubNode::keys() const {
    std::vector<std::string> out;
    out.reserve(fragments.size());
    for (const auto& [key, w] : fragments) out.push_back(key);
    return out;
}

NodeId SpacetimeGraph::add_fragment(const std::string& key) {
    if (key.empty()) throw DomainError("fragment key must be non-empty");
    reject_separators(key, "fragment key");
    auto it = fragment_index_.find(key);
    if (it != fragment_index_.end()) return NodeId{NodeKind::Fragment, it->second};
    std::uint32_t ordinal = static_cast<std::uint32_t>(fragments_.size());
    fragments_.push_back(FragmentNode{ordinal, key});
    fragment_index_.emplace(key, ordinal);
    invalidate_adjacency();
    return NodeId{NodeKind::Fragment, ordinal};
}

NodeId SpacetimeGraph::add_event(const std::string& doc, std::int64_t t, double importance,
                                 const std::string& text) {
    reject_separators(doc, "document id");
    reject_separators(text, "event text");
    std::uint32_t ordinal = static_cast<std::uint32_t>(events_.size());
    events_.push_back(EventNode{ordinal, doc, t, importance, text});
    invalidate_adjacency();
    return NodeId{NodeKind::Event, ordinal};
}

NodeId SpacetimeGraph::add_hub(const std::string& doc, std::int64_t leg,
                               std::vector<std::pair<std::string, double>> fragments) {
    reject_separators(doc, "document id");
    for (const auto& [key, w] : fragments) reject_separators(key, "hub fragment key");
    std::sort(fragments.begin(), fragments.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::uint32_t ordinal = static_cast<std::uint32_t>(hubs_.size());
    hubs_.push_back(HubNode{ordinal, doc, leg, std::move(fragments)});
    invalidate_adjacency();
    return NodeId{NodeKind::Hub, ordinal};
}

NodeId SpacetimeGraph::add_region(std::vector<std::uint32_t> hub_ordinals) {
    if (hub_ordinals.empty()) throw DomainError("region must hold at least one hub");
    std::sort(hub_ordinals.begin(), hub_ordinals.end());
    for (std::uint32_t h : hub_ordinals)
        if (h >= hubs_.size()) throw LookupError("region member hub does not exist");
    std::uint32_t ordinal = static_cast<std::uint32_t>(regions_.size());
    regions_.push_back(RegionNode{ordinal, std::move(hub_ordinals), {}});
    invalidate_adjacency();
    return NodeId{NodeKind::Region, ordinal};
}

bool SpacetimeGraph::has_node(NodeId id) const {
    switch (id.kind) {
        case NodeKind::Fragment: return id.ordinal < fragments_.size();
        case NodeKind::Event: return id.ordinal < events_.size();
        case NodeKind::Hub: return id.ordinal < hubs_.size();
        case NodeKind::Region: return id.ordinal < regions_.size();
    }
    return false;
}

std::optional<NodeId> SpacetimeGraph::find_fragment(const std::string& key) const {
    auto it = fragment_index_.find(key);
    if (it == fragment_index_.end()) return std::nullopt;
    return NodeId{NodeKind::Fragment, it->second};
}

void SpacetimeGraph::add_link(Relation relation, NodeId from, NodeId to, double weight) {
    if (!has_node(from) || !has_node(to))
        throw LookupError("link endpoint does not exist");

    bool ok = false;
    switch (relation) {
        case Relation::Follows:
            ok = (from.kind == NodeKind::Event && to.kind == NodeKind::Event) ||
                 (from.kind == NodeKind::Hub && to.kind == NodeKind::Hub);
            break;
        case Relation::Contains:
            ok = (from.kind == NodeKind::Hub && to.kind == NodeKind::Event) ||
                 (from.kind == NodeKind::Event && to.kind == NodeKind::Fragment) ||
                 (from.kind == NodeKind::Region && to.kind == NodeKind::Hub);
            break;
        case Relation::Expresses:
            ok = (from.kind == NodeKind::Event && to.kind == NodeKind::Fragment) ||
                 (from.kind == NodeKind::Hub && to.kind == NodeKind::Fragment);
            break;
        case Relation::Near:
            ok = from.kind == NodeKind::Hub && to.kind == NodeKind::Hub &&
                 from.ordinal != to.ordinal;
            break;
    }
    if (!ok)
        throw DomainError(std::string("link type discipline violation: ") + to_string(relation) +
                          " " + to_string(from.kind) + "->" + to_string(to.kind));

    if (relation == Relation::Near) {
        if (!(weight >= 0.0 && weight <= 100.0))
            throw DomainError("NEAR weight must be in [0,100]");
        if (to.ordinal < from.ordinal) std::swap(from, to);  // stored once, canonical
    } else {
        weight = 1.0;
    }

    LinkKey key = pack_link(relation, from, to);
    if (link_index_.count(key)) return;  // set semantics
    link_index_.emplace(key, links_.size());
    links_.push_back(Link{relation, from, to, weight});
    invalidate_adjacency();
}

const EventNode& SpacetimeGraph::event(std::uint32_t ordinal) const {
    if (ordinal >= events_.size()) throw LookupError("unknown event ordinal");
    return events_[ordinal];
}

const HubNode& SpacetimeGraph::hub(std::uint32_t ordinal) const {
    if (ordinal >= hubs_.size()) throw LookupError("unknown hub ordinal");
    return hubs_[ordinal];
}

const RegionNode& SpacetimeGraph::region(std::uint32_t ordinal) const {
    if (ordinal >= regions_.size()) throw LookupError("unknown region ordinal");
    return regions_[ordinal];
}

const FragmentNode& SpacetimeGraph::fragment(std::uint32_t ordinal) const {
    if (ordinal >= fragments_.size()) throw LookupError("unknown fragment ordinal");
    return fragments_[ordinal];
}

std::uint64_t SpacetimeGraph::link_count(Relation relation) const {
    std::uint64_t n = 0;
    for (const Link& l : links_)
        if (l.relation == relation) ++n;
    return n;
}

bool SpacetimeGraph::empty() const {
    return fragments_.empty() && events_.empty() && hubs_.empty() && regions_.empty() &&
           links_.empty();
}

void SpacetimeGraph::clear_near_and_regions() {
    links_.erase(std::remove_if(links_.begin(), links_.end(),
                                [](const Link& l) {
                                    return l.relation == Relation::Near ||
                                           (l.relation == Relation::Contains &&
                                            l.from.kind == NodeKind::Region);
                                }),
                 links_.end());
    regions_.clear();
    link_index_.clear();
    for (std::size_t i = 0; i < links_.size(); ++i)
        link_index_.emplace(pack_link(links_[i].relation, links_[i].from, links_[i].to), i);
    invalidate_adjacency();
}


void SpacetimeGraph::recompute_region_spectra() {
    for (RegionNode& region : regions_) {
        std::map<std::string, std::uint64_t> multiplicity;
        for (std::uint32_t h : region.hubs) {
            const HubNode& hub = hubs_.at(h);
            for (const auto& [key, w] : hub.fragments) multiplicity[key] += 1;
        }
        region.spectrum.clear();
        for (const auto& [key, mult] : multiplicity) {
            if (mult < 2) continue;  // repetition under changing context
            region.spectrum.push_back(SpectrumEntry{key, fragment_length(key), mult});
        }
        std::sort(region.spectrum.begin(), region.spectrum.end(),
                  [](const SpectrumEntry& a, const SpectrumEntry& b) {
                      if (a.multiplicity != b.multiplicity) return a.multiplicity > b.multiplicity;
                      if (a.n != b.n) return a.n > b.n;
                      return a.key < b.key;
                  });
    }
}

std::size_t SpacetimeGraph::discipline_violations() const {
    std::size_t bad = 0;
    for (const Link& l : links_) {
        bool ok = false;
        switch (l.relation) {
            case Relation::Follows:
                ok = (l.from.kind == NodeKind::Event && l.to.kind == NodeKind::Event) ||
                     (l.from.kind == NodeKind::Hub && l.to.kind == NodeKind::Hub);
                ok = ok && l.weight == 1.0;
                break;
            case Relation::Contains:
                ok = (l.from.kind == NodeKind::Hub && l.to.kind == NodeKind::Event) ||
                     (l.from.kind == NodeKind::Event && l.to.kind == NodeKind::Fragment) ||
                     (l.from.kind == NodeKind::Region && l.to.kind == NodeKind::Hub);
                ok = ok && l.weight == 1.0;
                break;
            case Relation::Expresses:
                ok = (l.from.kind == NodeKind::Event && l.to.kind == NodeKind::Fragment) ||
                     (l.from.kind == NodeKind::Hub && l.to.kind == NodeKind::Fragment);
                ok = ok && l.weight == 1.0;
                break;
            case Relation::Near:
                ok = l.from.kind == NodeKind::Hub && l.to.kind == NodeKind::Hub &&
                     l.from.ordinal < l.to.ordinal && l.weight >= 0.0 && l.weight <= 100.0;
                break;
        }
        if (!ok || !has_node(l.from) || !has_node(l.to)) ++bad;
    }
    return bad;
}

void SpacetimeGraph::invalidate_adjacency() {
    adjacency_built_ = false;
}

void SpacetimeGraph::ensure_adjacency() const {
    if (adjacency_built_) return;
    adj_out_.clear();
    adj_in_.clear();
    for (const Link& l : links_) {
        std::uint64_t rel = static_cast<std::uint64_t>(l.relation);
        adj_out_[pack(l.from) * 4 + rel].push_back(l.to);
        adj_in_[pack(l.to) * 4 + rel].push_back(l.from);
    }
    for (auto& [k, v] : adj_out_) std::sort(v.begin(), v.end());
    for (auto& [k, v] : adj_in_) std::sort(v.begin(), v.end());
    adjacency_built_ = true;
}

std::vector<NodeId> SpacetimeGraph::neighbors(NodeId id, Relation relation,
                                              Direction direction) const {
    if (!has_node(id)) throw LookupError("unknown node");
    ensure_adjacency();
    std::uint64_t key = pack(id) * 4 + static_cast<std::uint64_t>(relation);

    auto fetch = [&](const std::unordered_map<std::uint64_t, std::vector<NodeId>>& adj) {
        auto it = adj.find(key);
        return it == adj.end() ? std::vector<NodeId>{} : it->second;
    };

    if (relation == Relation::Near) {
        std::vector<NodeId> out = fetch(adj_out_);
        std::vector<NodeId> in = fetch(adj_in_);
        out.insert(out.end(), in.begin(), in.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    return direction == Direction::Out ? fetch(adj_out_) : fetch(adj_in_);
}

std::size_t link_follows(SpacetimeGraph& graph, const std::vector<NodeId>& chain) {
    for (std::size_t i = 1; i < chain.size(); ++i) {
        if (chain[i].kind != chain[0].kind)
            throw DomainError("a FOLLOWS chain holds one node kind");
        if (chain[i - 1].kind == NodeKind::Event) {
            const EventNode& prev = graph.event(chain[i - 1].ordinal);
            const EventNode& next = graph.event(chain[i].ordinal);
            if (prev.doc != next.doc)
                throw DomainError("FOLLOWS chains never cross document boundaries");
            if (next.t <= prev.t)
                throw OrderingError("FOLLOWS chain input is not sorted by proper time");
        }
    }
    std::size_t installed = 0;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        graph.add_link(Relation::Follows, chain[i - 1], chain[i]);
        ++installed;
    }
    return installed;
}

namespace {

std::string escape_name_part(const std::string& key) {
    std::string out;
    out.reserve(key.size());
    for (char c : key) {
        if (c == '%') out += "%25";
        else if (c == ',') out += "%2C";
        else out.push_back(c);
    }
    return out;
}

std::string unescape_name_part(const std::string& part) {
    std::string out;
    out.reserve(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) {
        if (part[i] == '%' && i + 2 < part.size()) {
            if (part.compare(i, 3, "%25") == 0) {
                out.push_back('%');
                i += 2;
                continue;
            }
            if (part.compare(i, 3, "%2C") == 0) {
                out.push_back(',');
                i += 2;
                continue;
            }
        }
        out.push_back(part[i]);
    }
    return out;
}

}  // namespace

std::string hub_name_from_keys(const std::vector<std::string>& keys) {
    std::vector<std::pair<int, std::string>> entries;
    entries.reserve(keys.size());
    for (const std::string& key : keys) entries.emplace_back(fragment_length(key), key);
    std::sort(entries.begin(), entries.end());
    std::string name;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) name.push_back(',');
        name += std::to_string(entries[i].first);
        name.push_back(':');
        name += escape_name_part(entries[i].second);
    }
    return name;
}

std::string hub_name(const HubNode& hub) {
    return hub_name_from_keys(hub.keys());
}

std::vector<std::string> parse_hub_name(const std::string& name) {
    std::vector<std::string> keys;
    if (name.empty()) return keys;
    std::size_t start = 0;
    while (start <= name.size()) {
        std::size_t comma = name.find(',', start);
        std::string entry =
            comma == std::string::npos ? name.substr(start) : name.substr(start, comma - start);
        std::size_t colon = entry.find(':');
        if (colon == std::string::npos || colon == 0)
            throw ParseError("hub name entry missing '<n>:' prefix: '" + entry + "'");
        int n = 0;
        for (std::size_t i = 0; i < colon; ++i) {
            if (entry[i] < '0' || entry[i] > '9')
                throw ParseError("hub name entry has non-numeric length: '" + entry + "'");
            n = n * 10 + (entry[i] - '0');
        }
        std::string key = unescape_name_part(entry.substr(colon + 1));
        if (key.empty()) throw ParseError("hub name entry has empty key");
        if (fragment_length(key) != n)
            throw ParseError("hub name length prefix does not match key: '" + entry + "'");
        keys.push_back(std::move(key));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

bool graph_equal(const SpacetimeGraph& a, const SpacetimeGraph& b) {
    const auto& fa = a.fragment_nodes();
    const auto& fb = b.fragment_nodes();
    if (fa.size() != fb.size()) return false;
    for (std::size_t i = 0; i < fa.size(); ++i)
        if (fa[i].ordinal != fb[i].ordinal || fa[i].key != fb[i].key) return false;

    const auto& ea = a.event_nodes();
    const auto& eb = b.event_nodes();
    if (ea.size() != eb.size()) return false;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        if (ea[i].ordinal != eb[i].ordinal || ea[i].doc != eb[i].doc || ea[i].t != eb[i].t ||
            ea[i].importance != eb[i].importance || ea[i].text != eb[i].text)
            return false;
    }

    const auto& ha = a.hub_nodes();
    const auto& hb = b.hub_nodes();
    if (ha.size() != hb.size()) return false;
    for (std::size_t i = 0; i < ha.size(); ++i) {
        if (ha[i].ordinal != hb[i].ordinal || ha[i].doc != hb[i].doc || ha[i].leg != hb[i].leg ||
            ha[i].fragments != hb[i].fragments)
            return false;
    }

    const auto& ra = a.region_nodes();
    const auto& rb = b.region_nodes();
    if (ra.size() != rb.size()) return false;
    for (std::size_t i = 0; i < ra.size(); ++i)
        if (ra[i].ordinal != rb[i].ordinal || ra[i].hubs != rb[i].hubs) return false;

    std::vector<Link> la = a.links();
    std::vector<Link> lb = b.links();
    std::sort(la.begin(), la.end());
    std::sort(lb.begin(), lb.end());
    return la == lb;
}

}  // namespace sstg
