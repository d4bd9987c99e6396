#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace sstg {

enum class NodeKind : std::uint8_t { Fragment = 0, Event = 1, Hub = 2, Region = 3 };
enum class Relation : std::uint8_t { Follows = 0, Contains = 1, Expresses = 2, Near = 3 };

const char* to_string(NodeKind kind);
const char* to_string(Relation rel);
std::optional<NodeKind> parse_node_kind(std::string_view s);
std::optional<Relation> parse_relation(std::string_view s);

struct NodeId {
    NodeKind kind = NodeKind::Fragment;
    std::uint32_t ordinal = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct Link {
    Relation relation = Relation::Follows;
    NodeId from;
    NodeId to;
    double weight = 1.0;  // NEAR carries the overlap percent, others 1.0

    friend auto operator<=>(const Link&, const Link&) = default;
};

struct FragmentNode {
    std::uint32_t ordinal = 0;
    std::string key;
};

struct EventNode {
    std::uint32_t ordinal = 0;
    std::string doc;
    std::int64_t t = 0;
    double importance = 0.0;
    std::string text;
};

struct HubNode {
    std::uint32_t ordinal = 0;
    std::string doc;
    std::int64_t leg = 0;
    // fragment multiset captured from the context snapshot, sorted by
    // key; weights are the snapshot relevances, kept for ranking.
    // Empty only when the buffer was starved at leg close; such hubs
    // take no part in overlap.
    std::vector<std::pair<std::string, double>> fragments;

    std::vector<std::string> keys() const;
};

struct SpectrumEntry {
    std::string key;
    int n = 0;
    std::uint64_t multiplicity = 0;  // number of member hubs carrying the key

    friend auto operator<=>(const SpectrumEntry&, const SpectrumEntry&) = default;
};

struct RegionNode {
    std::uint32_t ordinal = 0;
    std::vector<std::uint32_t> hubs;  // member hub ordinals, ascending
    // fragments appearing in >= 2 member hubs, sorted by
    // (multiplicity desc, n desc, key asc); derived, not serialized
    std::vector<SpectrumEntry> spectrum;
};

enum class Direction { Out, In };

// Exact identity of a stored link (relation, endpoints); the target
// kind is kept so no two distinct links can share a key.
using LinkKey = std::tuple<std::uint8_t, std::uint8_t, std::uint32_t, std::uint8_t,
                           std::uint32_t>;

// The typed graph of fragments, events, hubs, and regions joined by
// the four spacetime relations. Single writer during ingestion and
// sleep; queries are const and never mutate.
class SpacetimeGraph {
public:
    // node construction; ordinals are assigned in creation order
    NodeId add_fragment(const std::string& key);  // idempotent per key
    NodeId add_event(const std::string& doc, std::int64_t t, double importance,
                     const std::string& text);
    NodeId add_hub(const std::string& doc, std::int64_t leg,
                   std::vector<std::pair<std::string, double>> fragments);
    NodeId add_region(std::vector<std::uint32_t> hub_ordinals);

    // Validates the endpoint-kind table, canonicalizes NEAR (lower
    // ordinal first, no self links, weight in [0,100]) and drops exact
    // duplicates. Throws DomainError on violations.
    void add_link(Relation relation, NodeId from, NodeId to, double weight = 1.0);

    bool has_node(NodeId id) const;
    std::optional<NodeId> find_fragment(const std::string& key) const;

    // Neighbors in deterministic ascending-ordinal order. NEAR is
    // treated as bidirectional regardless of direction.
    // Throws LookupError for unknown nodes.
    std::vector<NodeId> neighbors(NodeId id, Relation relation, Direction direction) const;

    const std::vector<FragmentNode>& fragment_nodes() const { return fragments_; }
    const std::vector<EventNode>& event_nodes() const { return events_; }
    const std::vector<HubNode>& hub_nodes() const { return hubs_; }
    const std::vector<RegionNode>& region_nodes() const { return regions_; }
    const std::vector<Link>& links() const { return links_; }

    const EventNode& event(std::uint32_t ordinal) const;
    const HubNode& hub(std::uint32_t ordinal) const;
    const RegionNode& region(std::uint32_t ordinal) const;
    const FragmentNode& fragment(std::uint32_t ordinal) const;

    std::uint64_t link_count(Relation relation) const;
    bool empty() const;

    // True once regions exist (or the graph has no hubs to regionize).
    bool slept() const { return hubs_.empty() || !regions_.empty(); }

    // Deletes NEAR links and all regions (with their CONTAINS links);
    // makes a second sleep pass start from a clean slate.
    void clear_near_and_regions();

    // Recomputes every region's shared-fragment spectrum from its
    // member hubs (fragments present in >= 2 members).
    void recompute_region_spectra();

    // Full scan of the link-type discipline; returns the number of
    // violations (0 for a well-formed graph).
    std::size_t discipline_violations() const;

private:
    void invalidate_adjacency();
    void ensure_adjacency() const;
    const std::vector<NodeId>& adjacency(NodeId id, Relation rel, Direction dir) const;

    std::vector<FragmentNode> fragments_;
    std::vector<EventNode> events_;
    std::vector<HubNode> hubs_;
    std::vector<RegionNode> regions_;
    std::vector<Link> links_;
    std::unordered_map<std::string, std::uint32_t> fragment_index_;
    std::map<LinkKey, std::size_t> link_index_;

    mutable bool adjacency_built_ = false;
    mutable std::unordered_map<std::uint64_t, std::vector<NodeId>> adj_out_;
    mutable std::unordered_map<std::uint64_t, std::vector<NodeId>> adj_in_;
};

// Chains consecutive nodes (all events or all hubs of one document)
// with FOLLOWS links. Inputs must be sorted by proper time; events are
// checked against their t fields and an OrderingError is thrown when
// they are not ascending. Returns the number of links installed.
std::size_t link_follows(SpacetimeGraph& graph, const std::vector<NodeId>& chain);

// Proper name of a hub: "<n>:<key>" entries joined by commas, sorted
// by (n asc, key asc). '%' and ',' inside keys are percent-escaped so
// the name parses back to the exact fragment set.
std::string hub_name(const HubNode& hub);
std::string hub_name_from_keys(const std::vector<std::string>& keys);

// Inverse of hub_name. Throws ParseError on malformed names.
std::vector<std::string> parse_hub_name(const std::string& name);

// Node and link equality over canonical forms (region spectra are
// derived data and excluded).
bool graph_equal(const SpacetimeGraph& a, const SpacetimeGraph& b);

// Line-oriented canonical serialization; identical graphs serialize
// byte-identically. Nodes sorted by (kind, ordinal), links by
// (relation, from, to).
std::string serialize(const SpacetimeGraph& graph);

// Throws ParseError (with the line number) on malformed input.
SpacetimeGraph deserialize(std::string_view text);

void save_graph_file(const SpacetimeGraph& graph, const std::string& path);
SpacetimeGraph load_graph_file(const std::string& path);

}  // namespace sstg
