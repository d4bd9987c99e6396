#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "sstg/errors.hpp"
#include "sstg/graph.hpp"

namespace sstg {

namespace {

// Shortest round-trip decimal form; identical doubles always format
// to identical bytes.
std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw DomainError("cannot format number");
    return std::string(buf, ptr);
}

double parse_double_field(std::string_view s, std::size_t lineno) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" + std::string(s) +
                         "'");
    return out;
}

std::int64_t parse_int_field(std::string_view s, std::size_t lineno) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(lineno) + ": bad integer '" + std::string(s) +
                         "'");
    return out;
}

std::uint32_t parse_ordinal_field(std::string_view s, std::size_t lineno) {
    std::uint32_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("line " + std::to_string(lineno) + ": bad ordinal '" + std::string(s) +
                         "'");
    return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

// "KIND:ordinal"
std::string endpoint(NodeId id) {
    return std::string(to_string(id.kind)) + ":" + std::to_string(id.ordinal);
}

NodeId parse_endpoint(std::string_view s, std::size_t lineno) {
    std::size_t colon = s.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("line " + std::to_string(lineno) + ": bad endpoint '" + std::string(s) +
                         "'");
    auto kind = parse_node_kind(s.substr(0, colon));
    if (!kind)
        throw ParseError("line " + std::to_string(lineno) + ": unknown node kind '" +
                         std::string(s.substr(0, colon)) + "'");
    return NodeId{*kind, parse_ordinal_field(s.substr(colon + 1), lineno)};
}

}  // namespace

std::string serialize(const SpacetimeGraph& graph) {
    std::string out;

    for (const FragmentNode& f : graph.fragment_nodes()) {
        out += "NODE\tFRAGMENT\t";
        out += std::to_string(f.ordinal);
        out += '\t';
        out += f.key;
        out += '\n';
    }
    for (const EventNode& e : graph.event_nodes()) {
        out += "NODE\tEVENT\t";
        out += std::to_string(e.ordinal);
        out += '\t';
        out += e.doc;
        out += '\t';
        out += std::to_string(e.t);
        out += '\t';
        out += format_double(e.importance);
        out += '\t';
        out += e.text;
        out += '\n';
    }
    for (const HubNode& h : graph.hub_nodes()) {
        out += "NODE\tHUB\t";
        out += std::to_string(h.ordinal);
        out += '\t';
        out += h.doc;
        out += '\t';
        out += std::to_string(h.leg);
        out += '\t';
        out += std::to_string(h.fragments.size());
        for (const auto& [key, weight] : h.fragments) {
            out += '\t';
            out += key;
            out += '\t';
            out += format_double(weight);
        }
        out += '\n';
    }
    for (const RegionNode& r : graph.region_nodes()) {
        out += "NODE\tREGION\t";
        out += std::to_string(r.ordinal);
        out += '\t';
        out += std::to_string(r.hubs.size());
        for (std::uint32_t h : r.hubs) {
            out += '\t';
            out += std::to_string(h);
        }
        out += '\n';
    }

    std::vector<Link> links = graph.links();
    std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
        if (a.relation != b.relation) return a.relation < b.relation;
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    for (const Link& l : links) {
        out += "LINK\t";
        out += to_string(l.relation);
        out += '\t';
        out += endpoint(l.from);
        out += '\t';
        out += endpoint(l.to);
        out += '\t';
        out += format_double(l.weight);
        out += '\n';
    }
    return out;
}

SpacetimeGraph deserialize(std::string_view text) {
    SpacetimeGraph graph;
    std::size_t lineno = 0;
    std::size_t pos = 0;

    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++lineno;
        if (line.empty()) continue;

        std::vector<std::string_view> f = split_tabs(line);
        if (f[0] == "NODE") {
            if (f.size() < 4)
                throw ParseError("line " + std::to_string(lineno) + ": truncated NODE record");
            auto kind = parse_node_kind(f[1]);
            if (!kind)
                throw ParseError("line " + std::to_string(lineno) + ": unknown node kind '" +
                                 std::string(f[1]) + "'");
            std::uint32_t ordinal = parse_ordinal_field(f[2], lineno);
            NodeId created;
            switch (*kind) {
                case NodeKind::Fragment: {
                    if (f.size() != 4)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": FRAGMENT payload must be the key");
                    created = graph.add_fragment(std::string(f[3]));
                    break;
                }
                case NodeKind::Event: {
                    if (f.size() != 7)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": EVENT payload must be doc, t, importance, text");
                    created = graph.add_event(std::string(f[3]), parse_int_field(f[4], lineno),
                                              parse_double_field(f[5], lineno),
                                              std::string(f[6]));
                    break;
                }
                case NodeKind::Hub: {
                    if (f.size() < 6)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": HUB payload must be doc, leg, count, entries");
                    std::size_t count =
                        static_cast<std::size_t>(parse_int_field(f[5], lineno));
                    if (f.size() != 6 + 2 * count)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": HUB fragment count does not match entries");
                    std::vector<std::pair<std::string, double>> fragments;
                    fragments.reserve(count);
                    for (std::size_t i = 0; i < count; ++i)
                        fragments.emplace_back(std::string(f[6 + 2 * i]),
                                               parse_double_field(f[7 + 2 * i], lineno));
                    created = graph.add_hub(std::string(f[3]), parse_int_field(f[4], lineno),
                                            std::move(fragments));
                    break;
                }
                case NodeKind::Region: {
                    std::size_t count =
                        static_cast<std::size_t>(parse_int_field(f[3], lineno));
                    if (f.size() != 4 + count)
                        throw ParseError("line " + std::to_string(lineno) +
                                         ": REGION member count does not match entries");
                    std::vector<std::uint32_t> hubs;
                    hubs.reserve(count);
                    for (std::size_t i = 0; i < count; ++i)
                        hubs.push_back(parse_ordinal_field(f[4 + i], lineno));
                    created = graph.add_region(std::move(hubs));
                    break;
                }
            }
            if (created.ordinal != ordinal)
                throw ParseError("line " + std::to_string(lineno) +
                                 ": node ordinals must be contiguous and ascending per kind");
        } else if (f[0] == "LINK") {
            if (f.size() != 5)
                throw ParseError("line " + std::to_string(lineno) + ": truncated LINK record");
            auto rel = parse_relation(f[1]);
            if (!rel)
                throw ParseError("line " + std::to_string(lineno) + ": unknown relation '" +
                                 std::string(f[1]) + "'");
            NodeId from = parse_endpoint(f[2], lineno);
            NodeId to = parse_endpoint(f[3], lineno);
            double weight = parse_double_field(f[4], lineno);
            try {
                graph.add_link(*rel, from, to, weight);
            } catch (const Error& e) {
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
            }
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown record type '" +
                             std::string(f[0]) + "'");
        }
    }

    graph.recompute_region_spectra();
    return graph;
}

void save_graph_file(const SpacetimeGraph& graph, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError("cannot write graph file: " + path);
    out << serialize(graph);
    if (!out) throw IngestError("failed writing graph file: " + path);
}

SpacetimeGraph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open graph file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(text);
}

}  // namespace sstg
