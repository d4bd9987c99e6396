#include "sstg/narrator.hpp"

#include <algorithm>
#include <sstream>

#include "sstg/errors.hpp"
#include "sstg/fragments.hpp"
#include "sstg/sleep.hpp"

namespace sstg {

namespace {

// splitmix64; used only by the stochastic narration mode
struct Rng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double unit() { return double(next() >> 11) * 0x1.0p-53; }
};

std::vector<std::string> event_fragment_keys(const SpacetimeGraph& graph,
                                             std::uint32_t event_ordinal) {
    std::vector<std::string> keys;
    for (NodeId f : graph.neighbors(NodeId{NodeKind::Event, event_ordinal}, Relation::Expresses,
                                    Direction::Out))
        keys.push_back(graph.fragment(f.ordinal).key);
    std::sort(keys.begin(), keys.end());
    return keys;
}

// Ranking overlap between a hub and the session context; tolerates an
// empty context (scores zero) unlike the hub-pair overlap operation.
double context_overlap(const SpacetimeGraph& graph, std::uint32_t hub_ordinal,
                       const RunningContext& ctx) {
    std::vector<std::string> hub_keys = graph.hub(hub_ordinal).keys();
    std::vector<std::string> ctx_keys = ctx.keys();
    if (hub_keys.empty() || ctx_keys.empty()) return 0.0;
    return overlap_percent(hub_keys, ctx_keys, false);
}

struct Pick {
    std::uint32_t hub;
    double score;
};

// Argmax with ordinal tie-break, or seeded sampling in stochastic mode.
Pick choose(const std::vector<std::pair<std::uint32_t, double>>& ranked,
            const NarratorOptions& opts, Rng& rng) {
    if (opts.stochastic && ranked.size() > 1) {
        double total = 0.0;
        for (const auto& [hub, score] : ranked) total += score + 1e-9;
        double target = rng.unit() * total;
        double acc = 0.0;
        for (const auto& [hub, score] : ranked) {
            acc += score + 1e-9;
            if (target <= acc) return Pick{hub, score};
        }
    }
    return Pick{ranked.front().first, ranked.front().second};
}

void sort_candidates(std::vector<std::pair<std::uint32_t, double>>& ranked) {
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
}

std::string annotate(const std::string& text, StepRelation rel, double score, bool verbose) {
    if (!verbose) return text;
    std::ostringstream out;
    out << text << " [" << to_string(rel) << ":" << score << "]";
    return out.str();
}

}  // namespace

const char* to_string(StepRelation rel) {
    switch (rel) {
        case StepRelation::Seed: return "SEED";
        case StepRelation::Follows: return "FOLLOWS";
        case StepRelation::Near: return "NEAR";
        case StepRelation::Contains: return "CONTAINS";
        case StepRelation::Expresses: return "EXPRESSES";
    }
    return "?";
}

RunningContext make_session_context(const NarratorOptions& opts) {
    return RunningContext(opts.context_forget_rate, opts.context_floor);
}

RunningContext make_session_context(const Config& cfg) {
    return RunningContext(cfg.narrate_context_forget_rate, cfg.narrate_context_floor);
}

Narrative playback(const SpacetimeGraph& graph, NodeId seed_event, std::size_t max_len,
                   const NarratorOptions& opts) {
    if (seed_event.kind != NodeKind::Event)
        throw DomainError("playback seed must be an event");
    if (!graph.has_node(seed_event)) throw LookupError("playback seed event does not exist");

    Narrative narrative;
    narrative.mode = NarrativeMode::Playback;

    NodeId current = seed_event;
    StepRelation rel = StepRelation::Seed;
    std::ostringstream rendered;
    while (narrative.steps.size() < max_len) {
        narrative.steps.push_back(NarrativeStep{current, rel, 1.0});
        if (narrative.steps.size() > 1) rendered << "\nFOLLOWED BY\n";
        rendered << annotate(graph.event(current.ordinal).text, rel, 1.0, opts.verbose);

        std::vector<NodeId> next = graph.neighbors(current, Relation::Follows, Direction::Out);
        if (next.empty()) break;  // dead end of the chain
        current = next.front();
        rel = StepRelation::Follows;
    }
    narrative.rendered = rendered.str();
    return narrative;
}

Narrative lateral(const SpacetimeGraph& graph, const std::string& seed_fragment,
                  RunningContext& ctx, std::size_t max_len, const NarratorOptions& opts,
                  std::vector<LateralTraceStep>* trace) {
    std::optional<NodeId> fragment = graph.find_fragment(seed_fragment);
    if (!fragment) throw LookupError("fragment not in graph: '" + seed_fragment + "'");

    Narrative narrative;
    narrative.mode = NarrativeMode::Lateral;

    // Up the layers: the hubs whose context expresses the seed.
    std::vector<std::pair<std::uint32_t, double>> start_candidates;
    for (NodeId n : graph.neighbors(*fragment, Relation::Expresses, Direction::In))
        if (n.kind == NodeKind::Hub) start_candidates.emplace_back(n.ordinal, 0.0);
    if (start_candidates.empty()) return narrative;  // empty-result signal

    std::int64_t tick = ctx.tick() < 0 ? 0 : ctx.tick();
    ctx.add_key(seed_fragment, tick, opts.coactivation_boost);

    Rng rng{opts.rng_seed * 0x9e3779b97f4a7c15ULL + 1};
    std::vector<bool> visited(graph.hub_nodes().size(), false);
    std::ostringstream rendered;
    std::size_t emitted = 0;

    std::vector<std::pair<std::uint32_t, double>> candidates = std::move(start_candidates);
    StepRelation hop_rel = StepRelation::Seed;

    while (emitted < max_len) {
        for (auto& [hub, score] : candidates) score = context_overlap(graph, hub, ctx);
        sort_candidates(candidates);
        Pick pick = choose(candidates, opts, rng);
        if (trace) {
            LateralTraceStep step;
            step.chosen = pick.hub;
            step.chosen_score = pick.score;
            step.candidates = candidates;
            trace->push_back(std::move(step));
        }
        visited[pick.hub] = true;
        narrative.steps.push_back(
            NarrativeStep{NodeId{NodeKind::Hub, pick.hub}, hop_rel, pick.score});

        // The chosen context's events, in creation (proper time) order;
        // each one folds its fragments back into the session context.
        for (NodeId ev :
             graph.neighbors(NodeId{NodeKind::Hub, pick.hub}, Relation::Contains,
                             Direction::Out)) {
            if (ev.kind != NodeKind::Event) continue;
            if (emitted >= max_len) break;
            narrative.steps.push_back(
                NarrativeStep{ev, StepRelation::Contains, pick.score});
            if (emitted > 0) rendered << "\nALTERNATIVELY (SIMILAR)\n";
            rendered << annotate(graph.event(ev.ordinal).text, StepRelation::Contains,
                                 pick.score, opts.verbose);
            ++emitted;
            ++tick;
            for (const std::string& key : event_fragment_keys(graph, ev.ordinal))
                ctx.add_key(key, tick, opts.coactivation_boost);
        }

        candidates.clear();
        for (NodeId n :
             graph.neighbors(NodeId{NodeKind::Hub, pick.hub}, Relation::Near, Direction::Out))
            if (!visited[n.ordinal]) candidates.emplace_back(n.ordinal, 0.0);
        if (candidates.empty()) break;  // silo boundary: no unvisited neighbours
        hop_rel = StepRelation::Near;
    }

    narrative.rendered = rendered.str();
    return narrative;
}

std::vector<std::string> micro_recombine(const std::vector<std::string>& fragment_keys,
                                         Relation binding) {
    if (fragment_keys.empty()) throw DomainError("micro recombination needs a fragment");
    if (fragment_keys.size() > 4)
        throw DomainError("micro recombination splices at most 4 fragments");
    for (const std::string& key : fragment_keys)
        if (fragment_length(key) > 3)
            throw DomainError("splice length error: fragment longer than 3 words: '" + key +
                              "'");

    const char* connective = nullptr;
    switch (binding) {
        case Relation::Follows: connective = "leads to"; break;
        case Relation::Contains: connective = "contains"; break;
        case Relation::Near: connective = "by"; break;
        case Relation::Expresses:
            throw DomainError("micro recombination binds by FOLLOWS, CONTAINS, or NEAR");
    }

    std::vector<std::string> inputs = fragment_keys;
    std::sort(inputs.begin(), inputs.end());

    std::vector<std::string> out;
    auto emit = [&out](std::string s) {
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
    };

    std::vector<std::string> perm = inputs;
    do {
        std::string plain;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            if (i) plain += ' ';
            plain += perm[i];
        }
        emit(std::move(plain));
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (inputs.size() > 1) {
        perm = inputs;
        do {
            std::string labelled;
            for (std::size_t i = 0; i < perm.size(); ++i) {
                if (i) {
                    labelled += ' ';
                    labelled += connective;
                    labelled += ' ';
                }
                labelled += perm[i];
            }
            emit(std::move(labelled));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

std::vector<std::string> macro_narrate(const SpacetimeGraph& graph, std::size_t top_k) {
    const std::vector<RegionNode>& regs = regions(graph);
    std::vector<std::string> out;
    out.reserve(regs.size());
    for (const RegionNode& region : regs) {
        std::vector<SpectrumEntry> top = themes(region, top_k);
        if (top.empty()) {
            out.push_back("region " + std::to_string(region.ordinal) + ": (no stable theme)");
            continue;
        }
        std::string statement;
        for (std::size_t i = 0; i < top.size(); ++i) {
            if (i > 0) statement += (i + 1 == top.size()) ? " in " : " and ";
            statement += top[i].key;
        }
        out.push_back(std::move(statement));
    }
    return out;
}

ExploreSession::ExploreSession(const SpacetimeGraph& graph, const NarratorOptions& opts)
    : graph_(graph), opts_(opts), ctx_(make_session_context(opts)) {}

void ExploreSession::visit_event(std::uint32_t ordinal) {
    ++tick_;
    for (const std::string& key : event_fragment_keys(graph_, ordinal))
        ctx_.add_key(key, tick_, opts_.coactivation_boost);
}

std::optional<std::uint32_t> ExploreSession::current_hub() const {
    if (!position_) return std::nullopt;
    if (position_->kind == NodeKind::Hub) return position_->ordinal;
    if (position_->kind == NodeKind::Event) {
        for (NodeId n : graph_.neighbors(*position_, Relation::Contains, Direction::In))
            if (n.kind == NodeKind::Hub) return n.ordinal;
    }
    return std::nullopt;
}

std::vector<std::pair<std::uint32_t, double>> ExploreSession::ranked_near_candidates() const {
    std::vector<std::pair<std::uint32_t, double>> ranked;
    std::optional<std::uint32_t> hub = current_hub();
    if (!hub) return ranked;
    for (NodeId n : graph_.neighbors(NodeId{NodeKind::Hub, *hub}, Relation::Near, Direction::Out))
        ranked.emplace_back(n.ordinal, context_overlap(graph_, n.ordinal, ctx_));
    sort_candidates(ranked);
    return ranked;
}

double ExploreSession::near_weight(std::uint32_t a, std::uint32_t b) const {
    NodeId lo{NodeKind::Hub, std::min(a, b)};
    NodeId hi{NodeKind::Hub, std::max(a, b)};
    for (const Link& l : graph_.links())
        if (l.relation == Relation::Near && l.from == lo && l.to == hi) return l.weight;
    return 0.0;
}

std::string ExploreSession::describe_position() const {
    if (!position_) return "nowhere (use: seed <fragment>)";
    std::ostringstream out;
    if (position_->kind == NodeKind::Event) {
        const EventNode& ev = graph_.event(position_->ordinal);
        out << "event " << ev.ordinal << " (doc=" << ev.doc << " t=" << ev.t << ")\n"
            << ev.text;
    } else if (position_->kind == NodeKind::Hub) {
        const HubNode& hub = graph_.hub(position_->ordinal);
        std::size_t events = 0;
        for (NodeId n :
             graph_.neighbors(*position_, Relation::Contains, Direction::Out))
            if (n.kind == NodeKind::Event) ++events;
        out << "hub " << hub.ordinal << " (doc=" << hub.doc << " leg=" << hub.leg
            << " fragments=" << hub.fragments.size() << " events=" << events << ")";
    } else if (position_->kind == NodeKind::Region) {
        const RegionNode& region = graph_.region(position_->ordinal);
        out << "region " << region.ordinal << " (hubs=" << region.hubs.size() << ")";
    }
    return out.str();
}

std::string ExploreSession::cmd_seed(const std::string& fragment) {
    std::optional<NodeId> node = graph_.find_fragment(fragment);
    if (!node) return "no such fragment: '" + fragment + "'";
    std::vector<std::pair<std::uint32_t, double>> hubs;
    for (NodeId n : graph_.neighbors(*node, Relation::Expresses, Direction::In))
        if (n.kind == NodeKind::Hub) hubs.emplace_back(n.ordinal, 0.0);
    if (hubs.empty()) return "no hub expresses '" + fragment + "'";

    ++tick_;
    ctx_.add_key(fragment, tick_, opts_.coactivation_boost);
    for (auto& [hub, score] : hubs) score = context_overlap(graph_, hub, ctx_);
    sort_candidates(hubs);
    position_ = NodeId{NodeKind::Hub, hubs.front().first};
    return "seeded at " + describe_position();
}

std::string ExploreSession::cmd_next() {
    if (!position_) return describe_position();
    if (position_->kind != NodeKind::Event && position_->kind != NodeKind::Hub)
        return "next applies to events and hubs";
    std::vector<NodeId> succ = graph_.neighbors(*position_, Relation::Follows, Direction::Out);
    if (succ.empty()) return "dead end within the present episode silo";
    position_ = succ.front();
    if (position_->kind == NodeKind::Event) visit_event(position_->ordinal);
    return describe_position();
}

std::string ExploreSession::cmd_jump() {
    std::optional<std::uint32_t> here = current_hub();
    if (!here) return "jump needs a position inside a hub (use: seed <fragment>)";
    std::vector<std::pair<std::uint32_t, double>> ranked = ranked_near_candidates();
    if (ranked.empty()) return "no NEAR neighbours from here";
    std::ostringstream out;
    out << "candidates:\n";
    for (const auto& [hub, score] : ranked)
        out << "  hub " << hub << " d=" << near_weight(*here, hub) << " ctx-overlap=" << score
            << "\n";
    position_ = NodeId{NodeKind::Hub, ranked.front().first};
    out << "jumped to " << describe_position();
    return out.str();
}

std::string ExploreSession::cmd_up() {
    if (!position_) return describe_position();
    for (NodeId n : graph_.neighbors(*position_, Relation::Contains, Direction::In)) {
        position_ = n;
        return describe_position();
    }
    return "nothing contains this node";
}

std::string ExploreSession::cmd_down() {
    if (!position_) return describe_position();
    std::vector<NodeId> members =
        graph_.neighbors(*position_, Relation::Contains, Direction::Out);
    if (members.empty()) return "nothing contained here";
    std::ostringstream out;
    out << "members:\n";
    for (NodeId n : members) out << "  " << to_string(n.kind) << " " << n.ordinal << "\n";
    position_ = members.front();
    if (position_->kind == NodeKind::Event) visit_event(position_->ordinal);
    out << "moved to " << describe_position();
    return out.str();
}

std::string ExploreSession::cmd_ctx() const {
    std::vector<std::pair<std::string, double>> entries = ctx_.snapshot();
    std::ostringstream out;
    out << "running context: " << entries.size() << " fragments";
    for (const auto& [key, rel] : entries) out << "\n  " << key << " (" << rel << ")";
    return out.str();
}

std::string ExploreSession::cmd_score() const {
    std::optional<std::uint32_t> here = current_hub();
    if (!here) return "score needs a position inside a hub";
    std::vector<std::pair<std::uint32_t, double>> ranked = ranked_near_candidates();
    if (ranked.empty()) return "no NEAR neighbours to rank";
    std::ostringstream out;
    out << "candidate rankings:";
    for (const auto& [hub, score] : ranked)
        out << "\n  hub " << hub << " d=" << near_weight(*here, hub)
            << " ctx-overlap=" << score;
    return out.str();
}

std::string ExploreSession::handle(const std::string& line, bool* quit) {
    if (quit) *quit = false;
    std::istringstream in(line);
    std::string cmd;
    in >> cmd;
    if (cmd.empty()) return "";
    if (cmd == "quit" || cmd == "exit") {
        if (quit) *quit = true;
        return "";
    }
    if (cmd == "seed") {
        std::string rest;
        std::getline(in, rest);
        std::size_t b = rest.find_first_not_of(' ');
        if (b == std::string::npos) return "usage: seed <fragment>";
        return cmd_seed(rest.substr(b));
    }
    if (cmd == "next") return cmd_next();
    if (cmd == "jump") return cmd_jump();
    if (cmd == "up") return cmd_up();
    if (cmd == "down") return cmd_down();
    if (cmd == "ctx") return cmd_ctx();
    if (cmd == "score") return cmd_score();
    if (cmd == "where") return describe_position();
    return "commands: seed <fragment> | next | jump | up | down | ctx | score | where | quit";
}

}  // namespace sstg
