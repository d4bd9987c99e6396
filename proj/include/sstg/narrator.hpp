#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sstg/config.hpp"
#include "sstg/context.hpp"
#include "sstg/graph.hpp"

namespace sstg {

enum class NarrativeMode { Playback, Lateral, Micro, Macro };

// The relation used to reach a step; the first step of a narrative is
// always a seed.
enum class StepRelation { Seed, Follows, Near, Contains, Expresses };

const char* to_string(StepRelation rel);

struct NarrativeStep {
    NodeId node;
    StepRelation relation_used = StepRelation::Seed;
    double score = 0.0;
};

struct Narrative {
    NarrativeMode mode = NarrativeMode::Playback;
    std::vector<NarrativeStep> steps;
    std::string rendered;
};

struct NarratorOptions {
    double coactivation_boost = 1.0;       // boost applied to visited fragments
    bool stochastic = false;               // sample candidates instead of argmax
    std::uint64_t rng_seed = 0;            // deterministic per seed
    bool verbose = false;                  // annotate rendered steps with [relation:score]
    double context_forget_rate = 0.9;      // session context decay
    double context_floor = 0.05;
};

// One ranking decision of a lateral walk: every candidate with its
// context-overlap score, and which hub won.
struct LateralTraceStep {
    std::uint32_t chosen = 0;
    double chosen_score = 0.0;
    std::vector<std::pair<std::uint32_t, double>> candidates;  // (hub ordinal, score)
};

// Episodic recall: follows the FOLLOWS chain from a seed event for up
// to max_len events; sentences joined by the FOLLOWED BY marker.
// Throws DomainError when the seed is not an event, LookupError when
// it does not exist.
Narrative playback(const SpacetimeGraph& graph, NodeId seed_event, std::size_t max_len,
                   const NarratorOptions& opts = {});

// Lateral association: starts from the hubs expressing the seed
// fragment, emits the best hub's events, then hops NEAR links ranked
// by Dice overlap between candidate hub fragments and the session
// context (ties to the lower ordinal; visited hubs are not revisited).
// Every emitted event's fragments update the session context.
// Throws LookupError when the fragment is absent from the graph;
// returns an empty narrative when no hub expresses it.
Narrative lateral(const SpacetimeGraph& graph, const std::string& seed_fragment,
                  RunningContext& ctx, std::size_t max_len, const NarratorOptions& opts = {},
                  std::vector<LateralTraceStep>* trace = nullptr);

// Microscopic recombination of 1..4 short fragments (n <= 3) under a
// binding relation; emits plain concatenations plus relation-labelled
// forms, deduplicated. No grammar, only binding.
// Throws DomainError on oversized fragments or input counts.
std::vector<std::string> micro_recombine(const std::vector<std::string>& fragment_keys,
                                         Relation binding);

// One theme statement per region from the top_k spectrum entries,
// joined "a and b in c"; empty spectra yield a placeholder line.
// Throws StalenessError when sleep has not run.
std::vector<std::string> macro_narrate(const SpacetimeGraph& graph, std::size_t top_k = 3);

// Builds a fresh session context for narration.
RunningContext make_session_context(const NarratorOptions& opts);
RunningContext make_session_context(const Config& cfg);

// Interactive graph walk; consumes one command line at a time and
// returns the text to print. Commands: seed <fragment>, next, jump,
// up, down, ctx, score, help, quit.
class ExploreSession {
public:
    ExploreSession(const SpacetimeGraph& graph, const NarratorOptions& opts = {});

    // Returns the response; sets *quit when the session should end.
    std::string handle(const std::string& line, bool* quit = nullptr);

private:
    std::string cmd_seed(const std::string& fragment);
    std::string cmd_next();
    std::string cmd_jump();
    std::string cmd_up();
    std::string cmd_down();
    std::string cmd_ctx() const;
    std::string cmd_score() const;
    std::string describe_position() const;
    void visit_event(std::uint32_t ordinal);
    std::vector<std::pair<std::uint32_t, double>> ranked_near_candidates() const;
    std::optional<std::uint32_t> current_hub() const;
    double near_weight(std::uint32_t a, std::uint32_t b) const;

    const SpacetimeGraph& graph_;
    NarratorOptions opts_;
    RunningContext ctx_;
    std::optional<NodeId> position_;
    std::int64_t tick_ = 0;
};

}  // namespace sstg
