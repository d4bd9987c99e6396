#pragma once

#include <cstdint>
#include <string>

namespace sstg {

// Runtime knobs for the whole pipeline. One flat struct so that the
// CLI, the config file, and the tests all talk about the same keys.
//
// Two decay regimes share one mechanism (multiplicative decay per
// sentence tick with a prune floor) but carry separate constants:
//  - forget_rate / prune_floor      govern the longitudinal fragment
//    store; tuned so the most common words never fade out.
//  - context_forget_rate / context_floor govern the running context
//    buffer; tuned much harder so the buffer holds only recently
//    repeated fragments. These are the levers over the context
//    ratio nu.
struct Config {
    // fractionation
    int n_max = 6;

    // longitudinal fragment store
    double forget_rate = 0.995;
    double boost = 1.0;
    double prune_floor = 1e-4;

    // running context buffer
    double context_forget_rate = 0.9;
    double context_floor = 1.4;

    // sentence selection
    double target_density = 1.0 / 200.0;
    double coactivation_weight = 2.0;

    // stream coarse graining
    std::uint64_t leg_size = 100;

    // sentence terminators for ingestion
    std::string sentence_terminators = ".?!";

    // overlap horizon (percent)
    double weak_max = 1.0;
    double meaningful_max = 10.0;
    double self_min = 40.0;

    // use the literal union denominator instead of the Dice form
    bool overlap_union_denominator = false;

    // narration session context (needs a sub-boost floor so that
    // visited events accumulate into the session context at all)
    double narrate_context_forget_rate = 0.9;
    double narrate_context_floor = 0.05;

    // metrics
    double percolation_threshold = 0.5;

    // throws ConfigError on any out-of-range value
    void validate() const;

    // key=value assignment; throws ConfigError on unknown key or bad value
    void set(const std::string& key, const std::string& value);

    // deterministic round-trip text form, keys in fixed order
    std::string to_text() const;
};

// Parses a key=value config file ('#' comments, blank lines ignored)
// on top of the given defaults.
Config load_config_file(const std::string& path, Config base = {});

// Parses config text (same format as the file).
Config parse_config_text(const std::string& text, Config base = {});

}  // namespace sstg
