#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sstg/config.hpp"
#include "sstg/graph.hpp"
#include "sstg/pipeline.hpp"

namespace sstg {

// Non-zero node degrees per relation (NEAR counts both endpoints).
using DegreeHistogram = std::map<Relation, std::map<std::uint64_t, std::uint64_t>>;

struct CorpusStats {
    std::uint64_t w = 0;  // input words
    std::uint64_t sentences = 0;
    std::uint64_t retained = 0;
    std::uint64_t hubs = 0;
    std::uint64_t follows_links = 0;   // event chain links only
    std::uint64_t contains_links = 0;
    // absent until sleep has run
    std::optional<std::uint64_t> near_links;
    std::optional<std::uint64_t> near_max;  // |H|(|H|-1)/2
    std::optional<std::uint64_t> regions;
    ContextRatio nu;
    DegreeHistogram degrees;
};

CorpusStats compute_stats(const SpacetimeGraph& graph, const CorpusMeta& meta);

// CSV with one header row and one corpus per row; the nu field is
// flattened into nu and nu_window, the degree histogram is encoded as
// REL=deg:count;deg:count|REL=...
std::string stats_csv_header();
std::string stats_csv_row(const CorpusStats& stats);

// Warns when the NEAR density ratio exceeds the threshold, or when
// every hub collapsed into one giant region (maximum entropy state).
std::optional<std::string> percolation_warning(const CorpusStats& stats,
                                               double threshold = 0.5);

struct NuSweepRow {
    double target_nu = 0.0;
    double measured_nu = 0.0;
    double context_floor = 0.0;  // the floor that produced measured_nu
    std::uint64_t near_links = 0;
    std::uint64_t regions = 0;
};

// In-memory document source for re-processable corpora.
struct CorpusDoc {
    std::string doc;
    std::string text;
};

// Reprocesses the corpus once per requested nu value, steering the
// context ratio through the context prune floor (bisection on a log
// scale), then sleeping and counting NEAR links and regions.
std::vector<NuSweepRow> nu_sweep(const std::vector<CorpusDoc>& corpus, const Config& base,
                                 const std::vector<double>& nu_values);

// One pipeline+sleep pass with the given floor; helper for the sweep.
NuSweepRow run_at_context_floor(const std::vector<CorpusDoc>& corpus, const Config& base,
                                double context_floor);

std::string format_stats_text(const CorpusStats& stats);

}  // namespace sstg
