#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sstg/graph.hpp"

namespace sstg {

// Overlap classification bands. Weak overlaps sit over the horizon
// and are pruned; self overlaps come from double-sampled context and
// carry no information; only the middle band installs NEAR links.
enum class Band { Weak, Meaningful, Self };

const char* to_string(Band band);

struct Horizon {
    double weak_max = 1.0;
    double meaningful_max = 10.0;
    double self_min = 40.0;

    void validate() const;  // 0 < weak_max < meaningful_max <= self_min < 100
    Band classify(double d) const;
};

struct OverlapScore {
    std::uint32_t a = 0;  // canonical: a < b
    std::uint32_t b = 0;
    double d = 0.0;  // percent in [0,100]
    Band band = Band::Weak;
};

// Dice overlap of two key sets, as a percent: 100 * 2|A^B| / (|A|+|B|).
// Inputs must be sorted and deduplicated. With union_denominator the
// literal 100 * 2|A^B| / |AvB| form is used instead (comparison mode;
// reaches 200 for identical sets).
double overlap_percent(const std::vector<std::string>& a, const std::vector<std::string>& b,
                       bool union_denominator = false);

// Overlap between two hubs' fragment key sets (weights ignored).
// Throws DomainError when either hub has no fragments.
OverlapScore overlap(const HubNode& a, const HubNode& b, const Horizon& horizon,
                     bool union_denominator = false);

struct SleepReport {
    std::uint64_t pairs_compared = 0;  // pairs sharing at least one key
    std::uint64_t near_installed = 0;
    std::uint64_t regions_formed = 0;
};

// Installs NEAR links for every hub pair whose overlap lands in the
// meaningful band (weak pairs pruned, self pairs neglected), across
// documents as well as within them, then forms regions. Idempotent:
// any previous NEAR links and regions are dropped first.
SleepReport sleep_graph(SpacetimeGraph& graph, const Horizon& horizon,
                        bool union_denominator = false);

// Partitions all hubs into NEAR-connected components, numbering the
// regions by smallest member hub ordinal, installing REGION CONTAINS
// HUB links and computing shared-fragment spectra.
std::uint64_t form_regions(SpacetimeGraph& graph);

// Region list accessor guarded by staleness: a graph with hubs but no
// computed regions has not been slept. Throws StalenessError.
const std::vector<RegionNode>& regions(const SpacetimeGraph& graph);

// The region's shared-fragment spectrum truncated to top_k, ranked by
// (multiplicity desc, n desc, key asc).
std::vector<SpectrumEntry> themes(const RegionNode& region, std::size_t top_k);

// Region report: "REGION <id> hubs=<k> links=<m>" blocks followed by
// "<multiplicity>\t<n>\t<key>" spectrum lines.
std::string format_region_report(const SpacetimeGraph& graph);

}  // namespace sstg
