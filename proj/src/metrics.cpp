#include "sstg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sstg/errors.hpp"
#include "sstg/sleep.hpp"

namespace sstg {

CorpusStats compute_stats(const SpacetimeGraph& graph, const CorpusMeta& meta) {
    CorpusStats stats;
    stats.w = meta.words;
    stats.sentences = meta.sentences;
    stats.retained = meta.retained;
    stats.hubs = graph.hub_nodes().size();
    stats.nu = meta.nu();

    for (const Link& l : graph.links()) {
        switch (l.relation) {
            case Relation::Follows:
                if (l.from.kind == NodeKind::Event) ++stats.follows_links;
                break;
            case Relation::Contains:
                ++stats.contains_links;
                break;
            default:
                break;
        }
    }

    if (graph.slept()) {
        stats.near_links = graph.link_count(Relation::Near);
        stats.near_max = stats.hubs * (stats.hubs > 0 ? stats.hubs - 1 : 0) / 2;
        stats.regions = graph.region_nodes().size();
    }

    // Degree histogram over nodes with at least one incident link of
    // the relation; NEAR degrees count both endpoints.
    std::map<Relation, std::map<std::pair<std::uint8_t, std::uint32_t>, std::uint64_t>> degree;
    for (const Link& l : graph.links()) {
        auto from_key = std::make_pair(static_cast<std::uint8_t>(l.from.kind), l.from.ordinal);
        auto to_key = std::make_pair(static_cast<std::uint8_t>(l.to.kind), l.to.ordinal);
        degree[l.relation][from_key] += 1;
        degree[l.relation][to_key] += 1;
    }
    for (const auto& [rel, nodes] : degree)
        for (const auto& [node, k] : nodes) stats.degrees[rel][k] += 1;

    return stats;
}

std::string stats_csv_header() {
    return "w,sentences,retained,hubs,follows_links,contains_links,near_links,near_max,"
           "regions,nu,nu_window,degree_histogram\n";
}

namespace {

std::string encode_degrees(const DegreeHistogram& degrees) {
    std::ostringstream out;
    bool first_rel = true;
    for (const auto& [rel, hist] : degrees) {
        if (!first_rel) out << '|';
        first_rel = false;
        out << to_string(rel) << '=';
        bool first = true;
        for (const auto& [k, count] : hist) {
            if (!first) out << ';';
            first = false;
            out << k << ':' << count;
        }
    }
    return out.str();
}

}  // namespace

std::string stats_csv_row(const CorpusStats& s) {
    std::ostringstream out;
    out.precision(17);
    out << s.w << ',' << s.sentences << ',' << s.retained << ',' << s.hubs << ','
        << s.follows_links << ',' << s.contains_links << ',';
    if (s.near_links) out << *s.near_links;
    out << ',';
    if (s.near_max) out << *s.near_max;
    out << ',';
    if (s.regions) out << *s.regions;
    out << ',' << s.nu.nu << ',' << s.nu.window << ',' << encode_degrees(s.degrees) << '\n';
    return out.str();
}

std::optional<std::string> percolation_warning(const CorpusStats& stats, double threshold) {
    if (!stats.near_links || !stats.near_max || !stats.regions) return std::nullopt;
    if (*stats.near_max > 0) {
        double ratio = double(*stats.near_links) / double(*stats.near_max);
        if (ratio > threshold) {
            std::ostringstream out;
            out << "percolation warning: NEAR density " << ratio << " exceeds " << threshold
                << "; theme separation is dissolving";
            return out.str();
        }
    }
    if (*stats.regions == 1 && stats.hubs > 3)
        return std::string(
            "percolation warning: all hubs merged into one giant concept cluster "
            "(maximum entropy state)");
    return std::nullopt;
}

NuSweepRow run_at_context_floor(const std::vector<CorpusDoc>& corpus, const Config& base,
                                double context_floor) {
    Config cfg = base;
    cfg.context_floor = context_floor;
    Pipeline pipeline(cfg);
    for (const CorpusDoc& doc : corpus) pipeline.learn_document(doc.doc, doc.text);

    Horizon horizon{cfg.weak_max, cfg.meaningful_max, cfg.self_min};
    SleepReport sleep = sleep_graph(pipeline.graph(), horizon, cfg.overlap_union_denominator);

    NuSweepRow row;
    row.context_floor = context_floor;
    row.measured_nu = pipeline.meta().sentences == 0 ? 0.0 : pipeline.meta().nu().nu;
    row.near_links = sleep.near_installed;
    row.regions = sleep.regions_formed;
    return row;
}

std::vector<NuSweepRow> nu_sweep(const std::vector<CorpusDoc>& corpus, const Config& base,
                                 const std::vector<double>& nu_values) {
    std::vector<NuSweepRow> rows;
    rows.reserve(nu_values.size());
    for (double target : nu_values) {
        if (target <= 0.0) {
            // an empty context: floor far above any attainable relevance
            NuSweepRow row = run_at_context_floor(corpus, base, 1e12);
            row.target_nu = target;
            rows.push_back(row);
            continue;
        }
        // nu falls monotonically as the floor rises; bisect log10(floor)
        double lo = -6.0, hi = 3.0;
        NuSweepRow best;
        double best_err = std::numeric_limits<double>::infinity();
        for (int iter = 0; iter < 24; ++iter) {
            double mid = 0.5 * (lo + hi);
            NuSweepRow row = run_at_context_floor(corpus, base, std::pow(10.0, mid));
            double err = std::fabs(row.measured_nu - target);
            if (err < best_err) {
                best_err = err;
                best = row;
            }
            if (std::fabs(row.measured_nu - target) / std::max(1e-9, target) < 0.02) break;
            if (row.measured_nu > target)
                lo = mid;  // context too rich, raise the floor
            else
                hi = mid;
        }
        best.target_nu = target;
        rows.push_back(best);
    }
    return rows;
}

std::string format_stats_text(const CorpusStats& s) {
    std::ostringstream out;
    out << "words           " << s.w << '\n'
        << "sentences       " << s.sentences << '\n'
        << "retained        " << s.retained << '\n'
        << "hubs            " << s.hubs << '\n'
        << "follows links   " << s.follows_links << '\n'
        << "contains links  " << s.contains_links << '\n';
    if (s.near_links) out << "near links      " << *s.near_links << '\n';
    else out << "near links      (run sleep)\n";
    if (s.near_max) out << "near max        " << *s.near_max << '\n';
    if (s.regions) out << "regions         " << *s.regions << '\n';
    out << "nu              " << s.nu.nu << " (over " << s.nu.window << " sentences)\n";
    return out.str();
}

}  // namespace sstg
