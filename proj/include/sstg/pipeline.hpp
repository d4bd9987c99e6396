#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sstg/config.hpp"
#include "sstg/context.hpp"
#include "sstg/fragments.hpp"
#include "sstg/graph.hpp"
#include "sstg/ingest.hpp"

namespace sstg {

struct DocumentStats {
    std::string doc;
    std::string path;  // empty for in-memory sources
    std::uint64_t words = 0;
    std::uint64_t sentences = 0;
    std::uint64_t retained = 0;
};

// Corpus-level bookkeeping that cannot be recovered from the graph:
// word totals and the nu accumulators.
struct CorpusMeta {
    std::vector<DocumentStats> docs;
    std::uint64_t words = 0;
    std::uint64_t sentences = 0;
    std::uint64_t retained = 0;
    std::uint64_t nu_pool_word_sum = 0;      // buffered fragment words, summed per sentence
    std::uint64_t nu_sentence_word_sum = 0;  // sentence lengths, summed
    std::int64_t global_tick = 0;            // sentences processed across all documents

    ContextRatio nu() const;
};

struct LegReport {
    std::string doc;
    std::uint64_t leg = 0;
    double nu = 0.0;
    std::uint64_t retained = 0;
};

// The learning pass. Feeds each document through tokenization,
// fractionation, the longitudinal store, the running context, and
// importance selection; closes a hub at every leg boundary and links
// the FOLLOWS chains. One pipeline = one experiment; construct a new
// one to reset state.
class Pipeline {
public:
    explicit Pipeline(Config cfg);

    // Processes one document appended to the experiment stream.
    // Document ids must be unique within the experiment.
    void learn_document(const std::string& doc_id, std::string_view raw_text,
                        const std::string& source_path = "");

    // Drops the running context between documents (episodic break).
    void reset_context();

    const Config& config() const { return cfg_; }
    const SpacetimeGraph& graph() const { return graph_; }
    SpacetimeGraph& graph() { return graph_; }
    const FragmentStore& store() const { return store_; }
    FragmentStore& store() { return store_; }
    const RunningContext& context() const { return ctx_; }
    RunningContext& context() { return ctx_; }
    const SelectionPolicy& selector() const { return selector_; }
    SelectionPolicy& selector() { return selector_; }
    const CorpusMeta& meta() const { return meta_; }
    CorpusMeta& meta() { return meta_; }
    const std::vector<LegReport>& leg_reports() const { return leg_reports_; }
    std::vector<LegReport>& leg_reports() { return leg_reports_; }
    std::uint64_t next_event_id() const { return next_event_id_; }
    void set_next_event_id(std::uint64_t id) { next_event_id_ = id; }

private:
    struct RetainedEvent {
        std::uint32_t ordinal;
        std::int64_t t;
    };

    void close_leg(const std::string& doc_id, std::uint64_t leg_index,
                   std::vector<RetainedEvent>& leg_events,
                   std::vector<std::uint32_t>& doc_hubs, std::uint64_t leg_sentences,
                   std::uint64_t leg_pool_sum, std::uint64_t leg_word_sum);

    Config cfg_;
    FragmentStore store_;
    RunningContext ctx_;
    SelectionPolicy selector_;
    SpacetimeGraph graph_;
    CorpusMeta meta_;
    std::vector<LegReport> leg_reports_;
    std::uint64_t next_event_id_ = 0;
};

}  // namespace sstg
