#include "sstg/pipeline.hpp"

#include <algorithm>

#include "sstg/errors.hpp"

namespace sstg {

ContextRatio CorpusMeta::nu() const {
    if (sentences == 0) return ContextRatio{0.0, 0};
    return context_ratio(nu_pool_word_sum, nu_sentence_word_sum, sentences);
}

Pipeline::Pipeline(Config cfg)
    : cfg_(std::move(cfg)),
      store_(cfg_.forget_rate),
      ctx_(cfg_.context_forget_rate, cfg_.context_floor),
      selector_(cfg_.target_density) {
    cfg_.validate();
}

void Pipeline::reset_context() {
    ctx_.clear();
}

void Pipeline::close_leg(const std::string& doc_id, std::uint64_t leg_index,
                         std::vector<RetainedEvent>& leg_events,
                         std::vector<std::uint32_t>& doc_hubs, std::uint64_t leg_sentences,
                         std::uint64_t leg_pool_sum, std::uint64_t leg_word_sum) {
    if (leg_sentences > 0 && leg_word_sum > 0) {
        LegReport report;
        report.doc = doc_id;
        report.leg = leg_index;
        report.nu = double(leg_pool_sum) / double(leg_word_sum);
        report.retained = leg_events.size();
        leg_reports_.push_back(std::move(report));
    }

    if (!leg_events.empty()) {
        // One hub per leg: the context snapshot at leg close. A starved
        // buffer leaves the hub with an empty fragment set; such hubs
        // have nothing to overlap and stay out of the interferometry.
        std::vector<std::pair<std::string, double>> fragments = ctx_.snapshot();
        NodeId hub = graph_.add_hub(doc_id, static_cast<std::int64_t>(leg_index), fragments);
        for (const RetainedEvent& ev : leg_events)
            graph_.add_link(Relation::Contains, hub, NodeId{NodeKind::Event, ev.ordinal});
        for (const auto& [key, weight] : fragments)
            graph_.add_link(Relation::Expresses, hub, graph_.add_fragment(key));
        doc_hubs.push_back(hub.ordinal);
    }

    leg_events.clear();
    store_.prune(store_.tick(), cfg_.prune_floor);
}

void Pipeline::learn_document(const std::string& doc_id, std::string_view raw_text,
                              const std::string& source_path) {
    for (const DocumentStats& d : meta_.docs)
        if (d.doc == doc_id)
            throw ConfigError("document id already learned in this experiment: " + doc_id);

    IngestOptions ingest_opts;
    ingest_opts.terminators = cfg_.sentence_terminators;
    std::vector<SentenceEvent> sentences = tokenize_document(raw_text, doc_id, ingest_opts);

    DocumentStats doc_stats;
    doc_stats.doc = doc_id;
    doc_stats.path = source_path;

    std::vector<RetainedEvent> leg_events;
    std::vector<std::uint32_t> doc_hubs;
    std::vector<std::uint32_t> doc_event_ordinals;
    std::uint64_t leg_index = 0;
    std::uint64_t leg_sentences = 0;
    std::uint64_t leg_pool_sum = 0;
    std::uint64_t leg_word_sum = 0;

    for (SentenceEvent& sentence : sentences) {
        std::int64_t tick = meta_.global_tick++;
        std::vector<Fragment> fragments = fractionate(sentence.tokens, cfg_.n_max);

        // Order matters: observe first (first sight earns the boost),
        // score against the pre-update context (co-activation means
        // already-buffered), update the buffer last.
        store_.observe(fragments, tick, cfg_.boost);
        double importance =
            score_sentence(fragments, store_, ctx_, tick, cfg_.coactivation_weight);
        ctx_.update(fragments, tick, cfg_.boost);

        sentence.id = next_event_id_++;
        sentence.importance = importance;
        sentence.retained = selector_.decide(importance);

        std::uint64_t words = sentence.tokens.size();
        doc_stats.words += words;
        doc_stats.sentences += 1;
        std::uint64_t pool = ctx_.pool_words();
        meta_.nu_pool_word_sum += pool;
        meta_.nu_sentence_word_sum += words;
        leg_pool_sum += pool;
        leg_word_sum += words;
        ++leg_sentences;

        if (sentence.retained) {
            NodeId ev = graph_.add_event(doc_id, sentence.t, importance, sentence.text);
            std::vector<std::string> seen;
            for (const Fragment& f : fragments) seen.push_back(f.key);
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            for (const std::string& key : seen)
                graph_.add_link(Relation::Expresses, ev, graph_.add_fragment(key));
            leg_events.push_back(RetainedEvent{ev.ordinal, sentence.t});
            doc_event_ordinals.push_back(ev.ordinal);
            doc_stats.retained += 1;
        }

        if (leg_sentences == cfg_.leg_size) {
            close_leg(doc_id, leg_index, leg_events, doc_hubs, leg_sentences, leg_pool_sum,
                      leg_word_sum);
            ++leg_index;
            leg_sentences = 0;
            leg_pool_sum = 0;
            leg_word_sum = 0;
        }
    }
    if (leg_sentences > 0)
        close_leg(doc_id, leg_index, leg_events, doc_hubs, leg_sentences, leg_pool_sum,
                  leg_word_sum);

    // FOLLOWS chains never cross documents.
    std::vector<NodeId> event_chain, hub_chain;
    for (std::uint32_t ordinal : doc_event_ordinals)
        event_chain.push_back(NodeId{NodeKind::Event, ordinal});
    for (std::uint32_t ordinal : doc_hubs) hub_chain.push_back(NodeId{NodeKind::Hub, ordinal});
    link_follows(graph_, event_chain);
    link_follows(graph_, hub_chain);

    meta_.words += doc_stats.words;
    meta_.sentences += doc_stats.sentences;
    meta_.retained += doc_stats.retained;
    meta_.docs.push_back(std::move(doc_stats));
}

}  // namespace sstg
