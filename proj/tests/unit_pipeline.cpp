#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "corpus_gen.hpp"
#include "sstg/errors.hpp"
#include "sstg/metrics.hpp"
#include "sstg/pipeline.hpp"
#include "sstg/sleep.hpp"
#include "testrng.hpp"

using namespace sstg;

namespace {

Config small_config() {
    Config cfg;
    cfg.target_density = 1.0;  // keep everything on tiny fixtures
    cfg.leg_size = 4;
    cfg.context_floor = 0.1;  // roomy buffer for unit fixtures
    cfg.context_forget_rate = 0.9;
    return cfg;
}

}  // namespace

TEST_CASE("a hub per leg contains the leg's retained events") {
    Config cfg = small_config();
    Pipeline p(cfg);
    p.learn_document("d", "a b. c d. e f. g h. i j. k l. m n. o p. q r.");
    // 9 sentences, legs of 4: legs sized 4, 4, 1
    REQUIRE(p.graph().hub_nodes().size() == 3);
    CHECK(p.meta().retained == 9);
    CHECK(p.graph().event_nodes().size() == 9);

    std::map<std::int64_t, std::size_t> events_per_leg;
    for (const Link& l : p.graph().links())
        if (l.relation == Relation::Contains && l.from.kind == NodeKind::Hub)
            events_per_leg[p.graph().hub(l.from.ordinal).leg] += 1;
    CHECK(events_per_leg == std::map<std::int64_t, std::size_t>{{0, 4}, {1, 4}, {2, 1}});
}

TEST_CASE("a leg that retains two events emits the expected link counts") {
    // leg of 2 retained events; context carries >= 5 fragments
    Config cfg = small_config();
    cfg.leg_size = 2;
    Pipeline p(cfg);
    p.learn_document("d", "red fox runs. red fox sleeps.");
    REQUIRE(p.graph().hub_nodes().size() == 1);

    const HubNode& hub = p.graph().hub_nodes()[0];
    CHECK(hub.fragments.size() >= 5);

    std::size_t contains = 0, hub_expresses = 0;
    for (const Link& l : p.graph().links()) {
        if (l.relation == Relation::Contains && l.from.kind == NodeKind::Hub) ++contains;
        if (l.relation == Relation::Expresses && l.from.kind == NodeKind::Hub) ++hub_expresses;
    }
    CHECK(contains == 2);
    CHECK(hub_expresses == hub.fragments.size());
}

TEST_CASE("identical legs give distinct hubs with identical fragment sets") {
    Config cfg = small_config();
    cfg.leg_size = 2;
    cfg.context_forget_rate = 0.5;
    Pipeline p(cfg);
    // two identical episodes separated far enough that context resets
    p.learn_document("d", "mira sings songs. mira sings songs. mira sings songs. "
                          "mira sings songs.");
    REQUIRE(p.graph().hub_nodes().size() == 2);
    const HubNode& h0 = p.graph().hub_nodes()[0];
    const HubNode& h1 = p.graph().hub_nodes()[1];
    CHECK(h0.ordinal != h1.ordinal);
    CHECK(h0.keys() == h1.keys());
}

TEST_CASE("an unretained leg emits no hub") {
    Config cfg;
    cfg.leg_size = 10;
    cfg.target_density = 0.01;
    cfg.context_floor = 0.1;
    Pipeline p(cfg);
    // first leg: heavy repetition earns high scores; second leg: all
    // hapax words score at the floor and the quantile gate shuts
    std::string text;
    for (int i = 0; i < 10; ++i) text += "storm surge rises. ";
    for (int i = 0; i < 10; ++i) {
        text += "q" + std::to_string(i) + " r" + std::to_string(i) + " s" +
                std::to_string(i) + ". ";
    }
    p.learn_document("d", text);
    REQUIRE(p.graph().hub_nodes().size() == 1);
    CHECK(p.graph().hub_nodes()[0].leg == 0);
}

TEST_CASE("follows chains stay inside their documents") {
    Config cfg = small_config();
    Pipeline p(cfg);
    p.learn_document("a", "one two. three four. five six.");
    p.learn_document("b", "seven eight. nine ten. eleven twelve.");

    std::size_t event_follows = 0;
    for (const Link& l : p.graph().links()) {
        if (l.relation != Relation::Follows || l.from.kind != NodeKind::Event) continue;
        ++event_follows;
        CHECK(p.graph().event(l.from.ordinal).doc == p.graph().event(l.to.ordinal).doc);
        CHECK(p.graph().event(l.from.ordinal).t < p.graph().event(l.to.ordinal).t);
    }
    CHECK(event_follows == 2 + 2);
}

TEST_CASE("follows is a union of simple paths") {
    Config cfg;
    cfg.target_density = 0.5;
    cfg.leg_size = 8;
    cfg.context_floor = 0.1;
    Pipeline p(cfg);
    std::string text = testsupport::generate_novel(83, 900);
    p.learn_document("d", text);

    std::map<std::uint32_t, int> out_deg, in_deg;
    for (const Link& l : p.graph().links()) {
        if (l.relation != Relation::Follows || l.from.kind != NodeKind::Event) continue;
        out_deg[l.from.ordinal] += 1;
        in_deg[l.to.ordinal] += 1;
    }
    for (const auto& [node, d] : out_deg) CHECK(d <= 1);
    for (const auto& [node, d] : in_deg) CHECK(d <= 1);
}

TEST_CASE("duplicate document ids are rejected") {
    Pipeline p(small_config());
    p.learn_document("d", "a b.");
    CHECK_THROWS_AS(p.learn_document("d", "c d."), ConfigError);
}

TEST_CASE("a single retained event has no follows links") {
    Pipeline p(small_config());
    p.learn_document("d", "lonely sentence here.");
    CHECK(p.graph().event_nodes().size() == 1);
    CHECK(p.graph().link_count(Relation::Follows) == 0);
}

TEST_CASE("merging two novels can collapse the region structure") {
    // qualitative shape check: shared vocabulary bridges the hubs of
    // different narratives and the percolation monitor says so
    Config cfg;
    Pipeline merged(cfg);
    merged.learn_document("voyage", testsupport::generate_novel(555, 40000));
    merged.learn_document("harbour", testsupport::generate_novel(556, 30000));
    sleep_graph(merged.graph(), Horizon{});

    CorpusStats stats = compute_stats(merged.graph(), merged.meta());
    REQUIRE(stats.regions.has_value());
    CHECK(*stats.regions < stats.hubs / 2);  // far fewer regions than hubs

    Pipeline alone(cfg);
    alone.learn_document("voyage", testsupport::generate_novel(555, 40000));
    sleep_graph(alone.graph(), Horizon{});
    CorpusStats alone_stats = compute_stats(alone.graph(), alone.meta());

    // the merged run concentrates hubs into fewer regions than the
    // single narrative keeps for itself
    CHECK(*stats.regions <= *alone_stats.regions);
}

TEST_CASE("hub fragments come from the context snapshot at leg close") {
    Config cfg = small_config();
    cfg.leg_size = 3;
    Pipeline p(cfg);
    p.learn_document("d", "wolf hunts deer. wolf hunts deer. wolf hunts deer.");

    // replay the context by hand
    RunningContext oracle(cfg.context_forget_rate, cfg.context_floor);
    std::int64_t tick = 0;
    for (const SentenceEvent& s : tokenize_document("wolf hunts deer. wolf hunts deer. "
                                                    "wolf hunts deer.",
                                                    "d"))
        oracle.update(fractionate(s.tokens, cfg.n_max), tick++, cfg.boost);

    REQUIRE(p.graph().hub_nodes().size() == 1);
    CHECK(p.graph().hub_nodes()[0].fragments == oracle.snapshot());
}

TEST_CASE("hub expresses every above-floor fragment of its events") {
    Config cfg;
    cfg.target_density = 0.3;
    cfg.leg_size = 12;
    cfg.context_floor = 0.2;
    Pipeline p(cfg);
    p.learn_document("d", testsupport::generate_novel(19, 600));

    const SpacetimeGraph& g = p.graph();
    for (const HubNode& hub : g.hub_nodes()) {
        std::vector<std::string> key_list = hub.keys();
        std::set<std::string> hub_keys(key_list.begin(), key_list.end());
        // the hub's EXPRESSES links cover exactly its snapshot, which in
        // turn holds every event fragment still above the floor (the
        // snapshot-equality case above pins that)
        std::set<std::string> expressed;
        for (NodeId f : g.neighbors(NodeId{NodeKind::Hub, hub.ordinal}, Relation::Expresses,
                                    Direction::Out))
            expressed.insert(g.fragment(f.ordinal).key);
        CHECK(expressed == hub_keys);

        // every contained event expresses only fragments known to the graph
        for (NodeId ev : g.neighbors(NodeId{NodeKind::Hub, hub.ordinal}, Relation::Contains,
                                     Direction::Out))
            CHECK_FALSE(g.neighbors(ev, Relation::Expresses, Direction::Out).empty());
    }
    CHECK(g.discipline_violations() == 0);
}

TEST_CASE("learning twice produces byte-identical graphs") {
    Config cfg;
    cfg.target_density = 0.05;
    cfg.leg_size = 50;
    std::string text = testsupport::generate_novel(29, 4000);

    Pipeline a(cfg), b(cfg);
    a.learn_document("d", text);
    b.learn_document("d", text);
    sleep_graph(a.graph(), Horizon{});
    sleep_graph(b.graph(), Horizon{});
    CHECK(serialize(a.graph()) == serialize(b.graph()));
    CHECK(a.meta().nu().nu == b.meta().nu().nu);
}

TEST_CASE("nu accumulates the buffered words per sentence") {
    Config cfg = small_config();
    cfg.context_floor = 0.5;
    Pipeline p(cfg);
    p.learn_document("d", "ash elm oak. ash elm oak. ash elm oak.");

    // oracle replay
    RunningContext ctx(cfg.context_forget_rate, cfg.context_floor);
    std::uint64_t pool_sum = 0, word_sum = 0;
    std::int64_t tick = 0;
    for (const SentenceEvent& s :
         tokenize_document("ash elm oak. ash elm oak. ash elm oak.", "d")) {
        ctx.update(fractionate(s.tokens, cfg.n_max), tick++, cfg.boost);
        pool_sum += ctx.pool_words();
        word_sum += s.tokens.size();
    }
    CHECK(p.meta().nu_pool_word_sum == pool_sum);
    CHECK(p.meta().nu_sentence_word_sum == word_sum);
    CHECK(p.meta().nu().nu == doctest::Approx(double(pool_sum) / double(word_sum)));
}

TEST_CASE("per-leg reports carry a nu sample per leg") {
    Config cfg = small_config();
    Pipeline p(cfg);
    p.learn_document("d", "a b. c d. e f. g h. i j.");
    REQUIRE(p.leg_reports().size() == 2);
    CHECK(p.leg_reports()[0].leg == 0);
    CHECK(p.leg_reports()[1].leg == 1);
    CHECK(p.leg_reports()[0].nu >= 0.0);
}
