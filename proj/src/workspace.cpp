#include "sstg/workspace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "internal_io.hpp"
#include "sstg/errors.hpp"

namespace sstg {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestError("cannot write " + path.string());
    out << content;
    if (!out) throw IngestError("failed writing " + path.string());
}

}  // namespace

Workspace::Workspace(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw ConfigError("cannot create workspace directory: " + root_.string());
}

bool Workspace::has_experiment() const {
    return fs::exists(manifest_path());
}

bool Workspace::has_graph() const {
    return fs::exists(graph_path());
}

void Workspace::reset() {
    for (const fs::path& p : {graph_path(), manifest_path(), fragments_path(), context_path(),
                              selector_path(), config_path()}) {
        std::error_code ec;
        fs::remove(p, ec);
    }
}

void Workspace::save(const Pipeline& pipeline) const {
    spit(config_path(), pipeline.config().to_text());

    // manifest: corpus totals first, then documents in learning order,
    // then the per-leg nu samples
    {
        const CorpusMeta& meta = pipeline.meta();
        std::ostringstream out;
        out << "corpus\t" << meta.words << '\t' << meta.sentences << '\t' << meta.retained
            << '\t' << meta.nu_pool_word_sum << '\t' << meta.nu_sentence_word_sum << '\t'
            << meta.global_tick << '\t' << pipeline.next_event_id() << '\n';
        for (const DocumentStats& d : meta.docs)
            out << "doc\t" << d.doc << '\t' << d.path << '\t' << d.words << '\t' << d.sentences
                << '\t' << d.retained << '\n';
        for (const LegReport& leg : pipeline.leg_reports())
            out << "leg\t" << leg.doc << '\t' << leg.leg << '\t'
                << detail::format_double(leg.nu) << '\t' << leg.retained << '\n';
        spit(manifest_path(), out.str());
    }

    // fragment store
    {
        const FragmentStore& store = pipeline.store();
        std::ostringstream out;
        out << "tick\t" << store.tick() << '\n';
        for (const auto& [key, st] : store.sorted_entries())
            out << key << '\t' << st.n << '\t' << st.count << '\t'
                << detail::format_double(st.relevance) << '\t' << st.last_tick << '\n';
        spit(fragments_path(), out.str());
    }

    // running context
    {
        const RunningContext& ctx = pipeline.context();
        std::ostringstream out;
        out << "tick\t" << ctx.tick() << '\n';
        for (const auto& [key, e] : ctx.sorted_entries())
            out << key << '\t' << e.n << '\t' << detail::format_double(e.relevance) << '\t'
                << e.last_tick << '\n';
        spit(context_path(), out.str());
    }

    // selection estimator
    {
        std::ostringstream out;
        out << "density\t" << detail::format_double(pipeline.selector().target_density())
            << '\n';
        out << "state";
        for (double v : pipeline.selector().estimator().state())
            out << '\t' << detail::format_double(v);
        out << '\n';
        spit(selector_path(), out.str());
    }

    save_graph(pipeline.graph());
}

Config Workspace::load_config() const {
    return load_config_file(config_path().string());
}

SpacetimeGraph Workspace::load_graph() const {
    if (!has_graph())
        throw StalenessError("no graph in workspace; run learn first");
    return load_graph_file(graph_path().string());
}

void Workspace::save_graph(const SpacetimeGraph& graph) const {
    sstg::save_graph_file(graph, graph_path().string());
}

CorpusMeta Workspace::load_meta() const {
    if (!has_experiment())
        throw StalenessError("no experiment in workspace; run learn first");
    CorpusMeta meta;
    detail::for_each_line(slurp(manifest_path()), [&](std::string_view line, std::size_t n) {
        auto f = detail::split_tabs(line);
        std::string where = "manifest line " + std::to_string(n);
        if (f[0] == "corpus") {
            if (f.size() != 8) throw ParseError(where + ": corpus row needs 8 fields");
            meta.words = detail::parse_uint(f[1], where);
            meta.sentences = detail::parse_uint(f[2], where);
            meta.retained = detail::parse_uint(f[3], where);
            meta.nu_pool_word_sum = detail::parse_uint(f[4], where);
            meta.nu_sentence_word_sum = detail::parse_uint(f[5], where);
            meta.global_tick = detail::parse_int(f[6], where);
        } else if (f[0] == "doc") {
            if (f.size() != 6) throw ParseError(where + ": doc row needs 6 fields");
            DocumentStats d;
            d.doc = std::string(f[1]);
            d.path = std::string(f[2]);
            d.words = detail::parse_uint(f[3], where);
            d.sentences = detail::parse_uint(f[4], where);
            d.retained = detail::parse_uint(f[5], where);
            meta.docs.push_back(std::move(d));
        } else if (f[0] == "leg") {
            // per-leg nu samples live in load_leg_reports
        } else {
            throw ParseError(where + ": unknown row type");
        }
    });
    return meta;
}

std::vector<LegReport> Workspace::load_leg_reports() const {
    if (!has_experiment())
        throw StalenessError("no experiment in workspace; run learn first");
    std::vector<LegReport> legs;
    detail::for_each_line(slurp(manifest_path()), [&](std::string_view line, std::size_t n) {
        auto f = detail::split_tabs(line);
        if (f[0] != "leg") return;
        std::string where = "manifest line " + std::to_string(n);
        if (f.size() != 5) throw ParseError(where + ": leg row needs 5 fields");
        LegReport leg;
        leg.doc = std::string(f[1]);
        leg.leg = detail::parse_uint(f[2], where);
        leg.nu = detail::parse_double(f[3], where);
        leg.retained = detail::parse_uint(f[4], where);
        legs.push_back(std::move(leg));
    });
    return legs;
}

Pipeline Workspace::resume() const {
    if (!has_experiment())
        throw StalenessError("no experiment in workspace; run learn first");

    Config cfg = load_config();
    Pipeline pipeline(cfg);

    // manifest (also recovers the event id counter)
    {
        std::uint64_t next_event_id = 0;
        detail::for_each_line(slurp(manifest_path()), [&](std::string_view line, std::size_t n) {
            auto f = detail::split_tabs(line);
            if (f[0] == "corpus" && f.size() == 8)
                next_event_id = detail::parse_uint(f[7], "manifest line " + std::to_string(n));
        });
        pipeline.meta() = load_meta();
        pipeline.leg_reports() = load_leg_reports();
        pipeline.set_next_event_id(next_event_id);
    }

    // fragment store
    detail::for_each_line(slurp(fragments_path()), [&](std::string_view line, std::size_t n) {
        auto f = detail::split_tabs(line);
        std::string where = "fragments line " + std::to_string(n);
        if (f[0] == "tick") {
            if (f.size() != 2) throw ParseError(where + ": bad tick row");
            pipeline.store().set_tick(detail::parse_int(f[1], where));
            return;
        }
        if (f.size() != 5) throw ParseError(where + ": entry needs 5 fields");
        FragmentStats st;
        st.n = static_cast<int>(detail::parse_int(f[1], where));
        st.count = detail::parse_uint(f[2], where);
        st.relevance = detail::parse_double(f[3], where);
        st.last_tick = detail::parse_int(f[4], where);
        pipeline.store().restore_entry(std::string(f[0]), st);
    });

    // running context
    detail::for_each_line(slurp(context_path()), [&](std::string_view line, std::size_t n) {
        auto f = detail::split_tabs(line);
        std::string where = "context line " + std::to_string(n);
        if (f[0] == "tick") {
            if (f.size() != 2) throw ParseError(where + ": bad tick row");
            pipeline.context().set_tick(detail::parse_int(f[1], where));
            return;
        }
        if (f.size() != 4) throw ParseError(where + ": entry needs 4 fields");
        RunningContext::Entry e;
        e.n = static_cast<int>(detail::parse_int(f[1], where));
        e.relevance = detail::parse_double(f[2], where);
        e.last_tick = detail::parse_int(f[3], where);
        pipeline.context().restore_entry(std::string(f[0]), e);
    });

    // selection estimator
    detail::for_each_line(slurp(selector_path()), [&](std::string_view line, std::size_t n) {
        auto f = detail::split_tabs(line);
        std::string where = "selector line " + std::to_string(n);
        if (f[0] == "density") return;  // density is fixed by the config
        if (f[0] == "state") {
            std::vector<double> state;
            for (std::size_t i = 1; i < f.size(); ++i)
                state.push_back(detail::parse_double(f[i], where));
            pipeline.selector().estimator().restore(state);
            return;
        }
        throw ParseError(where + ": unknown row type");
    });

    pipeline.graph() = load_graph();
    return pipeline;
}

Workspace::Lock::Lock(fs::path path) : path_(std::move(path)) {
    // "wx": create exclusively; fails when another command holds the lock
    FILE* f = std::fopen(path_.string().c_str(), "wx");
    if (!f) {
        throw ConfigError("workspace is locked by another command (" + path_.string() +
                          " exists); remove the lock file if that command died");
    }
    std::fclose(f);
}

Workspace::Lock::~Lock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

}  // namespace sstg
