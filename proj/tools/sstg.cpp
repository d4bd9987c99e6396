// sstg -- narrative spacetime graph toolkit.
//
// learn -> sleep -> (concepts | themes | regions | stats | narrate |
// explore | export) over a workspace directory.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sstg/config.hpp"
#include "sstg/errors.hpp"
#include "sstg/fragments.hpp"
#include "sstg/graph.hpp"
#include "sstg/ingest.hpp"
#include "sstg/metrics.hpp"
#include "sstg/narrator.hpp"
#include "sstg/pipeline.hpp"
#include "sstg/sleep.hpp"
#include "sstg/workspace.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Missing-stage problems are usage errors with an actionable message.
struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::string workspace = "workspace";
    std::string config_file;
    std::vector<std::string> sets;
};

sstg::Config effective_config(const GlobalOptions& global, const sstg::Workspace& ws,
                              bool prefer_saved) {
    sstg::Config cfg;
    if (prefer_saved && fs::exists(ws.config_path())) cfg = ws.load_config();
    if (!global.config_file.empty()) cfg = sstg::load_config_file(global.config_file, cfg);
    for (const std::string& kv : global.sets) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw sstg::ConfigError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

std::string sanitize_doc_id(std::string stem) {
    for (char& c : stem)
        if (c == '\t' || c == '\n' || c == '\r') c = '_';
    if (stem.empty()) stem = "doc";
    return stem;
}

std::string unique_doc_id(const sstg::CorpusMeta& meta, const std::string& base) {
    auto taken = [&meta](const std::string& id) {
        for (const auto& d : meta.docs)
            if (d.doc == id) return true;
        return false;
    };
    if (!taken(base)) return base;
    for (int k = 2;; ++k) {
        std::string candidate = base + "_" + std::to_string(k);
        if (!taken(candidate)) return candidate;
    }
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw sstg::IngestError("cannot write " + out_path);
    out << content;
}

sstg::Horizon horizon_of(const sstg::Config& cfg) {
    return sstg::Horizon{cfg.weak_max, cfg.meaningful_max, cfg.self_min};
}

int cmd_learn(const GlobalOptions& global, const std::vector<std::string>& files, bool merge,
              bool reset_context) {
    sstg::Workspace ws{global.workspace};
    auto lock = ws.acquire_lock();

    // all-or-nothing: verify every file before touching the workspace
    for (const std::string& path : files) {
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw sstg::IngestError("cannot open file: " + path);
    }

    sstg::Config cfg = effective_config(global, ws, /*prefer_saved=*/merge);

    std::optional<sstg::Pipeline> pipeline;
    if (merge && ws.has_experiment()) {
        pipeline.emplace(ws.resume());
    } else {
        ws.reset();
        pipeline.emplace(cfg);
    }

    if (!merge && files.size() > 1)
        std::cerr << "note: without --merge each file is an independent experiment; "
                     "the workspace keeps the last one\n";

    for (const std::string& path : files) {
        if (!merge) {
            // each file is a fresh experiment
            pipeline.emplace(cfg);
        }
        if (reset_context) pipeline->reset_context();
        std::string doc_id =
            unique_doc_id(pipeline->meta(), sanitize_doc_id(fs::path(path).stem().string()));
        pipeline->learn_document(doc_id, sstg::read_text_file(path), path);
        const sstg::DocumentStats& d = pipeline->meta().docs.back();
        std::cerr << "learned " << doc_id << ": " << d.words << " words, " << d.sentences
                  << " sentences, " << d.retained << " retained\n";
    }

    ws.save(*pipeline);
    std::cerr << "workspace " << ws.root().string() << ": " << pipeline->meta().retained
              << " events, " << pipeline->graph().hub_nodes().size() << " hubs, nu="
              << (pipeline->meta().sentences ? pipeline->meta().nu().nu : 0.0) << "\n";
    return kExitOk;
}

int cmd_sleep(const GlobalOptions& global) {
    sstg::Workspace ws{global.workspace};
    auto lock = ws.acquire_lock();
    if (!ws.has_graph())
        throw StageError("no graph in workspace '" + global.workspace + "'; run learn first");

    sstg::Config cfg = effective_config(global, ws, /*prefer_saved=*/true);
    sstg::SpacetimeGraph graph = ws.load_graph();
    sstg::SleepReport report =
        sstg::sleep_graph(graph, horizon_of(cfg), cfg.overlap_union_denominator);
    ws.save_graph(graph);
    std::cerr << "sleep: compared " << report.pairs_compared << " coactive pairs, installed "
              << report.near_installed << " NEAR links, formed " << report.regions_formed
              << " regions\n";
    return kExitOk;
}

int cmd_concepts(const GlobalOptions& global, std::uint64_t min_count, double min_relevance,
                 std::size_t top, const std::string& out_path) {
    sstg::Workspace ws{global.workspace};
    if (!ws.has_experiment())
        throw StageError("no experiment in workspace '" + global.workspace +
                         "'; run learn first");
    sstg::Pipeline pipeline = ws.resume();
    std::vector<sstg::InvariantRow> rows =
        pipeline.store().invariants(pipeline.store().tick(), min_count, min_relevance);
    if (top > 0 && rows.size() > top) rows.resize(top);
    write_output(out_path, sstg::format_invariant_dump(rows));
    return kExitOk;
}

int cmd_regions(const GlobalOptions& global, const std::string& out_path) {
    sstg::Workspace ws{global.workspace};
    if (!ws.has_graph())
        throw StageError("no graph in workspace '" + global.workspace + "'; run learn first");
    sstg::SpacetimeGraph graph = ws.load_graph();
    if (!graph.slept())
        throw StageError("graph has no regions yet; run sleep first");
    write_output(out_path, sstg::format_region_report(graph));
    return kExitOk;
}

int cmd_themes(const GlobalOptions& global, std::size_t top_k, const std::string& out_path) {
    sstg::Workspace ws{global.workspace};
    if (!ws.has_graph())
        throw StageError("no graph in workspace '" + global.workspace + "'; run learn first");
    sstg::SpacetimeGraph graph = ws.load_graph();
    if (!graph.slept())
        throw StageError("graph has no regions yet; run sleep first");

    std::ostringstream out;
    for (const sstg::RegionNode& region : sstg::regions(graph)) {
        out << "region " << region.ordinal << ":";
        std::vector<sstg::SpectrumEntry> top = sstg::themes(region, top_k);
        if (top.empty()) {
            out << " (no stable theme)";
        } else {
            for (std::size_t i = 0; i < top.size(); ++i)
                out << (i ? ", " : " ") << top[i].key << " (x" << top[i].multiplicity << ")";
        }
        out << '\n';
    }
    write_output(out_path, out.str());
    return kExitOk;
}

int cmd_stats(const GlobalOptions& global, bool csv, bool legs,
              const std::string& nu_sweep_arg, const std::string& out_path) {
    sstg::Workspace ws{global.workspace};

    if (legs) {
        if (!ws.has_experiment())
            throw StageError("no experiment in workspace '" + global.workspace +
                             "'; run learn first");
        std::ostringstream out;
        out << "doc,leg,nu,retained\n";
        out.precision(17);
        for (const sstg::LegReport& leg : ws.load_leg_reports())
            out << leg.doc << ',' << leg.leg << ',' << leg.nu << ',' << leg.retained << '\n';
        write_output(out_path, out.str());
        return kExitOk;
    }

    if (!nu_sweep_arg.empty()) {
        if (!ws.has_experiment())
            throw StageError("no experiment in workspace '" + global.workspace +
                             "'; run learn first");
        std::vector<double> targets;
        std::istringstream in(nu_sweep_arg);
        std::string token;
        while (std::getline(in, token, ',')) {
            try {
                targets.push_back(std::stod(token));
            } catch (...) {
                throw StageError("--nu-sweep expects comma-separated numbers, got '" + token +
                                 "'");
            }
        }
        // the sweep reprocesses the corpus from its source files
        std::vector<sstg::CorpusDoc> docs;
        for (const sstg::DocumentStats& d : ws.load_meta().docs) {
            if (d.path.empty())
                throw StageError("document '" + d.doc +
                                 "' has no source path recorded; cannot re-process");
            docs.push_back(sstg::CorpusDoc{d.doc, sstg::read_text_file(d.path)});
        }
        sstg::Config cfg = effective_config(global, ws, true);
        std::ostringstream out;
        out << "target_nu,measured_nu,context_floor,near_links,regions\n";
        out.precision(17);
        for (const sstg::NuSweepRow& row : sstg::nu_sweep(docs, cfg, targets))
            out << row.target_nu << ',' << row.measured_nu << ',' << row.context_floor << ','
                << row.near_links << ',' << row.regions << '\n';
        write_output(out_path, out.str());
        return kExitOk;
    }

    if (!ws.has_experiment()) {
        // an empty workspace still yields a well-formed header-only CSV
        if (csv) {
            write_output(out_path, sstg::stats_csv_header());
            return kExitOk;
        }
        throw StageError("no experiment in workspace '" + global.workspace +
                         "'; run learn first");
    }
    sstg::SpacetimeGraph graph = ws.load_graph();
    sstg::CorpusStats stats = sstg::compute_stats(graph, ws.load_meta());
    if (csv) {
        write_output(out_path, sstg::stats_csv_header() + sstg::stats_csv_row(stats));
    } else {
        std::ostringstream out;
        out << sstg::format_stats_text(stats);
        sstg::Config cfg = effective_config(global, ws, true);
        if (auto warning = sstg::percolation_warning(stats, cfg.percolation_threshold))
            out << *warning << '\n';
        write_output(out_path, out.str());
    }
    return kExitOk;
}

int cmd_narrate(const GlobalOptions& global, const std::string& mode, const std::string& seed,
                std::size_t max_len, const std::string& binding, std::size_t top_k,
                bool verbose, bool stochastic, std::uint64_t rng_seed,
                const std::string& out_path) {
    sstg::Workspace ws{global.workspace};
    if (!ws.has_graph())
        throw StageError("no graph in workspace '" + global.workspace + "'; run learn first");
    sstg::Config cfg = effective_config(global, ws, true);
    sstg::SpacetimeGraph graph = ws.load_graph();

    sstg::NarratorOptions opts;
    opts.verbose = verbose;
    opts.stochastic = stochastic;
    opts.rng_seed = rng_seed;
    opts.coactivation_boost = cfg.boost;
    opts.context_forget_rate = cfg.narrate_context_forget_rate;
    opts.context_floor = cfg.narrate_context_floor;

    std::string rendered;
    if (mode == "playback") {
        if (seed.empty()) throw StageError("playback needs --seed <event ordinal>");
        std::uint32_t ordinal = 0;
        try {
            ordinal = static_cast<std::uint32_t>(std::stoul(seed));
        } catch (...) {
            throw sstg::LookupError("playback seed must be an event ordinal, got '" + seed +
                                    "'");
        }
        rendered = sstg::playback(graph, sstg::NodeId{sstg::NodeKind::Event, ordinal}, max_len,
                                  opts)
                       .rendered;
    } else if (mode == "lateral") {
        if (seed.empty()) throw StageError("lateral needs --seed <fragment>");
        sstg::RunningContext ctx = sstg::make_session_context(cfg);
        rendered = sstg::lateral(graph, seed, ctx, max_len, opts).rendered;
    } else if (mode == "micro") {
        if (seed.empty()) throw StageError("micro needs --seed <frag1,frag2,...>");
        std::vector<std::string> keys;
        std::string current;
        std::istringstream in(seed);
        while (std::getline(in, current, ',')) keys.push_back(current);
        sstg::Relation rel = sstg::Relation::Follows;
        if (binding == "contains") rel = sstg::Relation::Contains;
        else if (binding == "near") rel = sstg::Relation::Near;
        else if (binding != "follows")
            throw StageError("--binding must be follows, contains, or near");
        std::ostringstream out;
        for (const std::string& utterance : sstg::micro_recombine(keys, rel))
            out << utterance << '\n';
        rendered = out.str();
    } else if (mode == "macro") {
        if (!graph.slept()) throw StageError("macro narration needs regions; run sleep first");
        std::ostringstream out;
        for (const std::string& line : sstg::macro_narrate(graph, top_k)) out << line << '\n';
        rendered = out.str();
    } else {
        throw StageError("--mode must be playback, lateral, micro, or macro");
    }

    if (!rendered.empty() && rendered.back() != '\n') rendered += '\n';
    write_output(out_path, rendered);
    return kExitOk;
}

int cmd_export(const GlobalOptions& global, const std::string& out_path) {
    sstg::Workspace ws{global.workspace};
    if (!ws.has_graph())
        throw StageError("no graph in workspace '" + global.workspace + "'; run learn first");
    // byte-exact copy of the canonical graph file
    std::ifstream in(ws.graph_path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    write_output(out_path, buf.str());
    return kExitOk;
}

int cmd_explore(const GlobalOptions& global) {
    sstg::Workspace ws{global.workspace};
    if (!ws.has_graph())
        throw StageError("no graph in workspace '" + global.workspace + "'; run learn first");
    sstg::Config cfg = effective_config(global, ws, true);
    sstg::SpacetimeGraph graph = ws.load_graph();

    sstg::NarratorOptions opts;
    opts.coactivation_boost = cfg.boost;
    opts.context_forget_rate = cfg.narrate_context_forget_rate;
    opts.context_floor = cfg.narrate_context_floor;
    sstg::ExploreSession session(graph, opts);

    std::cerr << "explore: seed <fragment> | next | jump | up | down | ctx | score | quit\n";
    std::string line;
    bool quit = false;
    while (!quit && std::getline(std::cin, line)) {
        std::string response = session.handle(line, &quit);
        if (!response.empty()) std::cout << response << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOptions global;

    CLI::App app{"sstg: narrative spacetime graph toolkit"};
    app.require_subcommand(1);
    app.add_option("-w,--workspace", global.workspace, "workspace directory")
        ->envname("SSTG_WORKSPACE");
    app.add_option("--config", global.config_file, "key=value config file");
    app.add_option("--set", global.sets, "override one config key (key=value)");

    // learn
    std::vector<std::string> files;
    bool merge = false;
    bool reset_context = false;
    CLI::App* learn = app.add_subcommand("learn", "ingest documents into the workspace");
    learn->add_option("files", files, "plain-text files (UTF-8)")->required();
    learn->add_flag("--merge", merge, "continue the experiment across files and runs");
    learn->add_flag("--reset-context", reset_context,
                    "drop the running context before each file");

    CLI::App* sleepcmd =
        app.add_subcommand("sleep", "compare hubs, install NEAR links, form regions");

    // concepts
    std::uint64_t min_count = 2;
    double min_relevance = 0.0;
    std::size_t top = 0;
    std::string out_path;
    CLI::App* concepts =
        app.add_subcommand("concepts", "dump longitudinal invariants (count, n, key)");
    concepts->add_option("--min-count", min_count, "minimum occurrence count")
        ->capture_default_str();
    concepts->add_option("--min-relevance", min_relevance, "minimum decayed relevance")
        ->capture_default_str();
    concepts->add_option("--top", top, "keep only the first N rows (0 = all)");
    concepts->add_option("--out", out_path, "write to file instead of stdout");

    // themes / regions
    std::size_t top_k = 10;
    std::string themes_out;
    CLI::App* themes = app.add_subcommand("themes", "one ranked theme line per region");
    themes->add_option("--top-k", top_k, "spectrum entries per region")->capture_default_str();
    themes->add_option("--out", themes_out, "write to file instead of stdout");

    std::string regions_out;
    CLI::App* regionscmd = app.add_subcommand("regions", "full region report with spectra");
    regionscmd->add_option("--out", regions_out, "write to file instead of stdout");

    // stats
    bool csv = false;
    bool legs = false;
    std::string nu_sweep_arg;
    std::string stats_out;
    CLI::App* stats = app.add_subcommand("stats", "corpus scaling measures");
    stats->add_flag("--csv", csv, "emit CSV instead of text");
    stats->add_flag("--legs", legs, "per-leg nu samples as CSV");
    stats->add_option("--nu-sweep", nu_sweep_arg,
                      "re-process the corpus at the given nu targets (comma-separated) and "
                      "report NEAR links and regions per target");
    stats->add_option("--out", stats_out, "write to file instead of stdout");

    // narrate
    std::string mode;
    std::string seed;
    std::size_t max_len = 10;
    std::string binding = "follows";
    std::size_t narrate_top_k = 3;
    bool verbose = false;
    bool stochastic = false;
    std::uint64_t rng_seed = 0;
    std::string narrate_out;
    CLI::App* narrate = app.add_subcommand("narrate", "generate a narrative from the graph");
    narrate->add_option("--mode", mode, "playback | lateral | micro | macro")->required();
    narrate->add_option("--seed", seed,
                        "event ordinal (playback), fragment (lateral), or fragment list "
                        "(micro)");
    narrate->add_option("--max-len", max_len, "maximum number of events")
        ->capture_default_str();
    narrate->add_option("--binding", binding, "micro binding: follows | contains | near")
        ->capture_default_str();
    narrate->add_option("--top-k", narrate_top_k, "macro spectrum entries per region")
        ->capture_default_str();
    narrate->add_flag("--verbose", verbose, "annotate steps with [relation:score]");
    narrate->add_flag("--stochastic", stochastic, "sample candidates instead of argmax");
    narrate->add_option("--rng-seed", rng_seed, "seed for --stochastic");
    narrate->add_option("--out", narrate_out, "write to file instead of stdout");

    CLI::App* explore = app.add_subcommand("explore", "interactive graph walk");

    std::string export_out;
    CLI::App* exportcmd = app.add_subcommand("export", "write the canonical .sstg graph file");
    exportcmd->add_option("--out", export_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*learn) return cmd_learn(global, files, merge, reset_context);
        if (*sleepcmd) return cmd_sleep(global);
        if (*concepts) return cmd_concepts(global, min_count, min_relevance, top, out_path);
        if (*themes) return cmd_themes(global, top_k, themes_out);
        if (*regionscmd) return cmd_regions(global, regions_out);
        if (*stats) return cmd_stats(global, csv, legs, nu_sweep_arg, stats_out);
        if (*narrate)
            return cmd_narrate(global, mode, seed, max_len, binding, narrate_top_k, verbose,
                               stochastic, rng_seed, narrate_out);
        if (*explore) return cmd_explore(global);
        if (*exportcmd) return cmd_export(global, export_out);
    } catch (const StageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sstg::StalenessError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sstg::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const sstg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
