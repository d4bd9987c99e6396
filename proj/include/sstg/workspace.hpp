#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "sstg/config.hpp"
#include "sstg/graph.hpp"
#include "sstg/pipeline.hpp"

namespace sstg {

// On-disk home of one experiment: the learned graph, the fragment
// store, the running context, the selection state, and the corpus
// manifest (documents in learning order -- order matters).
class Workspace {
public:
    explicit Workspace(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path graph_path() const { return root_ / "graph.sstg"; }
    std::filesystem::path manifest_path() const { return root_ / "manifest.tsv"; }
    std::filesystem::path fragments_path() const { return root_ / "fragments.tsv"; }
    std::filesystem::path context_path() const { return root_ / "context.tsv"; }
    std::filesystem::path selector_path() const { return root_ / "selector.tsv"; }
    std::filesystem::path config_path() const { return root_ / "config.cfg"; }

    bool has_experiment() const;
    bool has_graph() const;

    // Removes all experiment files (reset semantics).
    void reset();

    // Persists the full pipeline state; learning order is kept in the
    // manifest.
    void save(const Pipeline& pipeline) const;

    // Rehydrates the pipeline exactly as saved, so a merge run can
    // continue the experiment.
    Pipeline resume() const;

    Config load_config() const;
    SpacetimeGraph load_graph() const;
    void save_graph(const SpacetimeGraph& graph) const;
    CorpusMeta load_meta() const;
    std::vector<LegReport> load_leg_reports() const;

    // Advisory lock held by mutating commands. Throws ConfigError when
    // the workspace is already locked.
    class Lock {
    public:
        explicit Lock(std::filesystem::path path);
        ~Lock();
        Lock(const Lock&) = delete;
        Lock& operator=(const Lock&) = delete;

    private:
        std::filesystem::path path_;
    };

    Lock acquire_lock() const { return Lock(root_ / ".lock"); }

private:
    std::filesystem::path root_;
};

}  // namespace sstg
