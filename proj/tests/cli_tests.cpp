// End-to-end tests of the sstg binary: stage gating, exit codes,
// reset/merge semantics, and output formats, all through the shell.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "corpus_gen.hpp"
#include "testrng.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

class CliSandbox {
public:
    CliSandbox() {
        dir_ = fs::temp_directory_path() /
               ("sstg_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~CliSandbox() { fs::remove_all(dir_); }

    const fs::path& dir() const { return dir_; }
    fs::path workspace() const { return dir_ / "ws"; }

    fs::path write(const std::string& name, const std::string& content) const {
        fs::path p = dir_ / name;
        spit(p, content);
        return p;
    }

    CliResult run(const std::string& args, const std::string& stdin_text = "") const {
        fs::path out = dir_ / ".out", err = dir_ / ".err", in = dir_ / ".in";
        spit(in, stdin_text);
        std::string cmd = std::string(SSTG_CLI_PATH) + " -w " + workspace().string() + " " +
                          args + " <" + in.string() + " >" + out.string() + " 2>" +
                          err.string();
        int status = std::system(cmd.c_str());
        CliResult result;
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.out = slurp(out);
        result.err = slurp(err);
        return result;
    }

private:
    fs::path dir_;
    static int counter_;
};

int CliSandbox::counter_ = 0;

// small corpus with guaranteed hubs and follow chains
std::string tiny_config_args() {
    return "--set target_density=1.0 --set leg_size=20 --set context_floor=0.5 ";
}

}  // namespace

TEST_CASE("learn then sleep produce workspace files and reports") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", testsupport::generate_novel(71, 1500));

    CliResult learn = box.run(tiny_config_args() + "learn " + doc.string());
    REQUIRE(learn.exit_code == 0);
    CHECK(fs::exists(box.workspace() / "graph.sstg"));
    CHECK(fs::exists(box.workspace() / "manifest.tsv"));
    CHECK(fs::exists(box.workspace() / "fragments.tsv"));
    CHECK_FALSE(fs::exists(box.workspace() / ".lock"));  // released

    CliResult sleep1 = box.run("sleep");
    REQUIRE(sleep1.exit_code == 0);
    std::string after_first = slurp(box.workspace() / "graph.sstg");

    CliResult sleep2 = box.run("sleep");
    REQUIRE(sleep2.exit_code == 0);
    CHECK(slurp(box.workspace() / "graph.sstg") == after_first);  // idempotent

    CliResult concepts = box.run("concepts --min-count 3 --top 5");
    REQUIRE(concepts.exit_code == 0);
    // dump format: count \t n \t key
    std::istringstream lines(concepts.out);
    std::string line;
    std::uint64_t last_count = UINT64_MAX;
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = line.find('\t', tab1 + 1);
        REQUIRE(tab1 != std::string::npos);
        REQUIRE(tab2 != std::string::npos);
        std::uint64_t count = std::stoull(line.substr(0, tab1));
        CHECK(count <= last_count);  // sorted by count descending
        last_count = count;
    }
    CHECK(rows == 5);

    CliResult regions = box.run("regions");
    REQUIRE(regions.exit_code == 0);
    CHECK(regions.out.find("REGION 0 hubs=") != std::string::npos);

    CliResult themes = box.run("themes --top-k 3");
    REQUIRE(themes.exit_code == 0);
    CHECK(themes.out.find("region 0:") != std::string::npos);

    CliResult stats = box.run("stats --csv");
    REQUIRE(stats.exit_code == 0);
    CHECK(stats.out.find("w,sentences,retained,hubs,") == 0);
    CHECK(std::count(stats.out.begin(), stats.out.end(), '\n') == 2);  // header + one corpus
}

TEST_CASE("learning twice without merge resets to identical state") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", testsupport::generate_novel(72, 1200));

    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    std::string first = slurp(box.workspace() / "graph.sstg");
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    CHECK(slurp(box.workspace() / "graph.sstg") == first);
}

TEST_CASE("merge across invocations equals one merged invocation") {
    CliSandbox split_box;
    CliSandbox merged_box;
    std::string text_a = testsupport::generate_novel(73, 1000);
    std::string text_b = testsupport::generate_novel(74, 1000);

    fs::path a1 = split_box.write("a.txt", text_a);
    fs::path b1 = split_box.write("b.txt", text_b);
    REQUIRE(split_box.run(tiny_config_args() + "learn --merge " + a1.string()).exit_code == 0);
    REQUIRE(split_box.run(tiny_config_args() + "learn --merge " + b1.string()).exit_code == 0);

    fs::path a2 = merged_box.write("a.txt", text_a);
    fs::path b2 = merged_box.write("b.txt", text_b);
    REQUIRE(merged_box
                .run(tiny_config_args() + "learn --merge " + a2.string() + " " + b2.string())
                .exit_code == 0);

    CHECK(slurp(split_box.workspace() / "graph.sstg") ==
          slurp(merged_box.workspace() / "graph.sstg"));
}

TEST_CASE("stage gating and exit codes") {
    CliSandbox box;

    SUBCASE("sleep before learn is a usage error naming the stage") {
        CliResult r = box.run("sleep");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("learn") != std::string::npos);
    }
    SUBCASE("regions before sleep is a usage error naming the stage") {
        fs::path doc = box.write("s.txt", "One two three. Four five six.");
        REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
        CliResult r = box.run("regions");
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("sleep") != std::string::npos);
    }
    SUBCASE("stats --csv on an empty workspace is a header-only success") {
        CliResult r = box.run("stats --csv");
        CHECK(r.exit_code == 0);
        CHECK(r.out == "w,sentences,retained,hubs,follows_links,contains_links,near_links,"
                       "near_max,regions,nu,nu_window,degree_histogram\n");
    }
    SUBCASE("unreadable files are data errors and leave no workspace") {
        CliResult r = box.run("learn /nonexistent/騎missing.txt");
        CHECK(r.exit_code == 2);
        CHECK_FALSE(fs::exists(box.workspace() / "graph.sstg"));
    }
    SUBCASE("unknown flags are usage errors") {
        CliResult r = box.run("learn --frobnicate x.txt");
        CHECK(r.exit_code == 1);
    }
    SUBCASE("bad config values are usage errors") {
        fs::path doc = box.write("s.txt", "One two. Three four.");
        CliResult r = box.run("--set forget_rate=7 learn " + doc.string());
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("narrate modes render from the learned graph") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", testsupport::generate_novel(75, 900));
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    REQUIRE(box.run("sleep").exit_code == 0);

    SUBCASE("playback joins sentences with the FOLLOWED BY marker") {
        CliResult r = box.run("narrate --mode playback --seed 0 --max-len 3");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("FOLLOWED BY") != std::string::npos);
    }
    SUBCASE("micro recombination needs no graph lookups") {
        CliResult r = box.run("narrate --mode micro --seed murder,knife --binding follows");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("knife leads to murder\n") != std::string::npos);
        CHECK(r.out.find("murder knife\n") != std::string::npos);
    }
    SUBCASE("macro narration prints one line per region") {
        CliResult r = box.run("narrate --mode macro --top-k 3");
        REQUIRE(r.exit_code == 0);
        CHECK(std::count(r.out.begin(), r.out.end(), '\n') >= 1);
    }
    SUBCASE("lateral narration seeds on a fragment") {
        // "the" sits in every buffer, so it is expressed by some hub
        CliResult r = box.run("narrate --mode lateral --seed the --max-len 4");
        REQUIRE(r.exit_code == 0);
        CHECK_FALSE(r.out.empty());
    }
    SUBCASE("an absent lateral seed is a data error") {
        CliResult r = box.run("narrate --mode lateral --seed zzznotaword");
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("concepts surfaces planted repeats at the head of the list") {
    CliSandbox box;
    std::string text;
    testsupport::Rng rng(79);
    for (int i = 0; i < 200; ++i) {
        if (i % 2 == 0) {
            text += "korsk valda brimn. ";
        } else {
            text += "x" + std::to_string(rng.next() % 1000000) + " y" +
                    std::to_string(rng.next() % 1000000) + ". ";
        }
    }
    fs::path doc = box.write("plant.txt", text);
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    CliResult r = box.run("concepts --min-count 50 --top 8");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("100\t1\tbrimn\n") == 0);  // counts lead, lexicographic ties
    CHECK(r.out.find("100\t3\tkorsk valda brimn\n") != std::string::npos);
}

TEST_CASE("stats reports per-leg nu samples") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", testsupport::generate_novel(78, 900));
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    CliResult r = box.run("stats --legs");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("doc,leg,nu,retained\n") == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') >= 3);  // header + several legs
}

TEST_CASE("a playback seed outside the graph is a data error") {
    CliSandbox box;
    fs::path doc = box.write("s.txt", "One two three. Four five six.");
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    CliResult r = box.run("narrate --mode playback --seed 9999");
    CHECK(r.exit_code == 2);
}

TEST_CASE("stats nu-sweep re-processes the corpus per target") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", testsupport::generate_novel(77, 800));
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);

    CliResult r = box.run("stats --nu-sweep 0,2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("target_nu,measured_nu,context_floor,near_links,regions\n") == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);  // header + two targets
    // the zero target means an empty buffer and no links at all
    CHECK(r.out.find("\n0,0,") != std::string::npos);
}

TEST_CASE("export copies the canonical graph bytes") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", "Ash elm oak. Pine fir birch. Ash elm oak.");
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    fs::path out = box.dir() / "exported.sstg";
    REQUIRE(box.run("export --out " + out.string()).exit_code == 0);
    CHECK(slurp(out) == slurp(box.workspace() / "graph.sstg"));
}

TEST_CASE("explore runs a scripted session") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", testsupport::generate_novel(76, 900));
    REQUIRE(box.run(tiny_config_args() + "learn " + doc.string()).exit_code == 0);
    REQUIRE(box.run("sleep").exit_code == 0);

    CliResult r = box.run("explore", "seed the\nwhere\nctx\nquit\n");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("seeded at hub") != std::string::npos);
    CHECK(r.out.find("running context:") != std::string::npos);
}

TEST_CASE("environment variable supplies the workspace root") {
    CliSandbox box;
    fs::path doc = box.write("story.txt", "One two three. Four five six.");
    fs::path env_ws = box.dir() / "env_ws";
    std::string cmd = "SSTG_WORKSPACE=" + env_ws.string() + " " + SSTG_CLI_PATH + " --set " +
                      "target_density=1.0 learn " + doc.string() + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(env_ws / "graph.sstg"));
}
