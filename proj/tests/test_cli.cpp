// End-to-end exercises of the command-line tool: every subcommand is run as a
// child process and judged on exit status plus the files it leaves behind.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string bin() {
    const char* b = std::getenv("VSERVO_BIN");
    REQUIRE_MESSAGE(b != nullptr, "VSERVO_BIN must point at the vservo executable");
    return b;
}

const fs::path& work_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() /
                     ("vservo_cli_" + std::to_string(static_cast<long>(::getpid())));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = work_root() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
    if (st == -1) {
        return -1;
    }
    return WIFEXITED(st) ? WEXITSTATUS(st) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), p.string().c_str());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

} // namespace

TEST_CASE("simulate writes trace, summary, and audit files") {
    const fs::path dir = fresh_dir("sim_basic");
    const std::string cmd = bin() +
                            " simulate --controller kinematic --servo ideal"
                            " --set duration=1 --set record_period=0.01 --out " +
                            dir.string() + " > " + (dir / "stdout.txt").string();
    CHECK(run(cmd) == 0);
    CHECK(fs::file_size(dir / "trace.csv") > 1000);
    CHECK(contains(slurp(dir / "stdout.txt"), "wrote"));

    const json summary = load_json(dir / "summary.json");
    CHECK(summary.at("abort").at("reason") == "none");
    CHECK(summary.at("scenario").at("controller") == "kinematic");
    CHECK(summary.at("scenario").at("servo") == "ideal");
    CHECK(summary.at("metrics").at("final_error_inf").is_number());

    const json audit = load_json(dir / "audit.json");
    CHECK(audit.contains("schema_version"));
    CHECK(audit.contains("passivity"));
    CHECK(audit.contains("lyapunov"));

    const std::string header = slurp(dir / "trace.csv").substr(0, 64);
    CHECK(contains(header, "schema,t,q1"));
}

TEST_CASE("simulate without a config uses the stock benchmark") {
    const fs::path dir = fresh_dir("sim_default");
    CHECK(run(bin() + " simulate --set duration=0.05 --out " + dir.string() +
              " > /dev/null") == 0);
    const json summary = load_json(dir / "summary.json");
    CHECK(summary.at("scenario").at("controller") == "inverse_jacobian");
    CHECK(summary.at("scenario").at("duration") == 0.05);
}

TEST_CASE("config files load and command-line overrides win") {
    const fs::path dir = fresh_dir("sim_cfg");
    const fs::path cfg = dir / "scn.cfg";
    std::ofstream(cfg) << "controller = transpose_jacobian\nduration = 0.2\n";

    CHECK(run(bin() + " simulate " + cfg.string() + " --set duration=0.1 --out " +
              (dir / "a").string() + " > /dev/null") == 0);
    const json summary = load_json(dir / "a" / "summary.json");
    CHECK(summary.at("scenario").at("controller") == "transpose_jacobian");
    CHECK(summary.at("scenario").at("duration") == 0.1);

    CHECK(run(bin() + " simulate " + cfg.string() +
              " --controller inverse --set duration=0.05 --out " + (dir / "b").string() +
              " > /dev/null") == 0);
    CHECK(load_json(dir / "b" / "summary.json").at("scenario").at("controller") ==
          "inverse_jacobian");
}

TEST_CASE("configuration problems exit with status 2") {
    const fs::path dir = fresh_dir("sim_bad");
    const fs::path bad = dir / "bad.cfg";
    std::ofstream(bad) << "bogus = 1\n";
    CHECK(run(bin() + " simulate " + bad.string() + " --out " + dir.string() +
              " 2> /dev/null") == 2);
    CHECK(run(bin() + " simulate " + (dir / "missing.cfg").string() + " 2> /dev/null") == 2);
    CHECK(run(bin() + " simulate --set 'camera.principal_point=(1, 2)' 2> /dev/null") == 2);
    CHECK(run(bin() + " simulate --bogus-flag 2> /dev/null") == 2);
    CHECK(run(bin() + " frobnicate 2> /dev/null") == 2);
    CHECK(run(bin() + " 2> /dev/null") == 2);
}

TEST_CASE("aborted runs exit with status 3 and still write their outputs") {
    const fs::path dir = fresh_dir("sim_abort");
    const std::string cmd = bin() +
                            " simulate --set camera.d_C=-3 --set duration=0.5 --out " +
                            dir.string() + " > /dev/null 2> " +
                            (dir / "stderr.txt").string();
    CHECK(run(cmd) == 3);
    CHECK(contains(slurp(dir / "stderr.txt"), "aborted"));
    const json summary = load_json(dir / "summary.json");
    CHECK(summary.at("abort").at("reason") == "nonpositive_depth");
    CHECK(fs::exists(dir / "trace.csv"));
    CHECK(fs::exists(dir / "audit.json"));
}

TEST_CASE("check suites run from the command line") {
    const fs::path dir = fresh_dir("check");
    CHECK(run(bin() + " check --suite regressors > " + (dir / "txt.txt").string()) == 0);
    const std::string text = slurp(dir / "txt.txt");
    CHECK(contains(text, "PASS"));
    CHECK(contains(text, "all checks passed"));

    CHECK(run(bin() + " check --suite jacobians --json > " + (dir / "r.json").string()) == 0);
    const json rep = load_json(dir / "r.json");
    CHECK(rep.at("pass") == true);
    CHECK(rep.at("results").is_array());
    CHECK(rep.at("results").size() > 0);
    for (const json& r : rep.at("results")) {
        CHECK(r.contains("name"));
        CHECK(r.contains("measured"));
        CHECK(r.contains("threshold"));
    }

    CHECK(run(bin() + " check --suite nonsense 2> /dev/null") == 2);
}

TEST_CASE("plot renders SVG figures from a trace") {
    const fs::path dir = fresh_dir("plot");
    CHECK(run(bin() + " simulate --controller kinematic --set duration=0.5 --out " +
              dir.string() + " > /dev/null") == 0);
    const std::string trace = (dir / "trace.csv").string();

    const fs::path figs = dir / "figs";
    CHECK(run(bin() + " plot " + trace + " --out " + figs.string() + " > /dev/null") == 0);
    for (int n : {2, 3, 4}) {
        const fs::path f = figs / ("figure" + std::to_string(n) + ".svg");
        CAPTURE(n);
        REQUIRE(fs::exists(f));
        CHECK(slurp(f).substr(0, 4) == "<svg");
    }

    CHECK(run(bin() + " plot " + trace + " --figures 5 --out " + figs.string() +
              " > /dev/null") == 0);
    CHECK(fs::exists(figs / "figure5.svg"));

    CHECK(run(bin() + " plot " + trace + " --figures 9 2> /dev/null") == 2);
    CHECK(run(bin() + " plot " + (dir / "missing.csv").string() + " 2> /dev/null") == 2);
}

TEST_CASE("plot refuses a trace with no samples") {
    const fs::path dir = fresh_dir("plot_empty");
    CHECK(run(bin() + " simulate --set duration=0 --out " + dir.string() +
              " > /dev/null") == 0);
    CHECK(run(bin() + " plot " + (dir / "trace.csv").string() + " --out " +
              (dir / "figs").string() + " 2> " + (dir / "stderr.txt").string()) == 2);
    CHECK(!fs::exists(dir / "figs" / "figure2.svg"));
    CHECK(contains(slurp(dir / "stderr.txt"), "config error"));
}

TEST_CASE("emit-config writes presets that load back") {
    const fs::path dir = fresh_dir("emit");
    CHECK(run(bin() + " emit-config --all --out " + dir.string() + " > /dev/null") == 0);
    for (const char* name :
         {"benchmark_inverse", "benchmark_transpose", "kinematic_ideal",
          "kinematic_first_order", "audit_inverse", "audit_transpose"}) {
        CAPTURE(name);
        CHECK(fs::exists(dir / (std::string(name) + ".cfg")));
    }

    CHECK(run(bin() + " emit-config --preset benchmark_inverse --out " +
              (dir / "one").string() + " > /dev/null") == 0);
    CHECK(fs::exists(dir / "one" / "benchmark_inverse.cfg"));
    CHECK(run(bin() + " emit-config --preset no_such_preset --out " + dir.string() +
              " 2> /dev/null") == 2);
    CHECK(run(bin() + " emit-config 2> /dev/null") == 2);

    // an emitted preset is immediately usable as a scenario file
    CHECK(run(bin() + " simulate " + (dir / "kinematic_ideal.cfg").string() +
              " --set duration=0.1 --out " + (dir / "run").string() + " > /dev/null") == 0);
}
