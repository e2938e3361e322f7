#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cruler/config.hpp"
#include "cruler/runner.hpp"
#include "cruler/tomlmini.hpp"

using namespace cruler;
using nlohmann::json;

TEST_CASE("toml subset: scalars, arrays, tables") {
    const std::string text = R"(
# run header
seed = 42
ratio = 1.5e-3
label = "desk run"
flag = true

[backend]
type = "cft"
arcs = 8
angles = [0.0, 1.0, 2.5]

[regions.A]
rects = [[2, 0, 6, 2], [1, 1, 1, 1]]

[rulers.R1]
a = "A"
edge_triple = ["a", "b", "c"]

[[experiments]]
name = "one"
kind = "eta-table"
embed = true
[experiments.tolerances]
c_spread_max = 1e-12

[[experiments]]
name = "two"
kind = "sigma-scan"
move = { kind = "transfer", source = "A" }
)";
    json root = parse_toml(text);
    CHECK(root["seed"] == 42);
    CHECK(root["ratio"].get<double>() == doctest::Approx(1.5e-3));
    CHECK(root["label"] == "desk run");
    CHECK(root["flag"] == true);
    CHECK(root["backend"]["type"] == "cft");
    CHECK(root["backend"]["angles"].size() == 3);
    CHECK(root["regions"]["A"]["rects"][0][2] == 6);
    CHECK(root["rulers"]["R1"]["edge_triple"][1] == "b");
    CHECK(root["experiments"].size() == 2);
    CHECK(root["experiments"][0]["tolerances"]["c_spread_max"].get<double>() ==
          doctest::Approx(1e-12));
    CHECK(root["experiments"][1]["move"]["kind"] == "transfer");
}

TEST_CASE("toml subset: parse errors carry line info") {
    CHECK_THROWS_WITH_AS(parse_toml("key = "), doctest::Contains("config-parse"), Error);
    CHECK_THROWS_WITH_AS(parse_toml("[unclosed\nkey = 1"), doctest::Contains("config-parse"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_toml("a = [1, 2"), doctest::Contains("config-parse"), Error);
}

TEST_CASE("config: json input accepted") {
    const std::string text = R"({
        "backend": {"type": "pairstate", "n": 3, "alpha": 1.0, "beta": 1.5},
        "experiments": [{"name": "x", "kind": "exotic"}]
    })";
    RunConfig config = parse_config(text, true);
    CHECK(config.backend.type == "pairstate");
    CHECK(config.backend.n_half == 3);
    CHECK(config.experiments.size() == 1);
}

TEST_CASE("config: missing backend or bad references are rejected") {
    CHECK_THROWS_WITH_AS(parse_config("seed = 1\n", false), doctest::Contains("config-parse"),
                         Error);

    const std::string text = R"(
[backend]
type = "gaussian-pip"
width = 6
height = 6

[rulers.R1]
a = "NOPE"
b = "NOPE"
c = "NOPE"
)";
    RunConfig config = parse_config(text, false);
    BackendBundle bundle = build_backend(config.backend);
    CHECK_THROWS_WITH_AS(resolve_ruler(config, bundle, "R1"),
                         doctest::Contains("undefined region 'NOPE'"), Error);
    CHECK_THROWS_WITH_AS(resolve_ruler(config, bundle, "R2"),
                         doctest::Contains("undefined ruler"), Error);
}

TEST_CASE("config: unknown backend type") {
    BackendSpec spec;
    spec.type = "tensor-network";
    CHECK_THROWS_WITH_AS(build_backend(spec), doctest::Contains("config-parse"), Error);
}

TEST_CASE("runner: pairstate pipeline end to end") {
    const std::string text = R"(
output_dir = "out/test_config_run"
seed = 9

[backend]
type = "pairstate"
n = 3
alpha = 1.0
beta = 1.5

[[experiments]]
name = "exotic"
kind = "exotic"
[experiments.tolerances]
entropy_form_max = 1e-10
c_spread_max = 1e-9
sigma_floor_rel = 1e-2
)";
    RunConfig config = parse_config(text, false);
    RunOutcome outcome = run_experiments(config, "out/test_config_run");
    CHECK(outcome.exit_code == 0);
    REQUIRE(outcome.report_paths.size() == 1);

    std::ifstream in(outcome.report_paths[0]);
    json report = json::parse(in);
    CHECK(report["pass"] == true);
    CHECK(report["results"]["fixed_point_violated"] == true);
    CHECK(report["config_hash"].is_string());
    CHECK(report["version"] == kLibraryVersion);
}

TEST_CASE("runner: tolerance failure exits 2") {
    const std::string text = R"(
[backend]
type = "pairstate"
n = 3
alpha = 1.0
beta = 1.5

[[experiments]]
name = "exotic"
kind = "exotic"
[experiments.tolerances]
c_spread_max = 1e-30
entropy_form_max = 0.0
)";
    RunConfig config = parse_config(text, false);
    RunOutcome outcome = run_experiments(config, "out/test_config_fail");
    CHECK(outcome.exit_code == 2);
}

TEST_CASE("runner: capability mismatch is a config error") {
    const std::string text = R"(
[backend]
type = "cft"
c = 1.0
epsilon = 1e-4
arcs = 8

[rulers.R]
start = 0
na = 1
nb = 1
nc = 1

[[experiments]]
name = "scan"
kind = "sigma-scan"
ruler = "R"
)";
    RunConfig config = parse_config(text, false);
    CHECK_THROWS_WITH_AS(run_experiments(config, "out/test_config_cap"),
                         doctest::Contains("capability-mismatch"), Error);
}

TEST_CASE("runner: parallel jobs give the same reports") {
    const std::string text = R"(
[backend]
type = "pairstate"
n = 3
alpha = 1.0
beta = 1.5

[rulers.R111]
start = 0
na = 1
nb = 1
nc = 1

[rulers.R121]
start = 1
na = 1
nb = 2
nc = 1

[[experiments]]
name = "a_scan"
kind = "sigma-scan"
ruler = "R111"

[[experiments]]
name = "b_scan"
kind = "sigma-scan"
ruler = "R121"

[[experiments]]
name = "c_table"
kind = "eta-table"
)";
    RunConfig config = parse_config(text, false);
    RunOutcome serial = run_experiments(config, "out/test_config_serial", 1);
    RunOutcome parallel = run_experiments(config, "out/test_config_parallel", 3);
    REQUIRE(serial.report_paths.size() == parallel.report_paths.size());
    for (std::size_t i = 0; i < serial.report_paths.size(); ++i) {
        std::ifstream sa(serial.report_paths[i]), pa(parallel.report_paths[i]);
        json ja = json::parse(sa), jb = json::parse(pa);
        ja.erase("timestamp");
        jb.erase("timestamp");
        // CSV paths embed the output directory
        std::string dump_a = ja.dump(), dump_b = jb.dump();
        const std::string tag_a = "test_config_serial", tag_b = "test_config_parallel";
        for (std::size_t pos = dump_a.find(tag_a); pos != std::string::npos;
             pos = dump_a.find(tag_a))
            dump_a.replace(pos, tag_a.size(), "OUT");
        for (std::size_t pos = dump_b.find(tag_b); pos != std::string::npos;
             pos = dump_b.find(tag_b))
            dump_b.replace(pos, tag_b.size(), "OUT");
        CHECK(dump_a == dump_b);
    }
}

TEST_CASE("gaussian-pip config builds and resolves lattice rulers") {
    const std::string text = R"(
[backend]
type = "gaussian-pip"
width = 8
height = 6
t = 1.0
delta = 1.0
mu = 1.3

[regions]
A = { rects = [[1, 0, 2, 1]] }
B = { rects = [[3, 0, 4, 1]] }
C = { rects = [[5, 0, 6, 1]] }
E = { rects = [[1, 2, 6, 3]] }

[rulers.R]
a = "A"
a_prime = "E"
b = "B"
c = "C"
edge_triple = ["a", "b", "c"]

[[experiments]]
name = "analysis"
kind = "ruler-analysis"
ruler = "R"
grid_n = 21
)";
    RunConfig config = parse_config(text, false);
    RunOutcome outcome = run_experiments(config, "out/test_config_pip");
    CHECK(outcome.exit_code == 0);
    std::ifstream in(outcome.report_paths[0]);
    json report = json::parse(in);
    CHECK(report["results"].contains("eta"));
    CHECK(report["results"].contains("eta_K"));
}
