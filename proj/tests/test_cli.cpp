#include <doctest.h>
#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dig/cli.hpp"
#include "dig/graph.hpp"
#include "dig/result_io.hpp"
#include "dig/rng.hpp"
#include "dig/series.hpp"
#include "dig/sim_poisson.hpp"

using namespace dig;
namespace fs = std::filesystem;

namespace {

struct ScratchDir {
    fs::path path;
    ScratchDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("dig_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& leaf = "") const {
        return leaf.empty() ? path.string() : (path / leaf).string();
    }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = dig_cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

// Two unrelated Poisson sensors, exported in the CLI's CSV shape.
void write_noise_csv(const fs::path& path, std::size_t n) {
    std::vector<FlowSeries> series(2);
    for (int j = 0; j < 2; ++j) {
        Rng rng = Rng::derive(50 + j, "cli.noise");
        series[j].node_id = "n" + std::to_string(j + 1);
        for (std::size_t i = 0; i < n; ++i)
            series[j].samples.push_back(static_cast<std::int64_t>(rng.poisson(5.0)));
    }
    std::ostringstream text;
    export_csv(series, text);
    write_file(path, text.str());
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("simulate writes the scenario CSV and reports its shape") {
    ScratchDir dir;
    auto r = run({"simulate", "--scenario", "s1", "--samples", "500", "--seed", "7",
                  "--output-dir", dir.str()});
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK(r.out == "wrote " + dir.str("s1.csv") + " (4 sensors, 500 samples)\n");

    std::ifstream in(dir.str("s1.csv"));
    auto series = ingest_csv(in);
    REQUIRE(series.size() == 4);
    CHECK(series[0].node_id == "s1");
    CHECK(series[0].samples.size() == 500);

    // Same seed, same file; the generators answer only to the seed.
    ScratchDir dir2;
    auto r2 = run({"simulate", "--scenario", "s1", "--samples", "500", "--seed", "7",
                   "--output-dir", dir2.str()});
    REQUIRE(r2.code == 0);
    CHECK(slurp(dir.str("s1.csv")) == slurp(dir2.str("s1.csv")));
}

TEST_CASE("estimate recovers the chain and writes both artifacts") {
    ScratchDir dir;
    REQUIRE(run({"simulate", "--scenario", "s1", "--samples", "20000", "--output-dir",
                 dir.str()}).code == 0);
    auto r = run({"estimate", "--input", dir.str("s1.csv"), "--estimator", "empirical",
                  "--depth", "1", "--output-dir", dir.str()});
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK(r.out == "depth 1, 4 nodes, 3 edges; wrote " + dir.str("result.json") + " and " +
                       dir.str("graph.dot") + "\n");

    std::string dot = slurp(dir.str("graph.dot"));
    CHECK(dot.find("s1 -> s2") != std::string::npos);
    CHECK(dot.find("s2 -> s3") != std::string::npos);
    CHECK(dot.find("s3 -> s4") != std::string::npos);
    CHECK(dot.find("s2 -> s1") == std::string::npos);

    // The JSON is a faithful store: parse and re-render byte for byte.
    std::string json = slurp(dir.str("result.json"));
    CausalGraphResult result = result_from_json(json);
    CHECK(result_to_json(result) == json);
    CHECK(result.node_ids == std::vector<std::string>{"s1", "s2", "s3", "s4"});
    CHECK(result.depth == 1);
}

TEST_CASE("estimate on unrelated sensors reports an empty graph") {
    ScratchDir dir;
    write_noise_csv(dir.path / "noise.csv", 4000);
    auto r = run({"estimate", "--input", dir.str("noise.csv"), "--estimator", "empirical",
                  "--depth", "1", "--output-dir", dir.str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("0 edges") != std::string::npos);
    CHECK(r.err.find("note: ") != std::string::npos);
    CHECK(r.err.find("graph is empty") != std::string::npos);

    auto result = result_from_json(slurp(dir.str("result.json")));
    for (const auto& row : result.adjacency)
        for (bool cell : row) CHECK_FALSE(cell);
}

TEST_CASE("estimate honours exclusions") {
    ScratchDir dir;
    REQUIRE(run({"simulate", "--scenario", "s1", "--samples", "8000", "--output-dir",
                 dir.str()}).code == 0);
    auto r = run({"estimate", "--input", dir.str("s1.csv"), "--estimator", "empirical",
                  "--depth", "1", "--exclude", "s3,s4", "--output-dir", dir.str()});
    REQUIRE(r.code == 0);
    auto result = result_from_json(slurp(dir.str("result.json")));
    CHECK(result.node_ids == std::vector<std::string>{"s1", "s2"});
}

TEST_CASE("lags writes the per-pair covariance table") {
    ScratchDir dir;
    // Two noiseless copies two steps apart make the peak unambiguous.
    ShiftedCopiesConfig config;
    config.shifts = {0, 2};
    config.n = 2000;
    config.noise_mean = 0.0;
    auto series = generate_shifted_copies(config);
    std::ostringstream text;
    export_csv(series, text);
    write_file(dir.path / "pair.csv", text.str());

    auto r = run({"lags", "--input", dir.str("pair.csv"), "--tau-max", "5", "--output-dir",
                  dir.str()});
    REQUIRE(r.code == 0);
    CHECK(r.out == "wrote " + dir.str("lags.csv") + "\n");

    std::istringstream table(slurp(dir.str("lags.csv")));
    std::string line;
    REQUIRE(std::getline(table, line));
    CHECK(line == "from,to,tau,cov,cod");
    int rows = 0;
    double best_cov = 0.0;
    int best_tau = -1;
    while (std::getline(table, line)) {
        ++rows;
        std::istringstream fields(line);
        std::string from, to, tau, cov, cod;
        std::getline(fields, from, ',');
        std::getline(fields, to, ',');
        std::getline(fields, tau, ',');
        std::getline(fields, cov, ',');
        std::getline(fields, cod, ',');
        if (from == "s1" && to == "s2" && std::abs(std::stod(cov)) > std::abs(best_cov)) {
            best_cov = std::stod(cov);
            best_tau = std::stoi(tau);
        }
    }
    CHECK(rows == 2 * 6);  // both directions, lags 0..5
    CHECK(best_tau == 2);
}

TEST_CASE("bounds prints the three numbers it promises") {
    auto r = run({"bounds", "--sensors", "2", "--order", "1", "--alphabet", "2", "--edges", "1",
                  "--threshold", "6"});
    REQUIRE(r.code == 0);
    std::istringstream out(r.out);
    std::string label;
    double value;

    auto expected = detection_bounds(2, 1, 2, 1, 6.0);
    out >> label >> value;
    CHECK(label == "R");
    CHECK(value == expected.r);
    out >> label >> value;
    CHECK(label == "PF_upper");
    CHECK(value == doctest::Approx(expected.pf_upper).epsilon(1e-5));
    out >> label >> value;
    CHECK(label == "PD_lower");
    CHECK(value == doctest::Approx(expected.pd_lower).epsilon(1e-5));
}

TEST_CASE("export re-renders a stored result identically") {
    ScratchDir dir;
    REQUIRE(run({"simulate", "--scenario", "s3", "--samples", "4000", "--output-dir",
                 dir.str()}).code == 0);
    REQUIRE(run({"estimate", "--input", dir.str("s3.csv"), "--estimator", "empirical", "--depth",
                 "1", "--output-dir", dir.str()}).code == 0);
    std::string original_dot = slurp(dir.str("graph.dot"));

    ScratchDir dir2;
    auto r = run({"export", "--input", dir.str("result.json"), "--output-dir", dir2.str()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir2.str("graph.dot")) == original_dot);
}

TEST_CASE("a config file before the subcommand mirrors the flags") {
    ScratchDir dir;
    REQUIRE(run({"simulate", "--scenario", "s1", "--samples", "6000", "--output-dir",
                 dir.str()}).code == 0);

    ScratchDir direct_dir, config_dir;
    REQUIRE(run({"estimate", "--input", dir.str("s1.csv"), "--estimator", "empirical", "--depth",
                 "1", "--output-dir", direct_dir.str()}).code == 0);

    write_file(dir.path / "run.ini", "[estimate]\n"
                                     "input=" + dir.str("s1.csv") + "\n"
                                     "estimator=empirical\n"
                                     "depth=1\n"
                                     "output-dir=" + config_dir.str() + "\n");
    auto r = run({"--config", dir.str("run.ini"), "estimate"});
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    CHECK(slurp(config_dir.str("result.json")) == slurp(direct_dir.str("result.json")));
    CHECK(slurp(config_dir.str("graph.dot")) == slurp(direct_dir.str("graph.dot")));
}

TEST_CASE("failures exit nonzero with an error line") {
    auto missing = run({"estimate", "--input", "/nonexistent/flows.csv"});
    CHECK(missing.code != 0);
    CHECK(missing.err.substr(0, 7) == "error: ");

    auto no_input = run({"estimate"});
    CHECK(no_input.code != 0);
    CHECK(no_input.err.find("--input is required") != std::string::npos);

    auto bad_scenario = run({"simulate", "--scenario", "bogus"});
    CHECK(bad_scenario.code != 0);
    CHECK(bad_scenario.err.substr(0, 7) == "error: ");

    auto bad_bounds = run({"bounds", "--sensors", "1", "--edges", "0", "--threshold", "1"});
    CHECK(bad_bounds.code != 0);
    CHECK(bad_bounds.err.find("error: ") == 0);

    auto no_subcommand = run({});
    CHECK(no_subcommand.code != 0);

    ScratchDir dir;
    write_noise_csv(dir.path / "noise.csv", 500);
    auto bad_exclude = run({"estimate", "--input", dir.str("noise.csv"), "--exclude", "zz",
                            "--depth", "1"});
    CHECK(bad_exclude.code == 1);
    CHECK(bad_exclude.err.find("'zz' is not in the dataset") != std::string::npos);
}

TEST_CASE("--help prints usage and succeeds") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate") != std::string::npos);
    CHECK(r.out.find("estimate") != std::string::npos);
    CHECK(r.out.find("bounds") != std::string::npos);
}

}  // TEST_SUITE
