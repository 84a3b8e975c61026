#include "dig/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dig/graph.hpp"
#include "dig/lag.hpp"
#include "dig/result_io.hpp"
#include "dig/series.hpp"
#include "dig/sim_ctm.hpp"
#include "dig/sim_poisson.hpp"

namespace dig {

namespace {

namespace fs = std::filesystem;

fs::path prepare_output_dir(const std::string& dir) {
    fs::path path(dir);
    fs::create_directories(path);
    return path;
}

std::vector<FlowSeries> read_input_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    return ingest_csv(in);
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

struct SimulateArgs {
    std::string scenario;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    double p_fast = 0.5;
    double noise_mean = 1.0;
    int sensors = 4;
};

void run_simulate(const SimulateArgs& args, std::ostream& out) {
    std::vector<FlowSeries> series;
    if (args.scenario == "s1" || args.scenario == "s2") {
        PoissonChainConfig config;
        config.num_sensors = args.sensors;
        config.n = args.samples;
        config.noise_mean = args.noise_mean;
        config.instantaneous = (args.scenario == "s2");
        config.p_fast = args.p_fast;
        config.seed = args.seed;
        series = generate_chain(config);
    } else if (args.scenario == "s3") {
        PoissonMergeConfig config;
        config.n = args.samples;
        config.noise_mean = args.noise_mean;
        config.p_fast = args.p_fast;
        config.seed = args.seed;
        series = generate_merge(config);
    } else if (args.scenario == "c1" || args.scenario == "c2") {
        CtmScenarioConfig config;
        config.n = args.samples;
        config.seed = args.seed;
        series = run_scenario(
            args.scenario == "c1" ? CtmScenario::single_road : CtmScenario::merge_road, config);
    } else if (args.scenario == "linear") {
        LinearPoissonCoeffs coeffs;
        coeffs.n = args.samples;
        coeffs.seed = args.seed;
        series = generate_linear_model(coeffs).rounded;
    } else {
        throw std::runtime_error("unknown scenario '" + args.scenario + "'");
    }

    fs::path dir = prepare_output_dir(args.output_dir);
    fs::path file = dir / (args.scenario + ".csv");
    std::ostringstream text;
    export_csv(series, text);
    write_text_file(file, text.str());
    out << "wrote " << file.string() << " (" << series.size() << " sensors, "
        << series.front().size() << " samples)\n";
}

struct LagsArgs {
    std::string input;
    int tau_max = 48;
    std::string output_dir = ".";
};

void run_lags(const LagsArgs& args, std::ostream& out) {
    std::vector<FlowSeries> series = read_input_csv(args.input);
    if (series.size() < 2) throw std::runtime_error("lag analysis needs at least 2 sensors");
    int tau_max = std::min<int>(args.tau_max, static_cast<int>(series.front().size()) - 1);
    if (tau_max < 0) throw std::runtime_error("input too short for lag analysis");

    std::ostringstream text;
    text << "from,to,tau,cov,cod\n";
    for (std::size_t a = 0; a < series.size(); ++a) {
        for (std::size_t b = 0; b < series.size(); ++b) {
            if (a == b) continue;
            LagProfile profile = cross_covariance(series[a], series[b], tau_max);
            for (int tau = 0; tau <= tau_max; ++tau) {
                text << profile.from_id << ',' << profile.to_id << ',' << tau << ','
                     << profile.values[static_cast<std::size_t>(tau)] << ',';
                try {
                    text << coefficient_of_determination(series[a], series[b], tau);
                } catch (const std::invalid_argument&) {
                    text << "nan";
                }
                text << '\n';
            }
        }
    }
    fs::path file = prepare_output_dir(args.output_dir) / "lags.csv";
    write_text_file(file, text.str());
    out << "wrote " << file.string() << "\n";
}

struct EstimateArgs {
    std::string input;
    std::string output_dir = ".";
    std::string estimator = "ctw";
    int levels = 2;
    double alpha = 0.4;
    std::optional<int> depth;
    int tau_max = 48;
    std::vector<std::string> exclude;
};

void run_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
    std::vector<FlowSeries> series = read_input_csv(args.input);

    DigConfig config;
    config.levels = args.levels;
    config.alpha = args.alpha;
    config.estimator = args.estimator == "empirical" ? Estimator::empirical
                                                     : Estimator::context_tree;
    config.depth_override = args.depth;
    config.tau_max = args.tau_max;
    config.excluded_nodes = args.exclude;

    CausalGraphResult result = estimate_dig(series, config);
    for (const auto& note : result.diagnostics) err << "note: " << note << "\n";

    fs::path dir = prepare_output_dir(args.output_dir);
    write_text_file(dir / "result.json", result_to_json(result));
    write_text_file(dir / "graph.dot", export_dot(result));

    std::size_t edges = 0;
    for (const auto& row : result.adjacency) edges += static_cast<std::size_t>(
        std::count(row.begin(), row.end(), true));
    out << "depth " << result.depth << ", " << result.node_ids.size() << " nodes, " << edges
        << " edges; wrote " << (dir / "result.json").string() << " and "
        << (dir / "graph.dot").string() << "\n";
}

struct BoundsArgs {
    int sensors = 2;
    int order = 1;
    int alphabet = 2;
    long long edges = 0;
    double threshold = 0.0;
};

void run_bounds(const BoundsArgs& args, std::ostream& out) {
    DetectionBounds b =
        detection_bounds(args.sensors, args.order, args.alphabet, args.edges, args.threshold);
    out << "R " << b.r << "\n";
    out << "PF_upper " << b.pf_upper << "\n";
    out << "PD_lower " << b.pd_lower << "\n";
}

struct ExportArgs {
    std::string input;
    std::string output_dir = ".";
};

void run_export(const ExportArgs& args, std::ostream& out) {
    std::ifstream in(args.input);
    if (!in) throw std::runtime_error("cannot open input file '" + args.input + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    CausalGraphResult result = result_from_json(buffer.str());
    fs::path file = prepare_output_dir(args.output_dir) / "graph.dot";
    write_text_file(file, export_dot(result));
    out << "wrote " << file.string() << "\n";
}

}  // namespace

int dig_cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Directed-information graph estimation for traffic sensor networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file mirroring the flags (INI sections per subcommand)");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario CSV");
    simulate->add_option("--scenario", sim.scenario, "One of s1, s2, s3, c1, c2, linear")
        ->required()
        ->check(CLI::IsMember({"s1", "s2", "s3", "c1", "c2", "linear"}));
    simulate->add_option("--samples", sim.samples, "Number of samples to generate");
    simulate->add_option("--seed", sim.seed, "RNG seed; all streams derive from it");
    simulate->add_option("--output-dir", sim.output_dir, "Directory for <scenario>.csv");
    simulate->add_option("--p-fast", sim.p_fast, "Same-step hop probability (s2/s3)")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--noise-mean", sim.noise_mean, "Observation noise mean")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--sensors", sim.sensors, "Chain length (s1/s2)")->check(CLI::Range(2, 64));

    LagsArgs lags;
    auto* lags_cmd = app.add_subcommand("lags", "Write per-pair lagged covariance and CoD");
    lags_cmd->add_option("--input", lags.input, "Input CSV")->required()->check(CLI::ExistingFile);
    lags_cmd->add_option("--tau-max", lags.tau_max, "Largest lag to scan")
        ->check(CLI::NonNegativeNumber);
    lags_cmd->add_option("--output-dir", lags.output_dir, "Directory for lags.csv");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Estimate the directed information graph");
    estimate->add_option("--input", est.input, "Input CSV")->required()->check(CLI::ExistingFile);
    estimate->add_option("--output-dir", est.output_dir, "Directory for result.json and graph.dot");
    estimate->add_option("--estimator", est.estimator, "empirical or ctw")
        ->check(CLI::IsMember({"empirical", "ctw"}));
    estimate->add_option("--levels", est.levels, "Quantization levels")->check(CLI::Range(2, 64));
    estimate->add_option("--alpha", est.alpha, "Edge detection threshold in (0,1]");
    estimate->add_option("--depth", est.depth, "Fixed memory depth (skips lag-based estimation)");
    estimate->add_option("--tau-max", est.tau_max, "Largest lag scanned for the depth estimate");
    estimate->add_option("--exclude", est.exclude, "Comma-separated node ids to exclude")
        ->delimiter(',');

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "Print threshold-test performance bounds");
    bounds_cmd->add_option("--sensors", bounds.sensors, "Network size M")->required();
    bounds_cmd->add_option("--order", bounds.order, "Markov order k");
    bounds_cmd->add_option("--alphabet", bounds.alphabet, "Symbols per process");
    bounds_cmd->add_option("--edges", bounds.edges, "Hypothesized true edge count W1")->required();
    bounds_cmd->add_option("--threshold", bounds.threshold, "Test threshold")->required();

    ExportArgs exp;
    auto* export_cmd = app.add_subcommand("export", "Re-render a stored result JSON as DOT");
    export_cmd->add_option("--input", exp.input, "result.json path")
        ->required()
        ->check(CLI::ExistingFile);
    export_cmd->add_option("--output-dir", exp.output_dir, "Directory for graph.dot");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (simulate->parsed()) run_simulate(sim, out);
        if (lags_cmd->parsed()) run_lags(lags, out);
        if (estimate->parsed()) run_estimate(est, out, err);
        if (bounds_cmd->parsed()) run_bounds(bounds, out);
        if (export_cmd->parsed()) run_export(exp, out);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        int code = e.get_exit_code();
        return code == 0 ? 1 : code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dig
