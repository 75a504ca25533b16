#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pco/experiments.hpp"

namespace {

// Command-line values layered over the config file; only options the user
// actually passed are applied.
struct Overrides {
    std::optional<std::string> output, input, moments_file, exec, tag;
    std::optional<std::string> kind, dist, basis, weights;
    std::optional<double> p, epsilon, sigma, threshold, confidence, s, r, R;
    std::optional<std::uint64_t> seed, signal_seed;
    std::optional<int> J;
    std::optional<std::size_t> replicates, n;
    std::vector<double> epsilons, x_grid;
    std::vector<std::size_t> dims;
    std::vector<std::string> strategies;
};

void apply(const Overrides& ov, pco::ExperimentConfig& cfg) {
    if (ov.output) cfg.io.output_prefix = *ov.output;
    if (ov.input) cfg.io.input = *ov.input;
    if (ov.moments_file) cfg.moments_file = *ov.moments_file;
    if (ov.exec) cfg.exec = *ov.exec;
    if (ov.tag) cfg.io.tag = *ov.tag;
    if (ov.kind) cfg.signal.kind = *ov.kind;
    if (ov.dist) cfg.noise.kind = *ov.dist;
    if (ov.basis) cfg.signal.basis = *ov.basis;
    if (ov.weights) cfg.penalty.weights = *ov.weights;
    if (ov.p) cfg.penalty.p = *ov.p;
    if (ov.epsilon) cfg.noise.epsilon = *ov.epsilon;
    if (ov.sigma) cfg.noise.sigma = *ov.sigma;
    if (ov.threshold) cfg.penalty.threshold = *ov.threshold;
    if (ov.confidence) cfg.sweep.confidence = *ov.confidence;
    if (ov.s) cfg.signal.s = *ov.s;
    if (ov.r) cfg.signal.r = *ov.r;
    if (ov.R) cfg.signal.R = *ov.R;
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.signal_seed) cfg.signal.seed = *ov.signal_seed;
    if (ov.J) cfg.signal.top_level = *ov.J;
    if (ov.replicates) cfg.sweep.replicates = *ov.replicates;
    if (ov.n) cfg.signal.n = *ov.n;
    if (!ov.epsilons.empty()) cfg.sweep.epsilons = ov.epsilons;
    if (!ov.x_grid.empty()) cfg.sweep.x_grid = ov.x_grid;
    if (!ov.dims.empty()) cfg.sweep.dims = ov.dims;
    if (!ov.strategies.empty()) cfg.penalty.strategies = ov.strategies;
}

void add_common(CLI::App* sub, Overrides& ov, std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", ov.seed, "global RNG seed");
    sub->add_option("--output", ov.output, "artifact path prefix");
    sub->add_option("--moments-file", ov.moments_file,
                    "moments CSV merged over the built-in table");
    sub->add_option("--exec", ov.exec, "replicate loop mode: serial or parallel");
    sub->add_option("--tag", ov.tag, "free-form label stamped into metadata");
    sub->add_option("--replicates", ov.replicates, "Monte Carlo replicates");
    sub->add_option("--p", ov.p, "loss index p >= 1");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized-comparison estimator: sequence-model and wavelet-regression "
                 "experiments"};
    app.require_subcommand(0, 1);
    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults,
                 "print the default config as JSON and exit");

    std::string config_path;
    Overrides ov;

    CLI::App* sim = app.add_subcommand("simulate", "draw a signal and noisy observations");
    add_common(sim, ov, config_path);
    sim->add_option("--kind", ov.kind, "signal shape: dense, sparse or mixed");
    sim->add_option("--s", ov.s, "smoothness");
    sim->add_option("--r", ov.r, "shape parameter");
    sim->add_option("--R", ov.R, "ball radius");
    sim->add_option("--J", ov.J, "top level");
    sim->add_option("--epsilon", ov.epsilon, "noise level");
    sim->add_option("--dist", ov.dist, "noise: gaussian, rademacher or uniform");
    sim->add_option("--signal-seed", ov.signal_seed, "separate seed for the signal draw");

    CLI::App* est = app.add_subcommand("estimate", "select a model on saved observations");
    add_common(est, ov, config_path);
    est->add_option("--input", ov.input, "observation CSV (j,k,value)");
    est->add_option("--epsilon", ov.epsilon, "noise level when the file metadata lacks one");
    est->add_option("--weights", ov.weights, "constant or dyadic");
    est->add_option("--strategy", ov.strategies, "strategies: H I I-steep S flat threshold");
    est->add_option("--threshold", ov.threshold, "threshold value for the threshold strategy");

    CLI::App* rat = app.add_subcommand("rates", "epsilon sweep with log-log slope fit");
    add_common(rat, ov, config_path);
    rat->add_option("--kind", ov.kind, "signal shape: dense, sparse or mixed");
    rat->add_option("--s", ov.s, "smoothness");
    rat->add_option("--r", ov.r, "shape parameter");
    rat->add_option("--R", ov.R, "ball radius");
    rat->add_option("--epsilons", ov.epsilons, "decreasing epsilon grid");
    rat->add_option("--dist", ov.dist, "noise: gaussian, rademacher or uniform");
    rat->add_option("--weights", ov.weights, "constant or dyadic");
    rat->add_option("--strategy", ov.strategies, "strategies to select over");

    CLI::App* con = app.add_subcommand("concentration", "empirical block-sum tail check");
    add_common(con, ov, config_path);
    con->add_option("--dist", ov.dist, "noise: gaussian, rademacher or uniform");
    con->add_option("--D", ov.dims, "block sizes");
    con->add_option("--x", ov.x_grid, "deviation grid");

    CLI::App* reg = app.add_subcommand("regress", "wavelet regression on a grid");
    add_common(reg, ov, config_path);
    reg->add_option("--function", ov.kind, "test function: blocks, bumps, ramp or constant");
    reg->add_option("--input", ov.input, "sample CSV (i,x)");
    reg->add_option("--sigma", ov.sigma, "noise scale");
    reg->add_option("--J", ov.J, "top coefficient level");
    reg->add_option("--basis", ov.basis, "haar, db1, db2 or db3");
    reg->add_option("--n", ov.n, "sample count for synthesized functions");
    reg->add_option("--dist", ov.dist, "noise: gaussian, rademacher or uniform");

    CLI::App* cal = app.add_subcommand("calibrate", "fit deviation constants (c1, c2)");
    add_common(cal, ov, config_path);
    cal->add_option("--dist", ov.dist, "noise: gaussian, rademacher or uniform");
    cal->add_option("--D", ov.dims, "block-size grid");
    cal->add_option("--x", ov.x_grid, "deviation grid");
    cal->add_option("--confidence", ov.confidence, "certification level in (0,1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (print_defaults) {
        std::cout << pco::ExperimentConfig::defaults().canonical_json(2) << '\n';
        return 0;
    }
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::cerr << app.help();
        return 2;
    }

    pco::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = pco::ExperimentConfig::from_json_file(config_path);
        cfg.command = subs.front()->get_name();
        apply(ov, cfg);
        cfg.validate();
    } catch (const pco::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        return pco::run_experiment(cfg, std::cout);
    } catch (const pco::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error [" << cfg.command << "]: " << e.what() << '\n';
        return 3;
    }
}
