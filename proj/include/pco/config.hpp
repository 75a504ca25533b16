#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pco/besov.hpp"
#include "pco/exec.hpp"
#include "pco/noise.hpp"
#include "pco/penalty.hpp"
#include "pco/selection.hpp"
#include "pco/weights.hpp"

/*
 * Experiment configuration: one JSON file with nested blocks
 * (signal / noise / penalty / sweep / io) plus a global seed. Unknown keys
 * are rejected by name; `--print-defaults` dumps every default. The
 * fingerprint of the parsed config is FNV-1a of its canonical dump and is
 * stamped into every CSV the run writes.
 */

namespace pco {

struct SignalConfig {
    std::string kind = "dense"; // dense | sparse | mixed | file,
                                // or a test function for regress
    double s = 1.0;
    double r = 2.0;
    double R = 1.0;
    std::optional<int> top_level;       // J; per-command default when absent
    std::optional<std::uint64_t> seed;  // falls back to the global seed
    std::size_t n = 1024;               // regression sample count
    std::string basis = "haar";         // regression expansion
};

struct NoiseConfig {
    std::string kind = "gaussian"; // gaussian | rademacher | uniform
    double epsilon = 0.1;          // sequence-model noise level
    double sigma = 1.0;            // regression noise scale
};

struct PenaltyConfig {
    double p = 2.0;
    std::string weights = "dyadic"; // constant | dyadic
    std::vector<std::string> strategies = {"H", "I", "S"};
    double threshold = 0.0; // used by the "threshold" strategy entry
    std::optional<double> q;
    std::optional<double> a;
    std::optional<double> K_I;
    std::optional<double> K_S;
};

struct SweepConfig {
    std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.025};
    std::size_t replicates = 100;
    std::vector<std::size_t> dims = {10, 20, 50, 100, 200}; // block sizes D
    std::vector<double> x_grid = {1.0, 1.5, 2.0, 3.0, 4.0, 5.0};
    double confidence = 0.99;
};

struct IoConfig {
    std::string input;                  // estimate / regress input CSV
    std::string output_prefix = "pco";  // artifact path prefix
    std::string tag;                    // free-form label, lands in metadata
};

struct ExperimentConfig {
    std::string command; // estimate | simulate | rates | concentration |
                         // regress | calibrate
    SignalConfig signal;
    NoiseConfig noise;
    PenaltyConfig penalty;
    SweepConfig sweep;
    IoConfig io;
    std::uint64_t seed = 1;
    std::string exec = "serial";
    std::string moments_file; // optional CSV merged over the built-in table

    static ExperimentConfig defaults() { return {}; }
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);

    // Canonical dump (sorted keys); hashing and --print-defaults both use it.
    std::string canonical_json(int indent = -1) const;
    std::uint64_t fingerprint() const;

    void validate() const; // throws config_error naming the offending field

    // -- derived views ----------------------------------------------------
    std::uint64_t signal_seed() const { return signal.seed.value_or(seed); }
    int top_level_or(int fallback) const { return signal.top_level.value_or(fallback); }
    NoiseKind noise_kind() const { return noise_kind_from_name(noise.kind); }
    WeightScheme weight_scheme() const;
    SignalShape signal_shape() const; // dense/sparse/mixed kinds only
    BesovBall ball() const { return {signal.s, signal.r, signal.R}; }
    Exec exec_mode() const { return exec_from_name(exec); }
    std::vector<StrategyTag> strategy_tags() const;
};

// Strategy names accepted in configs: H, I, I-steep, S, flat, threshold
// (case-insensitive; threshold reads PenaltyConfig::threshold).
StrategyTag strategy_tag_from_config(const std::string& name, double threshold);

} // namespace pco
