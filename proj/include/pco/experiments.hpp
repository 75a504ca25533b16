#pragma once

#include <iosfwd>

#include "pco/config.hpp"

/*
 * Experiment drivers behind the CLI subcommands. Each driver validates its
 * config slice, runs the experiment, writes CSV artifacts under
 * io.output_prefix and prints a one-line summary. run_experiment
 * dispatches on config.command.
 *
 * Exit-code contract (applied by the binary): 0 success, 2 config errors,
 * 3 numeric failures.
 */

namespace pco {

int run_experiment(const ExperimentConfig& cfg, std::ostream& out);

int run_simulate(const ExperimentConfig& cfg, std::ostream& out);
int run_estimate(const ExperimentConfig& cfg, std::ostream& out);
int run_rates(const ExperimentConfig& cfg, std::ostream& out);
int run_concentration(const ExperimentConfig& cfg, std::ostream& out);
int run_regress(const ExperimentConfig& cfg, std::ostream& out);
int run_calibrate(const ExperimentConfig& cfg, std::ostream& out);

// Moments table for a run: built-ins, overlaid with cfg.moments_file when set.
MomentsTable load_moments(const ExperimentConfig& cfg);

} // namespace pco
