#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pco/besov.hpp"
#include "pco/exec.hpp"
#include "pco/selection.hpp"

/*
 * Risk evaluation.
 *
 * For i.i.d. noise the expected loss of the keep-m projection splits
 * exactly:
 *   E ||thetahat^(m) - theta||_p^p = B_p(m) + eps^p sigma_p^p sum_j w_j |m_j|
 *
 * oracle_risk minimizes that over a collection; mc_risk runs the selector
 * over replicated observations (the OpenMP kernel, with a serial reference
 * path producing bit-identical output); rate_fit sweeps eps and fits the
 * log-log slope against the minimax exponent:
 *   dense regimes   2ps/(2s+1)
 *   sparse regime   2p(s - 1/r + 1/p)/(2s + 1 - 2/r)
 */

namespace pco {

struct RiskReport {
    double mc_risk = 0.0;
    double mc_stderr = 0.0;
    double oracle_risk = 0.0;
    double oracle_ratio = 0.0;
    std::size_t replicates = 0;
    double epsilon = 0.0;
};

enum class Regime { Homogeneous, Intermediate, Frontier, Sparse };

std::string regime_name(Regime regime);

struct RateFit {
    std::vector<double> epsilons;
    std::vector<std::size_t> Ns;
    std::vector<double> risks;
    std::vector<double> stderrs;
    std::vector<double> oracle_risks;
    double slope = 0.0;
    double theory = 0.0;
    Regime regime = Regime::Homogeneous;
};

// B_p(m) + eps^p sigma_p^p sum_j w_j |m_j|.
double expected_model_risk(const SignalSequence& theta, const Model& m, double epsilon,
                           const PenaltySpec& spec, const WeightScheme& w);

// inf of expected_model_risk over the tag's collection on levels -1..J
// with J = top_level_of(spec.N); theta mass above J is irreducible bias.
double oracle_risk(const SignalSequence& theta, const StrategyTag& collection, double epsilon,
                   const PenaltySpec& spec, const WeightScheme& w);

// Oracle over the union of the given collections.
double oracle_risk(const SignalSequence& theta, const std::vector<StrategyTag>& collections,
                   double epsilon, const PenaltySpec& spec, const WeightScheme& w);

// Mean and standard error of ||selected estimate - theta||_p^p over
// replicates; replicate r draws from the stream (seed, EXP_MC_RISK, r), so
// serial and parallel runs agree bit for bit.
RiskReport mc_risk(const SignalSequence& theta, double epsilon, const PenaltySpec& spec,
                   const WeightScheme& w, const std::vector<StrategyTag>& strategies,
                   std::size_t replicates, NoiseKind kind, std::uint64_t seed,
                   Exec exec = Exec::Serial);

Regime classify_regime(double p, double s, double r);

// The eps-power of the minimax rate (log factors not included).
double theory_exponent(double p, double s, double r);

// Smallest power of two >= (R/eps)^2, capped at 2^16.
std::size_t rate_N_of_epsilon(double R, double epsilon, std::size_t cap = std::size_t{1} << 16);

// Unweighted least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// Sweep eps over a decreasing geometric grid; for each point draw the
// signal for the ball with the given shape and seed, choose N by
// rate_N_of_epsilon, run mc_risk, then fit log(risk) against log(eps).
RateFit rate_fit(const BesovBall& ball, double p, const std::vector<double>& epsilons,
                 const std::vector<StrategyTag>& strategies, SignalShape shape,
                 NoiseKind kind, std::size_t replicates, std::uint64_t seed,
                 const MomentsTable& table, WeightKind weight_kind = WeightKind::Dyadic,
                 Exec exec = Exec::Serial, int extra_levels = 4);

} // namespace pco
