#pragma once

#include <algorithm>
#include <functional>
#include <string>

#include "pco/moments.hpp"
#include "pco/signal.hpp"

/*
 * Penalty machinery.
 *
 * Per level (d = |m_j| kept coefficients, deviation factor x):
 *   p_level(d, x)       = 3/2 sigma_p^p d + kappa_p 2^{(p-2)_+/2} d^{(1-p/2)_+} x^{p/2}
 *   p_level_sharp(d, x) = 3/2 sigma_2^2 d + kappa_2 x
 *
 * Whole model, weights omega_j:
 *   p <= 2:  pen(m) = 2 eps^p sum_j omega_j p_level(|m_j|, x_j)
 *   p  > 2:  pen(m) = 2 eps^p sum_j omega_j min(p_level, (2 q log N)^{p/2-1} p_level_sharp)
 *
 * Deviation factors by strategy (clamped to >= 1 for nonempty levels, 0 at d=0):
 *   H:    (p/2) log d
 *   I:    K_I d (1 + log(2^j / d))
 *   S:    K_S d j
 *   Flat: a log d            (single-slice nested mode, uncapped)
 */

namespace pco {

enum class Strategy { H, I, S, Flat };

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy s);

struct StrategyConstants {
    double a = 1.5;   // flat-mode log factor, must exceed 1 + (1-p/2)_+
    double K_I = 3.0; // strategy-I deviation constant
    double K_S = 3.0; // strategy-S deviation constant

    static StrategyConstants defaults(double p) {
        return {1.0 + std::max(0.0, 1.0 - p / 2.0) + 0.5, p + 1.0, p + 1.0};
    }
};

struct PenaltySpec {
    double p = 2.0;
    double q = 3.0; // cap exponent parameter, default p + 1
    std::size_t N = 2;
    NoiseMoments moments_p;
    NoiseMoments moments_2;
    StrategyConstants strategy;

    void validate() const;

    // q = p + 1, moments from the table, default strategy constants.
    static PenaltySpec standard(double p, std::size_t N, NoiseKind kind,
                                const MomentsTable& table);
    static PenaltySpec standard(double p, std::size_t N, NoiseKind kind);
};

// 3/2 sigma_p^p d + kappa_p 2^{(p-2)_+/2} d^{(1-p/2)_+} x^{p/2}; 0 at d = 0.
// Requires x >= 1 when d >= 1.
double p_level(double p, std::size_t d, double x, const NoiseMoments& m);

// 3/2 sigma_2^2 d + kappa_2 x with index-2 moments; same preconditions.
double p_level_sharp(std::size_t d, double x, const NoiseMoments& m2);

// Strategy deviation factor for a level holding d coefficients. The cut
// level L rides along for signature stability across strategies; the
// displayed formulas depend only on (j, d).
double x_factor(Strategy strat, double p, int j, std::size_t d, int L,
                const StrategyConstants& sc);

// x-factor supplier per (level, cardinality).
using XFactor = std::function<double(int j, std::size_t d)>;

XFactor x_factor_of(Strategy strat, const PenaltySpec& spec, int L);

// Whole-model penalty; applies the (2 q log N)^{p/2-1} cap when p > 2.
double pen(const Model& m, const PenaltySpec& spec, double epsilon, const WeightScheme& w,
           const XFactor& x_of);

// Flat nested mode: the candidate keeping the first k flat slots, penalty
// 2 eps^p p_level(k, max(a log k, 1)) on a single slice, never capped.
double pen_flat(std::size_t k, const PenaltySpec& spec, double epsilon);

} // namespace pco
