#pragma once

#include <cstdint>
#include <string>

#include "pco/signal.hpp"

/*
 * Smoothness bodies over the dyadic index set.
 *
 * Besov ball  B^s_{r,inf}(R):   sup_{j >= -1} 2^{j(s+1/2-1/r)} ( sum_k |theta_{jk}|^r )^{1/r} <= R
 * Poly-tail   PT^s_p(R):        sup_{k >= 1}  k^s ( sum_{lambda > k} |theta_lambda|^p )^{1/p} <= R
 *                               (lambda in flat level-major enumeration)
 *
 * Generators produce ball-boundary elements used as hard inputs in rate
 * experiments: dense (every coefficient at the level cap), sparse (one
 * coefficient per level at the cap), and mixed (random geometric support
 * sizes, level mass at the cap).
 */

namespace pco {

struct BesovBall {
    double s = 1.0; // smoothness, > 0
    double r = 2.0; // shape parameter, >= 1
    double R = 1.0; // radius, > 0

    void validate() const {
        if (s <= 0.0) throw config_error("besov smoothness s must be > 0");
        if (r < 1.0) throw config_error("besov shape r must be >= 1");
        if (R <= 0.0) throw config_error("besov radius R must be > 0");
    }

    // Rate theory assumes s > 1/r.
    bool rate_hypothesis() const { return s > 1.0 / r; }
};

struct PolyTailBall {
    double s = 1.0; // tail decay exponent, > 0
    double p = 2.0; // norm index
    double R = 1.0;

    void validate() const {
        if (s <= 0.0) throw config_error("poly-tail exponent s must be > 0");
        if (p < 1.0) throw config_error("poly-tail norm index p must be >= 1");
        if (R <= 0.0) throw config_error("poly-tail radius R must be > 0");
    }
};

// sup over stored levels of 2^{j(s+1/2-1/r)} (sum_k |theta_{jk}|^r)^{1/r}.
double besov_norm(const SignalSequence& theta, double s, double r);

bool besov_member(const SignalSequence& theta, const BesovBall& ball, double slack = 1e-12);

// sup_{1 <= k < stored length} k^s (sum_{lambda > k} |theta|^p)^{1/p}.
double poly_tail_norm(const SignalSequence& theta, double s, double p);

// theta_{jk} = +- R 2^{-j(s+1/2)} for every k, i.i.d. signs; norm = R at
// every level.
SignalSequence gen_dense(const BesovBall& ball, int J_max, std::uint64_t seed);

// One nonzero per level at a uniformly random position, magnitude
// R 2^{-j(s+1/2-1/r)}; norm = R at every level.
SignalSequence gen_sparse(const BesovBall& ball, int J_max, std::uint64_t seed);

// Random support of geometric size n_j in [1, 2^j], equal magnitudes
// R 2^{-j(s+1/2-1/r)} n_j^{-1/r}; norm = R at every level.
SignalSequence gen_mixed(const BesovBall& ball, int J_max, std::uint64_t seed);

enum class SignalShape { Dense, Sparse, Mixed };

SignalShape signal_shape_from_name(const std::string& name);
std::string signal_shape_name(SignalShape shape);

SignalSequence generate_signal(SignalShape shape, const BesovBall& ball, int J_max,
                               std::uint64_t seed);

} // namespace pco
