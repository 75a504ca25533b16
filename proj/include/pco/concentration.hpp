#pragma once

#include <cstdint>
#include <vector>

#include "pco/exec.hpp"
#include "pco/moments.hpp"

/*
 * Empirical side of the block concentration bound. For Z = sum of D i.i.d.
 * terms |xi|^p, E Z = D sigma_p^p, and with probability >= 1 - 2 e^{-x}
 *
 *   1/2 sigma_p^p D - kappa_p D^{(1-p/2)_+} x^{p/2}
 *       <= Z <= 3/2 sigma_p^p D + kappa_p D^{(1-p/2)_+} x^{p/2}.
 *
 * tail_check measures how often simulated Z leaves that band. calibrate
 * searches the smallest lattice pair (c1, c2) for which the deviation bound
 * |Z - E Z| <= c1 sqrt(D x) + c2 D^{(1-p/2)_+} x^{p/2} holds with frequency
 * >= 1 - 2 e^{-x} at every (D, x) grid point, certified by a one-sided
 * exact binomial test.
 */

namespace pco {

struct TailCheckReport {
    double p = 2.0;
    std::size_t D = 1;
    std::vector<double> x_grid;
    std::vector<double> empirical_exceedance; // fraction outside the band, per x
    std::vector<double> bound;                // 2 e^{-x}, per x
    std::size_t replicates = 0;
    bool pass = false;
};

struct CalibrationResult {
    NoiseKind kind = NoiseKind::StandardGaussian;
    double p = 2.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double confidence = 0.99;
    std::size_t replicates = 0;
    // One row per (D, x) grid point: the deviation quantile the pair must
    // dominate through c1 sqrt(Dx) + c2 D^{(1-p/2)_+} x^{p/2}.
    struct Constraint {
        std::size_t D;
        double x;
        double quantile;
    };
    std::vector<Constraint> constraints;

    NoiseMoments moments() const;
};

// Replicated sums of D i.i.d. p-th absolute powers; replicate r draws from
// the stream keyed (seed, EXP_CONC_Z, stream_offset + r).
std::vector<double> simulate_Z(const NoiseSpec& spec, double p, std::size_t D,
                               std::size_t replicates, Exec exec = Exec::Serial,
                               std::uint64_t stream_offset = 0);

TailCheckReport tail_check(const NoiseSpec& spec, double p, std::size_t D,
                           const NoiseMoments& m, const std::vector<double>& x_grid,
                           std::size_t replicates, Exec exec = Exec::Serial);

// P(Bin(n, q) <= k), exact, evaluated in log space.
double binom_cdf(std::size_t k, std::size_t n, double q);

// Largest exceedance count still certifying rate <= q at the given
// confidence (the count whose Clopper-Pearson upper bound stays below q);
// -1 when even zero exceedances cannot certify.
long long max_certified_count(std::size_t n, double q, double confidence);

CalibrationResult calibrate_constants(const NoiseSpec& spec, double p,
                                      const std::vector<std::size_t>& D_grid,
                                      const std::vector<double>& x_grid,
                                      std::size_t replicates, double confidence = 0.99,
                                      double lattice_step = 0.05, double lattice_max = 20.0,
                                      Exec exec = Exec::Serial);

} // namespace pco
