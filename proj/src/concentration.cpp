#include "pco/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pco {

NoiseMoments CalibrationResult::moments() const {
    NoiseMoments m;
    m.p = p;
    m.sigma_p = sigma_p_closed_form(kind, p);
    m.c1 = c1;
    m.c2 = c2;
    m.kappa_p = kappa_from(p, m.sigma_p, c1, c2);
    return m;
}

std::vector<double> simulate_Z(const NoiseSpec& spec, double p, std::size_t D,
                               std::size_t replicates, Exec exec,
                               std::uint64_t stream_offset) {
    if (D < 1) throw config_error("block size D must be >= 1");
    if (p < 1.0) throw config_error("power p must be >= 1");
    std::vector<double> out(replicates);
    const auto body = [&](std::size_t r) {
        auto gen = rng::stream(spec.seed, rng::EXP_CONC_Z, stream_offset + r);
        double z = 0.0;
        for (std::size_t i = 0; i < D; ++i)
            z += std::pow(std::abs(draw_noise(spec.kind, gen)), p);
        out[r] = z;
    };
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::size_t r = 0; r < replicates; ++r) body(r);
    } else {
        for (std::size_t r = 0; r < replicates; ++r) body(r);
    }
    return out;
}

TailCheckReport tail_check(const NoiseSpec& spec, double p, std::size_t D,
                           const NoiseMoments& m, const std::vector<double>& x_grid,
                           std::size_t replicates, Exec exec) {
    if (m.p != p) throw config_error("moments index does not match requested p");
    for (double x : x_grid)
        if (x < 1.0) throw config_error("tail check requires x >= 1");
    const auto z = simulate_Z(spec, p, D, replicates, exec);
    const double dd = static_cast<double>(D);
    const double mean_term = std::pow(m.sigma_p, p) * dd;
    const double d_pow = std::pow(dd, std::max(0.0, 1.0 - p / 2.0));

    TailCheckReport report;
    report.p = p;
    report.D = D;
    report.x_grid = x_grid;
    report.replicates = replicates;
    report.pass = true;
    for (double x : x_grid) {
        const double spread = m.kappa_p * d_pow * std::pow(x, p / 2.0);
        const double lo = 0.5 * mean_term - spread;
        const double hi = 1.5 * mean_term + spread;
        std::size_t outside = 0;
        for (double zi : z)
            if (zi < lo || zi > hi) ++outside;
        const double frac = static_cast<double>(outside) / static_cast<double>(replicates);
        const double bound = std::min(1.0, 2.0 * std::exp(-x));
        const double se = std::sqrt(bound * (1.0 - bound) / static_cast<double>(replicates));
        report.empirical_exceedance.push_back(frac);
        report.bound.push_back(bound);
        if (frac > bound + 3.0 * se) report.pass = false;
    }
    return report;
}

double binom_cdf(std::size_t k, std::size_t n, double q) {
    if (q <= 0.0) return 1.0;
    if (q >= 1.0) return k >= n ? 1.0 : 0.0;
    if (k >= n) return 1.0;
    // Sum C(n,i) q^i (1-q)^{n-i} for i <= k, accumulated from log terms
    // scaled by the largest to avoid underflow.
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    std::vector<double> logs(k + 1);
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= k; ++i) {
        const double di = static_cast<double>(i);
        const double dni = static_cast<double>(n - i);
        logs[i] = lgn - std::lgamma(di + 1.0) - std::lgamma(dni + 1.0) + di * lq + dni * l1q;
        lmax = std::max(lmax, logs[i]);
    }
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - lmax);
    const double v = std::exp(lmax) * sum;
    return std::min(1.0, v);
}

long long max_certified_count(std::size_t n, double q, double confidence) {
    if (n == 0) return -1;
    if (q >= 1.0) return static_cast<long long>(n);
    const double alpha = 1.0 - confidence;
    // Certified iff the exact one-sided p-value P(Bin(n,q) <= k) <= alpha.
    if (binom_cdf(0, n, q) > alpha) return -1;
    long long lo = 0;
    long long hi = static_cast<long long>(n);
    // binom_cdf is increasing in k; find the last k with cdf <= alpha.
    while (lo < hi) {
        const long long mid = lo + (hi - lo + 1) / 2;
        if (binom_cdf(static_cast<std::size_t>(mid), n, q) <= alpha)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

CalibrationResult calibrate_constants(const NoiseSpec& spec, double p,
                                      const std::vector<std::size_t>& D_grid,
                                      const std::vector<double>& x_grid,
                                      std::size_t replicates, double confidence,
                                      double lattice_step, double lattice_max, Exec exec) {
    if (D_grid.empty() || x_grid.empty()) throw config_error("calibration grids must be non-empty");
    if (replicates < 100) throw config_error("calibration needs >= 100 replicates");
    if (confidence <= 0.0 || confidence >= 1.0)
        throw config_error("confidence must lie in (0, 1)");
    for (double x : x_grid)
        if (x < 1.0) throw config_error("calibration requires x >= 1");

    CalibrationResult result;
    result.kind = spec.kind;
    result.p = p;
    result.confidence = confidence;
    result.replicates = replicates;

    const double sig_pow = std::pow(sigma_p_closed_form(spec.kind, p), p);
    for (std::size_t di = 0; di < D_grid.size(); ++di) {
        const std::size_t D = D_grid[di];
        auto z = simulate_Z(spec, p, D, replicates, exec,
                            static_cast<std::uint64_t>(di) * replicates);
        const double mean = sig_pow * static_cast<double>(D);
        for (auto& zi : z) zi = std::abs(zi - mean);
        std::sort(z.begin(), z.end(), std::greater<double>());
        for (double x : x_grid) {
            const double q = std::min(1.0, 2.0 * std::exp(-x));
            const long long k = max_certified_count(replicates, q, confidence);
            if (k < 0)
                throw calibration_error(
                    "grid point D=" + std::to_string(D) + " x=" + std::to_string(x) +
                    " cannot be certified at confidence " + std::to_string(confidence) +
                    " with " + std::to_string(replicates) + " replicates; increase replicates");
            // Exceedance count stays <= k iff the threshold dominates the
            // (k+1)-th largest deviation.
            const double quantile =
                static_cast<std::size_t>(k) >= replicates ? 0.0 : z[static_cast<std::size_t>(k)];
            result.constraints.push_back({D, x, quantile});
        }
    }

    // Constraints are half-planes c1 a + c2 b >= quantile with
    // a = sqrt(Dx), b = D^{(1-p/2)_+} x^{p/2}. For each lattice c1 take the
    // smallest feasible lattice c2; pick the pair minimizing c1 + c2
    // (ties: smaller c2, then smaller c1).
    const double dpow_exp = std::max(0.0, 1.0 - p / 2.0);
    const auto lattice = [&](double v) {
        return lattice_step * std::ceil(v / lattice_step - 1e-9);
    };
    bool found = false;
    double best_c1 = 0.0, best_c2 = 0.0;
    const long long steps = std::llround(lattice_max / lattice_step);
    for (long long i = 1; i <= steps; ++i) {
        const double c1 = lattice_step * static_cast<double>(i);
        double need = lattice_step;
        bool ok = true;
        for (const auto& con : result.constraints) {
            const double dd = static_cast<double>(con.D);
            const double a = std::sqrt(dd * con.x);
            const double b = std::pow(dd, dpow_exp) * std::pow(con.x, p / 2.0);
            const double rem = con.quantile - c1 * a;
            if (rem <= 0.0) continue;
            const double c2_min = lattice(rem / b);
            if (c2_min > lattice_max + 1e-9) {
                ok = false;
                break;
            }
            need = std::max(need, c2_min);
        }
        if (!ok) continue;
        if (!found || c1 + need < best_c1 + best_c2 - 1e-12 ||
            (std::abs(c1 + need - (best_c1 + best_c2)) <= 1e-12 && need < best_c2)) {
            found = true;
            best_c1 = c1;
            best_c2 = need;
        }
    }
    if (!found)
        throw calibration_error("no lattice pair up to " + std::to_string(lattice_max) +
                                " satisfies all " + std::to_string(result.constraints.size()) +
                                " constraints");
    result.c1 = best_c1;
    result.c2 = best_c2;
    return result;
}

} // namespace pco
