// Wall-clock comparison of the serial reference loops against the OpenMP
// builds of the two replicate kernels. Outputs must agree bit for bit;
// this binary reports timings and verifies that equality on the way.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pco/concentration.hpp"
#include "pco/risk.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp not available; parallel mode falls back to the serial loop\n");
#endif

    using namespace pco;
    const MomentsTable table = MomentsTable::builtin();

    {
        const NoiseSpec spec{NoiseKind::StandardGaussian, 7u};
        const std::size_t D = 200, reps = 200000;
        std::vector<double> zs, zp;
        const double ts = timed([&] { zs = simulate_Z(spec, 2.0, D, reps, Exec::Serial); });
        const double tp = timed([&] { zp = simulate_Z(spec, 2.0, D, reps, Exec::Parallel); });
        const bool same = zs == zp;
        std::printf("simulate_Z  D=%zu reps=%zu   serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s\n",
                    D, reps, ts, tp, ts / tp, same ? "yes" : "NO");
        if (!same) return 1;
    }

    {
        const BesovBall ball{1.0, 2.0, 1.0};
        const SignalSequence theta = gen_dense(ball, 9, 11u);
        const PenaltySpec spec =
            PenaltySpec::standard(2.0, 1024, NoiseKind::StandardGaussian, table);
        const WeightScheme w = WeightScheme::dyadic(2.0);
        const std::vector<StrategyTag> tags = {StrategyTag::h(), StrategyTag::i(),
                                               StrategyTag::s()};
        RiskReport rs, rp;
        const double ts = timed([&] {
            rs = mc_risk(theta, 0.05, spec, w, tags, 2000, NoiseKind::StandardGaussian, 3u,
                         Exec::Serial);
        });
        const double tp = timed([&] {
            rp = mc_risk(theta, 0.05, spec, w, tags, 2000, NoiseKind::StandardGaussian, 3u,
                         Exec::Parallel);
        });
        const bool same = rs.mc_risk == rp.mc_risk && rs.mc_stderr == rp.mc_stderr;
        std::printf("mc_risk     N=1024 reps=2000  serial %.3fs  parallel %.3fs  speedup %.2fx  identical %s\n",
                    ts, tp, ts / tp, same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
