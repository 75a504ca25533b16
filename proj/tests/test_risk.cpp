// Expected and Monte Carlo risks, oracle benchmarks, regime
// classification, and the rate-fit sweep.

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "pco/noise.hpp"
#include "pco/rng.hpp"
#include "pco/risk.hpp"

using namespace pco;

namespace {

PenaltySpec spec_for(double p, std::size_t N) {
    return PenaltySpec::standard(p, N, NoiseKind::StandardGaussian, MomentsTable::builtin());
}

} // namespace

TEST_CASE("expected model risk formula") {
    const BesovBall ball{1.0, 2.0, 1.0};
    const SignalSequence theta = gen_mixed(ball, 3, 5);
    const PenaltySpec spec2 = spec_for(2.0, 16);

    // Empty model: pure bias.
    CHECK(expected_model_risk(theta, Model::empty(3), 0.1, spec2, WeightScheme::dyadic(2.0)) ==
          doctest::Approx(weighted_lp_pow(theta, WeightScheme::dyadic(2.0), 2.0))
              .epsilon(1e-14));

    // Zero signal, full model, p = 2, constant weights: eps^2 N.
    const SignalSequence zero(3);
    CHECK(expected_model_risk(zero, Model::full(3), 0.3, spec2, WeightScheme::constant()) ==
          doctest::Approx(0.09 * 16).epsilon(1e-14));

    // Hand evaluation at p = 3 with dyadic weights.
    const double p = 3.0;
    const PenaltySpec spec3 = spec_for(p, 16);
    const WeightScheme w = WeightScheme::dyadic(p);
    Model m(3);
    m.set_level(-1, {0});
    m.set_level(1, {1});
    m.set_level(3, {0, 4, 7});
    const double eps = 0.2;
    double expect = 0.0;
    for (int j = -1; j <= 3; ++j)
        for (std::size_t k = 0; k < level_size(j); ++k) {
            const DyadicIndex idx{j, static_cast<int>(k)};
            if (m.contains(idx))
                expect += w.level_weight(j) * std::pow(eps, p) *
                          std::pow(spec3.moments_p.sigma_p, p);
            else
                expect += w.level_weight(j) * std::pow(std::abs(theta.at(idx)), p);
        }
    CHECK(expected_model_risk(theta, m, eps, spec3, w) ==
          doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("expected model risk matches a Monte Carlo average") {
    const BesovBall ball{1.0, 2.0, 1.0};
    const SignalSequence theta = gen_mixed(ball, 3, 9);
    const std::size_t reps = 20000;

    for (double p : {2.0, 3.0}) {
        const PenaltySpec spec = spec_for(p, 16);
        const WeightScheme w = WeightScheme::dyadic(p);
        Model m(3);
        m.set_level(-1, {0});
        m.set_level(0, {0});
        m.set_level(2, {1, 3});
        m.set_level(3, {0, 2, 5});
        const double eps = 0.25;

        double sum = 0.0, sumsq = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            auto gen = rng::stream(4242, rng::EXP_GENERIC, r);
            const auto obs = observe_with(theta, eps, NoiseKind::StandardGaussian, 16, gen);
            const double loss = direct_model_risk(obs, theta, m, w, p);
            sum += loss;
            sumsq += loss * loss;
        }
        const double mean = sum / static_cast<double>(reps);
        const double var = (sumsq / static_cast<double>(reps) - mean * mean) /
                           static_cast<double>(reps - 1);
        const double se = std::sqrt(std::max(var, 0.0));

        const double analytic = expected_model_risk(theta, m, eps, spec, w);
        CHECK(std::abs(mean - analytic) <= 4.0 * se);
    }
}

TEST_CASE("oracle risk") {
    const PenaltySpec spec = spec_for(2.0, 16);
    const WeightScheme cw = WeightScheme::constant();

    // Zero signal: collections containing the empty model attain 0.
    const SignalSequence zero(3);
    CHECK(oracle_risk(zero, StrategyTag::s(), 0.1, spec, cw) == 0.0);
    CHECK(oracle_risk(zero, StrategyTag::flat(), 0.1, spec, cw) == 0.0);
    // The H collection starts at the cut L = 0 (two coordinates kept).
    CHECK(oracle_risk(zero, StrategyTag::h(), 0.1, spec, cw) ==
          doctest::Approx(2.0 * 0.01).epsilon(1e-12));

    // Single spike, p = 2: keep it iff the variance price is below A^2.
    for (double A : {0.5, 0.05}) {
        SignalSequence spike(3);
        spike.set({-1, 0}, A);
        const double eps = 0.1;
        const double expect = std::min(A * A, eps * eps);
        CHECK(oracle_risk(spike, StrategyTag::s(), eps, spec, cw) ==
              doctest::Approx(expect).epsilon(1e-12));
    }

    // Union oracle never exceeds any member's oracle.
    const SignalSequence theta = gen_mixed({1.0, 2.0, 1.0}, 3, 17);
    const std::vector<StrategyTag> all = {StrategyTag::h(), StrategyTag::i(),
                                          StrategyTag::s(), StrategyTag::flat()};
    const double u = oracle_risk(theta, all, 0.2, spec, cw);
    for (const auto& tag : all)
        CHECK(u <= oracle_risk(theta, tag, 0.2, spec, cw) + 1e-14);
}

TEST_CASE("oracle risk equals brute force at N = 16") {
    // The expected risk is additive across levels, so the full-collection
    // infimum is the sum of per-level minima over all subsets.
    const SignalSequence theta = gen_mixed({0.7, 2.0, 1.2}, 3, 23);
    for (double p : {1.0, 2.0, 4.0}) {
        const PenaltySpec spec = spec_for(p, 16);
        const WeightScheme w = WeightScheme::dyadic(p);
        const double eps = 0.15;
        const double var_coord = std::pow(eps, p) * std::pow(spec.moments_p.sigma_p, p);

        double brute = 0.0;
        for (int j = -1; j <= 3; ++j) {
            const std::size_t n = level_size(j);
            const double wj = w.level_weight(j);
            double best = std::numeric_limits<double>::infinity();
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                double risk = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double th = theta.at({j, static_cast<int>(k)});
                    if (mask >> k & 1u)
                        risk += wj * var_coord;
                    else
                        risk += wj * std::pow(std::abs(th), p);
                }
                best = std::min(best, risk);
            }
            brute += best;
        }
        CHECK(oracle_risk(theta, StrategyTag::s(), eps, spec, w) ==
              doctest::Approx(brute).epsilon(1e-12));

        // H oracle by scanning cuts directly.
        double bruteH = std::numeric_limits<double>::infinity();
        for (int L = 0; L <= 3; ++L) {
            Model m(3);
            for (int j = -1; j <= L; ++j) {
                std::vector<int> ks(level_size(j));
                for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = static_cast<int>(k);
                m.set_level(j, std::move(ks));
            }
            bruteH = std::min(bruteH, expected_model_risk(theta, m, eps, spec, w));
        }
        CHECK(oracle_risk(theta, StrategyTag::h(), eps, spec, w) ==
              doctest::Approx(bruteH).epsilon(1e-12));
    }
}

TEST_CASE("mc risk determinism and parallel equivalence") {
    const SignalSequence theta = gen_mixed({1.0, 2.0, 1.0}, 4, 3);
    const PenaltySpec spec = spec_for(2.0, 32);
    const WeightScheme w = WeightScheme::dyadic(2.0);
    const std::vector<StrategyTag> tags = {StrategyTag::h(), StrategyTag::i(),
                                           StrategyTag::s()};

    const RiskReport a = mc_risk(theta, 0.2, spec, w, tags, 500, NoiseKind::StandardGaussian,
                                 77, Exec::Serial);
    const RiskReport b = mc_risk(theta, 0.2, spec, w, tags, 500, NoiseKind::StandardGaussian,
                                 77, Exec::Serial);
    CHECK(a.mc_risk == b.mc_risk);
    CHECK(a.mc_stderr == b.mc_stderr);
    CHECK(a.oracle_risk == b.oracle_risk);

    // The parallel kernel must agree bit for bit with the serial reference.
    const RiskReport c = mc_risk(theta, 0.2, spec, w, tags, 500, NoiseKind::StandardGaussian,
                                 77, Exec::Parallel);
    CHECK(a.mc_risk == c.mc_risk);
    CHECK(a.mc_stderr == c.mc_stderr);
    CHECK(a.oracle_risk == c.oracle_risk);
    CHECK(a.oracle_ratio == c.oracle_ratio);

    CHECK(a.replicates == 500);
    CHECK(a.epsilon == 0.2);
    CHECK(a.mc_stderr >= 0.0);
    CHECK(a.oracle_ratio ==
          doctest::Approx(a.mc_risk / a.oracle_risk).epsilon(1e-12));

    CHECK_THROWS_AS(
        mc_risk(theta, 0.2, spec, w, tags, 1, NoiseKind::StandardGaussian, 77),
        config_error);
}

TEST_CASE("mc risk in the noiseless limit") {
    // eps = 0: selection sees theta exactly, every replicate agrees, and the
    // selected risk is pure bias, at most the bias of the empty model.
    const SignalSequence theta = gen_mixed({1.0, 2.0, 1.0}, 3, 41);
    const PenaltySpec spec = spec_for(2.0, 16);
    const WeightScheme w = WeightScheme::dyadic(2.0);
    const std::vector<StrategyTag> tags = {StrategyTag::h(), StrategyTag::i(),
                                           StrategyTag::s()};
    const RiskReport r = mc_risk(theta, 0.0, spec, w, tags, 10, NoiseKind::StandardGaussian, 1);
    CHECK(r.mc_stderr == 0.0);
    CHECK(r.mc_risk <= weighted_lp_pow(theta, w, 2.0) + 1e-14);
}

TEST_CASE("zero signal risk scales like the noise power") {
    // theta = 0, p = 2: mc_risk <= C eps^2 with C fit at the coarsest eps
    // and stable as eps shrinks.
    const SignalSequence zero(3);
    const WeightScheme w = WeightScheme::dyadic(2.0);
    const std::vector<StrategyTag> tags = {StrategyTag::h(), StrategyTag::i(),
                                           StrategyTag::s()};
    const PenaltySpec spec = spec_for(2.0, 16);
    std::vector<double> ratio;
    for (double eps : {0.1, 0.05, 0.025}) {
        const RiskReport r =
            mc_risk(zero, eps, spec, w, tags, 2000, NoiseKind::StandardGaussian, 11);
        ratio.push_back(r.mc_risk / (eps * eps));
    }
    for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] <= 1.5 * ratio[0] + 1e-9);
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(2.0, 1.0, 2.0) == Regime::Homogeneous);
    CHECK(classify_regime(2.0, 1.0, 2.5) == Regime::Homogeneous);
    CHECK(classify_regime(4.0, 2.0, 1.0) == Regime::Intermediate);
    CHECK(classify_regime(4.0, 2.0, 0.8) == Regime::Frontier); // r = p/(2s+1) exactly
    CHECK(classify_regime(4.0, 2.0, 0.6) == Regime::Sparse);
    CHECK(classify_regime(1.5, 1.0, 1.0) == Regime::Intermediate); // cut = 0.5 < 1 < 1.5
    CHECK_THROWS_AS(classify_regime(0.5, 1.0, 1.0), config_error);
    CHECK_THROWS_AS(classify_regime(2.0, 0.0, 1.0), config_error);
    CHECK_THROWS_AS(classify_regime(2.0, 1.0, 0.0), config_error);

    CHECK(regime_name(Regime::Homogeneous) == "homogeneous");
    CHECK(regime_name(Regime::Sparse) == "sparse");
}

TEST_CASE("theory exponent") {
    // Dense regimes: 2ps/(2s+1).
    CHECK(theory_exponent(2.0, 1.0, 2.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(theory_exponent(4.0, 2.0, 1.0) == doctest::Approx(16.0 / 5.0).epsilon(1e-15));
    CHECK(theory_exponent(4.0, 2.0, 0.8) == doctest::Approx(16.0 / 5.0).epsilon(1e-15));
    CHECK(theory_exponent(1.5, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    // Sparse regime: 2p(s - 1/r + 1/p)/(2s + 1 - 2/r), here
    // 8 (2 - 5/3 + 1/4) / (5 - 10/3) = 14/5.
    CHECK(theory_exponent(4.0, 2.0, 0.6) == doctest::Approx(2.8).epsilon(1e-12));
}

TEST_CASE("rate N of epsilon") {
    CHECK(rate_N_of_epsilon(1.0, 0.25) == 16);  // (1/0.25)^2 = 16, already a power of two
    CHECK(rate_N_of_epsilon(1.0, 0.1) == 128);  // 100 -> 128
    CHECK(rate_N_of_epsilon(2.0, 0.1) == 512);  // 400 -> 512
    CHECK(rate_N_of_epsilon(1.0, 1e-6) == std::size_t{1} << 16); // capped
    CHECK(rate_N_of_epsilon(1.0, 0.25, 8) == 8); // explicit cap wins
}

TEST_CASE("slope fitting") {
    // Exact line.
    CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, 4.0, 7.0}) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(fit_slope({2.0, 5.0}, {1.0, -0.5}) == doctest::Approx(-0.5).epsilon(1e-14));

    // Closed-form least squares on three points.
    const std::vector<double> x = {0.0, 1.0, 3.0};
    const std::vector<double> y = {0.0, 2.0, 5.0};
    const double xbar = (0.0 + 1.0 + 3.0) / 3.0;
    const double ybar = (0.0 + 2.0 + 5.0) / 3.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        num += (x[i] - xbar) * (y[i] - ybar);
        den += (x[i] - xbar) * (x[i] - xbar);
    }
    CHECK(fit_slope(x, y) == doctest::Approx(num / den).epsilon(1e-14));
}

TEST_CASE("rate fit validation and plumbing") {
    const BesovBall ball{1.0, 2.0, 1.0};
    const std::vector<StrategyTag> tags = {StrategyTag::h(), StrategyTag::i(),
                                           StrategyTag::s()};
    const auto& table = MomentsTable::builtin();

    CHECK_THROWS_AS(rate_fit(ball, 2.0, {0.1}, tags, SignalShape::Dense,
                             NoiseKind::StandardGaussian, 10, 1, table),
                    config_error);
    CHECK_THROWS_AS(rate_fit(ball, 2.0, {0.1, 0.2}, tags, SignalShape::Dense,
                             NoiseKind::StandardGaussian, 10, 1, table),
                    config_error);
    CHECK_THROWS_AS(rate_fit({0.5, 1.0, 1.0}, 2.0, {0.2, 0.1}, tags, SignalShape::Dense,
                             NoiseKind::StandardGaussian, 10, 1, table),
                    config_error); // s > 1/r fails

    const RateFit fit = rate_fit(ball, 2.0, {0.2, 0.1}, tags, SignalShape::Dense,
                                 NoiseKind::StandardGaussian, 40, 7, table);
    CHECK(fit.epsilons == std::vector<double>{0.2, 0.1});
    CHECK(fit.Ns == std::vector<std::size_t>{32, 128});
    CHECK(fit.risks.size() == 2);
    CHECK(fit.stderrs.size() == 2);
    CHECK(fit.oracle_risks.size() == 2);
    CHECK(fit.regime == Regime::Homogeneous);
    CHECK(fit.theory == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(std::isfinite(fit.slope));
    CHECK(fit.slope > 0.0); // risk shrinks with eps

    // Replay and parallel execution reproduce the same numbers exactly.
    const RateFit again = rate_fit(ball, 2.0, {0.2, 0.1}, tags, SignalShape::Dense,
                                   NoiseKind::StandardGaussian, 40, 7, table);
    CHECK(again.risks == fit.risks);
    CHECK(again.slope == fit.slope);
    const RateFit par = rate_fit(ball, 2.0, {0.2, 0.1}, tags, SignalShape::Dense,
                                 NoiseKind::StandardGaussian, 40, 7, table,
                                 WeightKind::Dyadic, Exec::Parallel);
    CHECK(par.risks == fit.risks);
    CHECK(par.slope == fit.slope);
}
