// Equispaced regression front-end: Haar evaluation, forward transforms,
// selection plumbing, reconstruction and function-space risk.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "doctest.h"
#include "pco/rng.hpp"
#include "pco/selection.hpp"
#include "pco/wavelet.hpp"

using namespace pco;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    auto gen = rng::stream(seed, rng::EXP_GENERIC, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = nd(gen);
    return x;
}

PenaltySpec spec_for(double p, std::size_t N) {
    return PenaltySpec::standard(p, N, NoiseKind::StandardGaussian, MomentsTable::builtin());
}

// All stored indices through level J.
std::vector<DyadicIndex> indices_through(int J) {
    std::vector<DyadicIndex> out;
    out.push_back({-1, 0});
    for (int j = 0; j <= J; ++j)
        for (int k = 0; k < (1 << j); ++k) out.push_back({j, k});
    return out;
}

} // namespace

TEST_CASE("haar evaluation") {
    // Scaling function: 1 on (0,1], 0 outside.
    CHECK(haar_value({-1, 0}, 0.3) == 1.0);
    CHECK(haar_value({-1, 0}, 1.0) == 1.0);
    CHECK(haar_value({-1, 0}, 0.0) == 0.0);
    CHECK(haar_value({-1, 0}, 1.5) == 0.0);
    CHECK(haar_value({-1, 0}, -0.2) == 0.0);

    // Mother wavelet: +1 on (0,1/2], -1 on (1/2,1].
    CHECK(haar_value({0, 0}, 0.25) == 1.0);
    CHECK(haar_value({0, 0}, 0.5) == 1.0);
    CHECK(haar_value({0, 0}, 0.500001) == -1.0);
    CHECK(haar_value({0, 0}, 1.0) == -1.0);
    CHECK(haar_value({0, 0}, 0.0) == 0.0);

    // psi_{2,1} lives on (1/4,1/2], amplitude 2, sign change at 3/8.
    CHECK(haar_value({2, 1}, 0.25) == 0.0);   // left edge excluded
    CHECK(haar_value({2, 1}, 0.3) == 2.0);
    CHECK(haar_value({2, 1}, 0.375) == 2.0);  // u = 1/2 keeps the plus sign
    CHECK(haar_value({2, 1}, 0.4) == -2.0);
    CHECK(haar_value({2, 1}, 0.5) == -2.0);
    CHECK(haar_value({2, 1}, 0.6) == 0.0);

    // Amplitude scales like 2^{j/2}.
    CHECK(haar_value({4, 3}, (3.0 + 0.25) / 16.0) == doctest::Approx(4.0));
    CHECK(haar_value({4, 3}, (3.0 + 0.75) / 16.0) == doctest::Approx(-4.0));

    CHECK_THROWS_AS(haar_value({-2, 0}, 0.5), geometry_error);
    CHECK_THROWS_AS(haar_value({2, 4}, 0.5), geometry_error);
    CHECK_THROWS_AS(haar_value({1, -1}, 0.5), geometry_error);
}

TEST_CASE("discrete haar system is orthonormal") {
    // v_{jk}(i) = phi_jk(i/n)/sqrt(n) for j <= top_level_of(n) form an
    // orthonormal basis of R^n; the Gram matrix is exactly the identity.
    const std::size_t n = 64;
    const int J = default_top_level(n); // 5
    const auto idx = indices_through(J);
    REQUIRE(idx.size() == n);

    std::vector<std::vector<double>> v(idx.size(), std::vector<double>(n));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t i = 1; i <= n; ++i)
            v[a][i - 1] = haar_value(idx[a], static_cast<double>(i) / n) / std::sqrt(double(n));

    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a; b < idx.size(); ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += v[a][i] * v[b][i];
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("default top level") {
    CHECK(default_top_level(2) == 0);
    CHECK(default_top_level(8) == 2);
    CHECK(default_top_level(1024) == 9);
    CHECK_THROWS_AS(default_top_level(1), config_error);
    CHECK_THROWS_AS(default_top_level(100), config_error);
    CHECK_THROWS_AS(default_top_level(0), config_error);
}

TEST_CASE("forward coefficients of simple samples") {
    // A constant sample has only the scaling coefficient.
    RegressionSample sample;
    sample.x.assign(16, 2.5);
    sample.sigma = 2.0;
    const auto obs = forward_coeffs(sample, WaveletBasis::haar(), 3);
    CHECK(obs.epsilon == doctest::Approx(0.5)); // sigma/sqrt(n)
    CHECK(obs.top_level == 3);
    CHECK(obs.count == 16);
    CHECK(obs.y.at({-1, 0}) == doctest::Approx(2.5));
    for (int j = 0; j <= 3; ++j)
        for (double c : obs.y.level(j)) CHECK(c == doctest::Approx(0.0).epsilon(1e-14));

    // Requesting more coefficients than samples is a geometry error.
    CHECK_THROWS_AS(forward_coeffs(sample, WaveletBasis::haar(), 4), geometry_error);

    RegressionSample bad;
    bad.x.assign(12, 0.0);
    CHECK_THROWS_AS(forward_coeffs(bad, WaveletBasis::haar(), 1), config_error);
    bad.x.assign(16, 0.0);
    bad.sigma = -1.0;
    CHECK_THROWS_AS(forward_coeffs(bad, WaveletBasis::haar(), 1), config_error);
}

TEST_CASE("pyramid forward transform matches the direct sums") {
    for (const std::size_t n : {std::size_t{64}, std::size_t{1024}}) {
        RegressionSample sample;
        sample.x = random_vector(n, 9001 + n);
        sample.sigma = 1.0;
        const int J = default_top_level(n);
        const auto fast = forward_coeffs(sample, WaveletBasis::haar(), J);
        const auto slow = forward_coeffs_direct(sample, J);
        CHECK(fast.epsilon == doctest::Approx(slow.epsilon));
        for (int j = -1; j <= J; ++j) {
            const auto a = fast.y.level(j);
            const auto b = slow.y.level(j);
            for (std::size_t k = 0; k < a.size(); ++k)
                CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
        }

        // Truncating the stored levels only drops the fine ones.
        const auto low = forward_coeffs(sample, WaveletBasis::haar(), J - 2);
        for (int j = -1; j <= J - 2; ++j) {
            const auto a = fast.y.level(j);
            const auto b = low.y.level(j);
            for (std::size_t k = 0; k < b.size(); ++k)
                CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("haar and db1 produce the same coefficients") {
    const std::size_t n = 128;
    RegressionSample sample;
    sample.x = random_vector(n, 311);
    sample.sigma = 0.5;
    const int J = 5;
    const auto haar = forward_coeffs(sample, WaveletBasis::haar(), J);
    const auto db1 = forward_coeffs(sample, basis_from_name("db1"), J);
    for (int j = -1; j <= J; ++j) {
        const auto a = haar.y.level(j);
        const auto b = db1.y.level(j);
        for (std::size_t k = 0; k < a.size(); ++k)
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
    }
}

TEST_CASE("basis names") {
    CHECK(basis_from_name("haar").family == WaveletFamily::Haar);
    CHECK(basis_from_name("db2").family == WaveletFamily::PeriodizedDaubechies);
    CHECK(basis_from_name("db2").order == 2);
    CHECK(basis_name(WaveletBasis::haar()) == "haar");
    CHECK(basis_name(WaveletBasis::daubechies(3)) == "db3");
    CHECK_THROWS_AS(basis_from_name("db4"), config_error);
    CHECK_THROWS_AS(basis_from_name("sym2"), config_error);
}

TEST_CASE("coefficients of a half interval indicator") {
    // f = 1 on (0, 1/2), sampled at i/8: ones at i = 1, 2, 3.
    const auto f = [](double t) { return t < 0.5 ? 1.0 : 0.0; };
    const auto theta = theta_of_f(f, WaveletBasis::haar(), 2, 8);
    CHECK(theta.at({-1, 0}) == doctest::Approx(3.0 / 8.0));
    CHECK(theta.at({0, 0}) == doctest::Approx(3.0 / 8.0)); // (1+1+1-0)/8
    CHECK(theta.at({1, 0}) == doctest::Approx(std::sqrt(2.0) / 8.0));
    CHECK(theta.at({1, 1}) == doctest::Approx(0.0));
    CHECK(theta.at({2, 1}) == doctest::Approx(1.0 / 4.0)); // lone one at t = 3/8
    CHECK(theta.at({2, 2}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(theta_of_f(f, WaveletBasis::haar(), 2, 100), config_error);
    CHECK_THROWS_AS(theta_of_f(f, WaveletBasis::haar(), 4, 8), geometry_error);
}

TEST_CASE("reconstruction") {
    SUBCASE("zero coefficients give the zero function") {
        SignalSequence theta(3);
        for (double v : reconstruct(theta, WaveletBasis::haar(), 10)) CHECK(v == 0.0);
    }

    SUBCASE("a single mother coefficient is a step") {
        SignalSequence theta(1);
        theta.level_mut(0)[0] = 1.0;
        const auto vals = reconstruct(theta, WaveletBasis::haar(), 8);
        for (std::size_t i = 0; i < 4; ++i) CHECK(vals[i] == doctest::Approx(1.0));
        for (std::size_t i = 4; i < 8; ++i) CHECK(vals[i] == doctest::Approx(-1.0));
    }

    SUBCASE("haar reconstruction matches the pointwise sum on any grid") {
        SignalSequence theta(3);
        std::mt19937_64 gen(77);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int j = -1; j <= 3; ++j)
            for (auto& v : theta.level_mut(j)) v = nd(gen);
        const std::size_t G = 100; // not a power of two
        const auto vals = reconstruct(theta, WaveletBasis::haar(), G);
        for (std::size_t i = 1; i <= G; ++i) {
            const double t = static_cast<double>(i) / G;
            double want = 0.0;
            for (const auto idx : indices_through(3)) want += theta.at(idx) * haar_value(idx, t);
            CHECK(vals[i - 1] == doctest::Approx(want).epsilon(1e-12));
        }
    }

    SUBCASE("forward then reconstruct is the identity on the sample grid") {
        const std::size_t n = 64;
        for (const char* name : {"haar", "db1", "db2", "db3"}) {
            const auto basis = basis_from_name(name);
            RegressionSample sample;
            sample.x = random_vector(n, 555);
            sample.sigma = 0.0;
            const auto obs = forward_coeffs(sample, basis, default_top_level(n));
            const auto back = reconstruct(obs.y, basis, n);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(back[i] == doctest::Approx(sample.x[i]).epsilon(1e-10));
        }
    }

    SUBCASE("periodized family needs a power of two grid holding all coefficients") {
        SignalSequence theta(2); // 8 coefficients
        CHECK_THROWS_AS(reconstruct(theta, WaveletBasis::daubechies(2), 4), geometry_error);
        CHECK_THROWS_AS(reconstruct(theta, WaveletBasis::daubechies(2), 100), geometry_error);
        CHECK_NOTHROW(reconstruct(theta, WaveletBasis::daubechies(2), 8));
        CHECK_NOTHROW(reconstruct(theta, WaveletBasis::haar(), 5));
    }
}

TEST_CASE("function risk") {
    SUBCASE("perfect fit has zero risk") {
        const auto f = named_test_function("ramp");
        const std::size_t G = 64;
        std::vector<double> fhat(G);
        for (std::size_t i = 1; i <= G; ++i) fhat[i - 1] = f(static_cast<double>(i) / G);
        const auto risk = lp_function_risk(fhat, f, 2.0);
        CHECK(risk.lp_pow == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(risk.besov_bridge == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("constant offset") {
        // |f_hat - f| = 0.5 everywhere: lp_pow = 0.5^p for every p.
        const auto f = [](double) { return 1.0; };
        std::vector<double> fhat(32, 1.5);
        for (const double p : {1.0, 2.0, 3.0}) {
            const auto risk = lp_function_risk(fhat, f, p);
            CHECK(risk.lp_pow == doctest::Approx(std::pow(0.5, p)).epsilon(1e-12));
        }
        // The difference is the pure scaling coefficient: bridge norm 0.5.
        CHECK(lp_function_risk(fhat, f, 2.0).besov_bridge == doctest::Approx(0.5));
    }

    SUBCASE("single wavelet coefficient, closed form") {
        // f_hat = A psi_{2,1}: |f_hat| = 2A on a quarter of the grid.
        const double A = 0.7;
        SignalSequence theta(2);
        theta.level_mut(2)[1] = A;
        const auto fhat = reconstruct(theta, WaveletBasis::haar(), 64);
        const auto zero = [](double) { return 0.0; };
        for (const double p : {1.0, 2.0, 4.0}) {
            const auto risk = lp_function_risk(fhat, zero, p);
            CHECK(risk.lp_pow == doctest::Approx(std::pow(2.0 * A, p) / 4.0).epsilon(1e-10));
            // One coefficient at level 2: bridge norm 2^{2(1/2 - 1/p)} A.
            CHECK(risk.besov_bridge ==
                  doctest::Approx(std::exp2(2.0 * (0.5 - 1.0 / p)) * A).epsilon(1e-10));
        }
    }

    SUBCASE("for p = 2 the bridge norm squares to the quadrature error") {
        // Parseval: the grid difference expands exactly in the discrete
        // haar system, so (1/G) sum diff^2 = sum of squared coefficients.
        const auto f = named_test_function("blocks");
        const std::size_t G = 256;
        std::vector<double> fhat(G);
        std::mt19937_64 gen(12);
        std::normal_distribution<double> nd(0.0, 0.3);
        for (std::size_t i = 1; i <= G; ++i)
            fhat[i - 1] = f(static_cast<double>(i) / G) + nd(gen);
        const auto risk = lp_function_risk(fhat, f, 2.0);
        CHECK(risk.besov_bridge * risk.besov_bridge ==
              doctest::Approx(risk.lp_pow).epsilon(1e-12));
    }

    SUBCASE("input validation") {
        const auto zero = [](double) { return 0.0; };
        CHECK_THROWS_AS(lp_function_risk(std::vector<double>(100, 0.0), zero, 2.0),
                        config_error);
        CHECK_THROWS_AS(lp_function_risk(std::vector<double>(64, 0.0), zero, 0.5),
                        config_error);
        CHECK_THROWS_AS(besov_bridge_norm(SignalSequence(2), 0.5), config_error);
    }
}

TEST_CASE("pco regress wires the selection machinery") {
    const std::size_t n = 256;
    const int J = default_top_level(n);
    const auto f = named_test_function("blocks");
    RegressionSample sample;
    sample.sigma = 1.0;
    sample.x.resize(n);
    auto gen = rng::stream(88, rng::EXP_REGRESS, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t i = 1; i <= n; ++i)
        sample.x[i - 1] = f(static_cast<double>(i) / n) + sample.sigma * nd(gen);

    SUBCASE("matches manual selection over H, I, S") {
        for (const double p : {2.0, 4.0}) {
            const auto spec = spec_for(p, coordinate_count(J));
            const auto [est, sel] = pco_regress(sample, WaveletBasis::haar(), J, spec);

            const auto obs = forward_coeffs(sample, WaveletBasis::haar(), J);
            const std::vector<StrategyTag> tags = {
                StrategyTag::h(), p > 2.0 ? StrategyTag::i_steep() : StrategyTag::i(),
                StrategyTag::s()};
            const auto want = argmin_overall(obs, spec, WeightScheme::dyadic(p), tags);
            CHECK(sel.model == want.model);
            CHECK(sel.crit_value == doctest::Approx(want.crit_value));
            const auto want_est = pco_estimate(obs, want);
            for (int j = -1; j <= J; ++j) {
                const auto a = est.level(j);
                const auto b = want_est.level(j);
                for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
            }
        }
    }

    SUBCASE("estimate keeps observed values on the selected model only") {
        const auto spec = spec_for(2.0, coordinate_count(J));
        const auto [est, sel] = pco_regress(sample, WaveletBasis::haar(), J, spec);
        const auto obs = forward_coeffs(sample, WaveletBasis::haar(), J);
        for (int j = -1; j <= J; ++j) {
            const auto e = est.level(j);
            const auto y = obs.y.level(j);
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (sel.model.contains({j, static_cast<int>(k)}))
                    CHECK(e[k] == y[k]);
                else
                    CHECK(e[k] == 0.0);
            }
        }
    }
}

TEST_CASE("noiseless regression recovers the signal exactly") {
    // sigma = 0 makes the penalty vanish; every strategy keeps all mass and
    // the estimate reproduces the sampled function.
    const std::size_t n = 512;
    const int J = default_top_level(n);
    const auto f = named_test_function("blocks");
    RegressionSample sample;
    sample.sigma = 0.0;
    sample.x.resize(n);
    for (std::size_t i = 1; i <= n; ++i) sample.x[i - 1] = f(static_cast<double>(i) / n);

    const auto spec = spec_for(2.0, coordinate_count(J));
    const auto [est, sel] = pco_regress(sample, WaveletBasis::haar(), J, spec);
    const auto theta = theta_of_f(f, WaveletBasis::haar(), J, n);
    for (int j = -1; j <= J; ++j) {
        const auto a = est.level(j);
        const auto b = theta.level(j);
        for (std::size_t k = 0; k < a.size(); ++k)
            CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
    }
    const auto back = reconstruct(est, WaveletBasis::haar(), n);
    for (std::size_t i = 1; i <= n; ++i)
        CHECK(back[i - 1] == doctest::Approx(f(static_cast<double>(i) / n)).epsilon(1e-10));
}

TEST_CASE("steep strategy I empties fast tails") {
    // p = 4 steepens the tail exponent to 3p/2 = 6.
    CHECK(strategy_I_cardinality(4, 1, 4.0, true) == 0);  // floor(32 / (4 * 64))
    CHECK(strategy_I_cardinality(4, 1, 4.0, false) == 1); // floor(32 / (4 * 8))
}

TEST_CASE("named test functions") {
    const auto blocks = named_test_function("blocks");
    CHECK(blocks(0.05) == doctest::Approx(0.0));
    CHECK(blocks(0.1) == doctest::Approx(4.0));  // jumps are right continuous
    CHECK(blocks(0.2) == doctest::Approx(2.0));  // 4 - 5 + 3
    CHECK(blocks(0.5) == doctest::Approx(0.9));
    CHECK(blocks(0.9) == doctest::Approx(0.0));  // all jumps cancel

    const auto ramp = named_test_function("ramp");
    CHECK(ramp(0.2) == doctest::Approx(0.2));
    CHECK(ramp(0.37) == doctest::Approx(-0.63));
    CHECK(ramp(1.0) == doctest::Approx(0.0));

    const auto constant = named_test_function("constant");
    CHECK(constant(0.123) == 1.0);

    const auto bumps = named_test_function("bumps");
    CHECK(bumps(0.1) > 4.0);   // peak of the first bump plus neighbours
    CHECK(bumps(0.1) < 4.01);
    CHECK(bumps(0.55) < 0.05); // quiet between bump clusters
    for (int i = 1; i <= 200; ++i) CHECK(bumps(i / 200.0) >= 0.0);

    CHECK_THROWS_AS(named_test_function("doppler"), config_error);
}
