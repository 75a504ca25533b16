#include "pco/besov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pco/rng.hpp"

namespace pco {

namespace {

// Generators admit the degenerate R = 0 (zero signal); membership and rate
// experiments keep the strict R > 0 of BesovBall::validate.
void check_generator_ball(const BesovBall& ball) {
    if (ball.s <= 0.0) throw config_error("besov smoothness s must be > 0");
    if (ball.r < 1.0) throw config_error("besov shape r must be >= 1");
    if (ball.R < 0.0) throw config_error("besov radius R must be >= 0");
}

} // namespace

double besov_norm(const SignalSequence& theta, double s, double r) {
    if (r < 1.0) throw config_error("besov shape r must be >= 1");
    double sup = 0.0;
    for (int j = -1; j <= theta.max_level(); ++j) {
        double mass = 0.0;
        for (double x : theta.level(j)) mass += std::pow(std::abs(x), r);
        const double level_norm = std::pow(mass, 1.0 / r);
        sup = std::max(sup, std::exp2(j * (s + 0.5 - 1.0 / r)) * level_norm);
    }
    return sup;
}

bool besov_member(const SignalSequence& theta, const BesovBall& ball, double slack) {
    ball.validate();
    return besov_norm(theta, ball.s, ball.r) <= ball.R + slack;
}

double poly_tail_norm(const SignalSequence& theta, double s, double p) {
    if (s <= 0.0) throw config_error("poly-tail exponent s must be > 0");
    if (p < 1.0) throw config_error("poly-tail norm index p must be >= 1");
    const std::size_t n = theta.size();
    // Suffix sums of |theta|^p in flat order; tail(k) = sum_{lambda > k}.
    std::vector<double> flat(n);
    for (std::size_t slot = 0; slot < n; ++slot)
        flat[slot] = std::pow(std::abs(theta.at(index_at_slot(slot))), p);
    double tail = 0.0;
    double sup = 0.0;
    // lambda is 1-based in the definition; slot is 0-based, lambda = slot+1.
    for (std::size_t slot = n; slot-- > 1;) {
        tail += flat[slot];
        const double k = static_cast<double>(slot); // truncation point k = lambda-1
        sup = std::max(sup, std::pow(k, s) * std::pow(tail, 1.0 / p));
    }
    return sup;
}

SignalSequence gen_dense(const BesovBall& ball, int J_max, std::uint64_t seed) {
    check_generator_ball(ball);
    auto gen = rng::stream(seed, rng::EXP_SIGNAL, 0);
    SignalSequence theta(J_max);
    std::bernoulli_distribution flip(0.5);
    for (int j = -1; j <= J_max; ++j) {
        // The generic magnitude assumes 2^j coordinates per level; level -1
        // holds a single coordinate, so its boundary magnitude follows the
        // one-term level norm instead.
        const double mag = j < 0
                               ? ball.R * std::exp2(ball.s + 0.5 - 1.0 / ball.r)
                               : ball.R * std::exp2(-j * (ball.s + 0.5));
        for (auto& x : theta.level_mut(j)) x = flip(gen) ? mag : -mag;
    }
    return theta;
}

SignalSequence gen_sparse(const BesovBall& ball, int J_max, std::uint64_t seed) {
    check_generator_ball(ball);
    auto gen = rng::stream(seed, rng::EXP_SIGNAL, 0);
    SignalSequence theta(J_max);
    std::bernoulli_distribution flip(0.5);
    for (int j = -1; j <= J_max; ++j) {
        const double mag = ball.R * std::exp2(-j * (ball.s + 0.5 - 1.0 / ball.r));
        std::uniform_int_distribution<int> pick(0, static_cast<int>(level_size(j)) - 1);
        const int k = pick(gen);
        theta.set({j, k}, flip(gen) ? mag : -mag);
    }
    return theta;
}

SignalSequence gen_mixed(const BesovBall& ball, int J_max, std::uint64_t seed) {
    check_generator_ball(ball);
    auto gen = rng::stream(seed, rng::EXP_SIGNAL, 0);
    SignalSequence theta(J_max);
    std::bernoulli_distribution flip(0.5);
    std::geometric_distribution<int> extra(0.5);
    for (int j = -1; j <= J_max; ++j) {
        const int cap = static_cast<int>(level_size(j));
        const int nj = std::min(cap, 1 + extra(gen));
        // Equal magnitudes chosen so the level r-norm sits on the ball cap.
        const double mag = ball.R * std::exp2(-j * (ball.s + 0.5 - 1.0 / ball.r)) *
                           std::pow(static_cast<double>(nj), -1.0 / ball.r);
        std::vector<int> ks(cap);
        std::iota(ks.begin(), ks.end(), 0);
        std::shuffle(ks.begin(), ks.end(), gen);
        for (int i = 0; i < nj; ++i) theta.set({j, ks[static_cast<std::size_t>(i)]},
                                               flip(gen) ? mag : -mag);
    }
    return theta;
}

SignalShape signal_shape_from_name(const std::string& name) {
    if (name == "dense") return SignalShape::Dense;
    if (name == "sparse") return SignalShape::Sparse;
    if (name == "mixed") return SignalShape::Mixed;
    throw config_error("unknown signal shape '" + name + "'");
}

std::string signal_shape_name(SignalShape shape) {
    switch (shape) {
        case SignalShape::Dense: return "dense";
        case SignalShape::Sparse: return "sparse";
        case SignalShape::Mixed: return "mixed";
    }
    throw config_error("unknown signal shape tag");
}

SignalSequence generate_signal(SignalShape shape, const BesovBall& ball, int J_max,
                               std::uint64_t seed) {
    switch (shape) {
        case SignalShape::Dense: return gen_dense(ball, J_max, seed);
        case SignalShape::Sparse: return gen_sparse(ball, J_max, seed);
        case SignalShape::Mixed: return gen_mixed(ball, J_max, seed);
    }
    throw config_error("unknown signal shape tag");
}

} // namespace pco
