#include "pco/noise.hpp"

#include <cmath>

namespace pco {

NoiseKind noise_kind_from_name(const std::string& name) {
    if (name == "gaussian") return NoiseKind::StandardGaussian;
    if (name == "rademacher") return NoiseKind::Rademacher;
    if (name == "uniform") return NoiseKind::UniformScaled;
    throw config_error("unknown noise kind '" + name + "'");
}

std::string noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::StandardGaussian: return "gaussian";
        case NoiseKind::Rademacher: return "rademacher";
        case NoiseKind::UniformScaled: return "uniform";
    }
    throw config_error("unknown noise kind tag");
}

double draw_noise(NoiseKind kind, std::mt19937_64& gen) {
    switch (kind) {
        case NoiseKind::StandardGaussian: {
            std::normal_distribution<double> d(0.0, 1.0);
            return d(gen);
        }
        case NoiseKind::Rademacher: {
            std::bernoulli_distribution d(0.5);
            return d(gen) ? 1.0 : -1.0;
        }
        case NoiseKind::UniformScaled: {
            const double r = std::sqrt(3.0);
            std::uniform_real_distribution<double> d(-r, r);
            return d(gen);
        }
    }
    throw config_error("unknown noise kind tag");
}

std::vector<double> generate_noise(const NoiseSpec& spec, std::size_t count) {
    auto gen = rng::stream(spec.seed, rng::EXP_GENERIC, 0);
    std::vector<double> out(count);
    for (auto& x : out) x = draw_noise(spec.kind, gen);
    return out;
}

ObservationSet observe_with(const SignalSequence& theta, double epsilon, NoiseKind kind,
                            std::size_t N, std::mt19937_64& gen) {
    if (epsilon < 0.0) throw config_error("noise level must be >= 0");
    const int J = top_level_of(N);
    ObservationSet obs;
    obs.y = SignalSequence(J);
    obs.epsilon = epsilon;
    obs.top_level = J;
    obs.count = N;
    for (int j = -1; j <= J; ++j) {
        auto out = obs.y.level_mut(j);
        for (std::size_t k = 0; k < out.size(); ++k) {
            const DyadicIndex idx{j, static_cast<int>(k)};
            const double xi = epsilon > 0.0 ? draw_noise(kind, gen) : 0.0;
            out[k] = theta.at(idx) + epsilon * xi;
        }
    }
    return obs;
}

ObservationSet observe(const SignalSequence& theta, double epsilon, const NoiseSpec& spec,
                       std::size_t N) {
    auto gen = rng::stream(spec.seed, rng::EXP_OBSERVE, 0);
    return observe_with(theta, epsilon, spec.kind, N, gen);
}

} // namespace pco
