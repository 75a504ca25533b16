#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pco/rng.hpp"
#include "pco/signal.hpp"

namespace pco {

// Every supported distribution is centered and satisfies the literal tail
// bound P(|xi| >= t) <= 2 exp(-t^2/2):
//   StandardGaussian  N(0,1)
//   Rademacher        +-1 with probability 1/2
//   UniformScaled     uniform on [-sqrt(3), sqrt(3)] (unit variance)
enum class NoiseKind { StandardGaussian, Rademacher, UniformScaled };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::StandardGaussian;
    std::uint64_t seed = 0;
};

NoiseKind noise_kind_from_name(const std::string& name);
std::string noise_kind_name(NoiseKind kind);

// One draw from an already-positioned stream.
double draw_noise(NoiseKind kind, std::mt19937_64& gen);

// count i.i.d. draws from the stream keyed by (spec.seed, EXP_GENERIC, 0).
std::vector<double> generate_noise(const NoiseSpec& spec, std::size_t count);

// Y = theta + epsilon * xi over the first N coordinates, N = 2^{J+1}.
// epsilon = 0 is allowed as a degenerate diagnostic (y = theta).
ObservationSet observe(const SignalSequence& theta, double epsilon, const NoiseSpec& spec,
                       std::size_t N);

// Same, drawing from a caller-provided stream (Monte Carlo loops position
// one stream per replicate).
ObservationSet observe_with(const SignalSequence& theta, double epsilon, NoiseKind kind,
                            std::size_t N, std::mt19937_64& gen);

} // namespace pco
