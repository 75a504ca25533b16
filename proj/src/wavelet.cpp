#include "pco/wavelet.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

namespace pco {

namespace {

void check_levels(std::size_t n, int J) {
    if (J < 0) throw geometry_error("top level must be >= 0");
    if (coordinate_count(J) > n)
        throw geometry_error("top level " + std::to_string(J) + " needs " +
                             std::to_string(coordinate_count(J)) + " coefficients from " +
                             std::to_string(n) + " samples");
}

// Scaling filters with sum h = sqrt(2), sum h^2 = 1.
std::vector<double> daubechies_filter(int order) {
    switch (order) {
        case 1:
            return {0.7071067811865476, 0.7071067811865476};
        case 2:
            return {0.48296291314469025, 0.8365163037378079, 0.2241438680420134,
                    -0.12940952255092145};
        case 3:
            return {0.3326705529500825, 0.8068915093110924, 0.4598775021184914,
                    -0.1350110200102546, -0.0854412738820267, 0.0352262918857095};
        default:
            throw config_error("periodized family supports orders 1..3");
    }
}

std::vector<double> highpass_of(const std::vector<double>& h) {
    const std::size_t L = h.size();
    std::vector<double> g(L);
    for (std::size_t m = 0; m < L; ++m)
        g[m] = (m % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - m];
    return g;
}

// One periodized analysis step: a (length len) -> approx, detail (len/2).
void analysis_step(const std::vector<double>& a, const std::vector<double>& h,
                   const std::vector<double>& g, std::vector<double>& approx,
                   std::vector<double>& detail) {
    const std::size_t len = a.size();
    const std::size_t half = len / 2;
    approx.assign(half, 0.0);
    detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        double sa = 0.0, sd = 0.0;
        for (std::size_t m = 0; m < h.size(); ++m) {
            const double v = a[(2 * k + m) % len];
            sa += h[m] * v;
            sd += g[m] * v;
        }
        approx[k] = sa;
        detail[k] = sd;
    }
}

// Transpose of analysis_step; exact inverse for orthogonal filters.
std::vector<double> synthesis_step(const std::vector<double>& approx,
                                   const std::vector<double>& detail,
                                   const std::vector<double>& h,
                                   const std::vector<double>& g) {
    const std::size_t half = approx.size();
    const std::size_t len = 2 * half;
    std::vector<double> a(len, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        for (std::size_t m = 0; m < h.size(); ++m) {
            a[(2 * k + m) % len] += h[m] * approx[k] + g[m] * detail[k];
        }
    }
    return a;
}

ObservationSet coeffs_of_samples(const std::vector<double>& x, double sigma,
                                 const WaveletBasis& basis, int J) {
    const std::size_t n = x.size();
    const double root_n = std::sqrt(static_cast<double>(n));
    ObservationSet obs;
    obs.y = SignalSequence(J);
    obs.epsilon = sigma / root_n;
    obs.top_level = J;
    obs.count = coordinate_count(J);

    if (basis.family == WaveletFamily::Haar) {
        // Block sums at the finest needed level, then pairwise collapse.
        const std::size_t B = std::size_t{1} << (J + 1);
        const std::size_t block = n / B;
        std::vector<double> sums(B, 0.0);
        for (std::size_t k = 0; k < B; ++k)
            for (std::size_t i = k * block; i < (k + 1) * block; ++i) sums[k] += x[i];
        for (int j = J; j >= 0; --j) {
            const std::size_t m = std::size_t{1} << j;
            auto out = obs.y.level_mut(j);
            const double scale = std::exp2(j / 2.0) / static_cast<double>(n);
            std::vector<double> next(m, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                out[k] = scale * (sums[2 * k] - sums[2 * k + 1]);
                next[k] = sums[2 * k] + sums[2 * k + 1];
            }
            sums = std::move(next);
        }
        obs.y.level_mut(-1)[0] = sums[0] / static_cast<double>(n);
        return obs;
    }

    const auto h = daubechies_filter(basis.order);
    const auto g = highpass_of(h);
    std::vector<double> a = x;
    std::vector<double> approx, detail;
    while (a.size() > 1) {
        const int lev = static_cast<int>(std::bit_width(a.size())) - 2; // detail level
        analysis_step(a, h, g, approx, detail);
        if (lev <= J) {
            auto out = obs.y.level_mut(lev);
            for (std::size_t k = 0; k < detail.size(); ++k) out[k] = detail[k] / root_n;
        }
        a = approx;
    }
    obs.y.level_mut(-1)[0] = a[0] / root_n;
    return obs;
}

} // namespace

WaveletBasis basis_from_name(const std::string& name) {
    if (name == "haar") return WaveletBasis::haar();
    if (name.rfind("db", 0) == 0 && name.size() == 3 && name[2] >= '1' && name[2] <= '3')
        return WaveletBasis::daubechies(name[2] - '0');
    throw config_error("unknown basis '" + name + "' (expected haar, db1, db2 or db3)");
}

std::string basis_name(const WaveletBasis& basis) {
    if (basis.family == WaveletFamily::Haar) return "haar";
    return "db" + std::to_string(basis.order);
}

double haar_value(DyadicIndex idx, double t) {
    if (!valid_index(idx)) throw geometry_error("invalid index");
    if (t <= 0.0 || t > 1.0) return 0.0;
    if (idx.j == -1) return 1.0;
    const double u = std::exp2(idx.j) * t - idx.k;
    if (u <= 0.0 || u > 1.0) return 0.0;
    return u <= 0.5 ? std::exp2(idx.j / 2.0) : -std::exp2(idx.j / 2.0);
}

int default_top_level(std::size_t n) {
    if (n < 2 || !is_power_of_two(n))
        throw config_error("sample size must be a power of two >= 2");
    return top_level_of(n);
}

ObservationSet forward_coeffs(const RegressionSample& sample, const WaveletBasis& basis,
                              int J) {
    sample.validate();
    check_levels(sample.n(), J);
    return coeffs_of_samples(sample.x, sample.sigma, basis, J);
}

ObservationSet forward_coeffs_direct(const RegressionSample& sample, int J) {
    sample.validate();
    check_levels(sample.n(), J);
    const std::size_t n = sample.n();
    ObservationSet obs;
    obs.y = SignalSequence(J);
    obs.epsilon = sample.sigma / std::sqrt(static_cast<double>(n));
    obs.top_level = J;
    obs.count = coordinate_count(J);
    for (int j = -1; j <= J; ++j) {
        auto out = obs.y.level_mut(j);
        for (std::size_t k = 0; k < out.size(); ++k) {
            double sum = 0.0;
            for (std::size_t i = 1; i <= n; ++i)
                sum += sample.x[i - 1] *
                       haar_value({j, static_cast<int>(k)},
                                  static_cast<double>(i) / static_cast<double>(n));
            out[k] = sum / static_cast<double>(n);
        }
    }
    return obs;
}

SignalSequence theta_of_f(const std::function<double(double)>& f, const WaveletBasis& basis,
                          int J, std::size_t n) {
    if (n < 2 || !is_power_of_two(n))
        throw config_error("grid size must be a power of two >= 2");
    check_levels(n, J);
    std::vector<double> vals(n);
    for (std::size_t i = 1; i <= n; ++i)
        vals[i - 1] = f(static_cast<double>(i) / static_cast<double>(n));
    return coeffs_of_samples(vals, 0.0, basis, J).y;
}

std::pair<SignalSequence, SelectionResult> pco_regress(const RegressionSample& sample,
                                                       const WaveletBasis& basis, int J,
                                                       const PenaltySpec& spec) {
    const auto obs = forward_coeffs(sample, basis, J);
    const WeightScheme w = WeightScheme::dyadic(spec.p);
    const std::vector<StrategyTag> strategies = {
        StrategyTag::h(), spec.p > 2.0 ? StrategyTag::i_steep() : StrategyTag::i(),
        StrategyTag::s()};
    auto sel = argmin_overall(obs, spec, w, strategies);
    auto est = pco_estimate(obs, sel);
    return {std::move(est), std::move(sel)};
}

std::vector<double> reconstruct(const SignalSequence& theta, const WaveletBasis& basis,
                                std::size_t grid_size) {
    if (basis.family == WaveletFamily::Haar) {
        std::vector<double> out(grid_size, 0.0);
        const double G = static_cast<double>(grid_size);
        for (std::size_t i = 1; i <= grid_size; ++i) {
            const double t = static_cast<double>(i) / G;
            double v = theta.at({-1, 0});
            for (int j = 0; j <= theta.max_level(); ++j) {
                const double u = std::exp2(j) * t;
                const int k = static_cast<int>(std::ceil(u)) - 1;
                if (k < 0 || static_cast<std::size_t>(k) >= level_size(j)) continue;
                const double frac = u - k;
                const double sgn = frac <= 0.5 ? 1.0 : -1.0;
                v += theta.at({j, k}) * sgn * std::exp2(j / 2.0);
            }
            out[i - 1] = v;
        }
        return out;
    }

    if (grid_size < theta.size() || !is_power_of_two(grid_size))
        throw geometry_error(
            "the periodized family reconstructs on power-of-two grids holding every stored "
            "coefficient");
    const auto h = daubechies_filter(basis.order);
    const auto g = highpass_of(h);
    std::vector<double> a = {theta.at({-1, 0})};
    int j = 0;
    while (a.size() < grid_size) {
        std::vector<double> detail(a.size(), 0.0);
        if (j <= theta.max_level()) {
            const auto lev = theta.level(j);
            for (std::size_t k = 0; k < lev.size(); ++k) detail[k] = lev[k];
        }
        a = synthesis_step(a, detail, h, g);
        ++j;
    }
    const double scale = std::sqrt(static_cast<double>(grid_size));
    for (auto& v : a) v *= scale;
    return a;
}

FunctionRisk lp_function_risk(const std::vector<double>& f_hat,
                              const std::function<double(double)>& f, double p) {
    const std::size_t G = f_hat.size();
    if (G < 2 || !is_power_of_two(G))
        throw config_error("quadrature grid must be a power of two >= 2");
    if (p < 1.0) throw config_error("function risk requires p >= 1");
    std::vector<double> diff(G);
    double acc = 0.0;
    for (std::size_t i = 1; i <= G; ++i) {
        diff[i - 1] = f_hat[i - 1] - f(static_cast<double>(i) / static_cast<double>(G));
        acc += std::pow(std::abs(diff[i - 1]), p);
    }
    FunctionRisk risk;
    risk.lp_pow = acc / static_cast<double>(G);
    const auto coeffs = coeffs_of_samples(diff, 0.0, WaveletBasis::haar(), top_level_of(G)).y;
    risk.besov_bridge = besov_bridge_norm(coeffs, p);
    return risk;
}

double besov_bridge_norm(const SignalSequence& coeffs, double p) {
    if (p < 1.0) throw config_error("bridge norm requires p >= 1");
    const double q = std::min(p, 2.0);
    double acc = 0.0;
    for (int j = -1; j <= coeffs.max_level(); ++j) {
        double mass = 0.0;
        for (double v : coeffs.level(j)) mass += std::pow(std::abs(v), p);
        const double level_norm = std::exp2(j * (0.5 - 1.0 / p)) * std::pow(mass, 1.0 / p);
        acc += std::pow(level_norm, q);
    }
    return std::pow(acc, 1.0 / q);
}

std::function<double(double)> named_test_function(const std::string& name) {
    if (name == "constant") return [](double) { return 1.0; };
    if (name == "ramp") return [](double t) { return t - (t >= 0.37 ? 1.0 : 0.0); };
    if (name == "blocks") {
        static const std::array<double, 11> pos = {0.1,  0.13, 0.15, 0.23, 0.25, 0.4,
                                                   0.44, 0.65, 0.76, 0.78, 0.81};
        static const std::array<double, 11> hgt = {4.0,  -5.0, 3.0, -4.0, 5.0, -4.2,
                                                   2.1,  4.3,  -3.1, 2.1,  -4.2};
        return [](double t) {
            double v = 0.0;
            for (std::size_t i = 0; i < pos.size(); ++i)
                if (t >= pos[i]) v += hgt[i];
            return v;
        };
    }
    if (name == "bumps") {
        static const std::array<double, 11> pos = {0.1,  0.13, 0.15, 0.23, 0.25, 0.4,
                                                   0.44, 0.65, 0.76, 0.78, 0.81};
        static const std::array<double, 11> hgt = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                                                   2.1, 4.3, 3.1, 5.1, 4.2};
        static const std::array<double, 11> wid = {0.005, 0.005, 0.006, 0.01,  0.01, 0.03,
                                                   0.01,  0.01,  0.005, 0.008, 0.005};
        return [](double t) {
            double v = 0.0;
            for (std::size_t i = 0; i < pos.size(); ++i) {
                const double u = std::abs(t - pos[i]) / wid[i];
                v += hgt[i] * std::pow(1.0 + u, -4.0);
            }
            return v;
        };
    }
    throw config_error("unknown test function '" + name +
                       "' (expected blocks, bumps, ramp or constant)");
}

} // namespace pco
