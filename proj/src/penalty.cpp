#include "pco/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace pco {

Strategy strategy_from_name(const std::string& name) {
    if (name == "H") return Strategy::H;
    if (name == "I") return Strategy::I;
    if (name == "S") return Strategy::S;
    if (name == "flat") return Strategy::Flat;
    throw config_error("unknown strategy '" + name + "' (expected H, I, S or flat)");
}

std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::H: return "H";
        case Strategy::I: return "I";
        case Strategy::S: return "S";
        case Strategy::Flat: return "flat";
    }
    throw config_error("unknown strategy tag");
}

void PenaltySpec::validate() const {
    if (p < 1.0) throw config_error("loss index p must be >= 1");
    if (q <= 1.0) throw config_error("cap parameter q must be > 1");
    if (p > 2.0 && N < 2) throw config_error("p > 2 requires N >= 2 (log N enters the cap)");
    if (moments_p.p != p) throw config_error("moments_p carries wrong index");
    if (moments_2.p != 2.0) throw config_error("moments_2 must carry index 2");
    if (strategy.a <= 1.0 + std::max(0.0, 1.0 - p / 2.0))
        throw config_error("flat-mode constant a must exceed 1 + (1 - p/2)_+");
    if (strategy.K_I <= 0.0 || strategy.K_S <= 0.0)
        throw config_error("strategy constants must be > 0");
}

PenaltySpec PenaltySpec::standard(double p, std::size_t N, NoiseKind kind,
                                  const MomentsTable& table) {
    PenaltySpec spec;
    spec.p = p;
    spec.q = p + 1.0;
    spec.N = N;
    spec.moments_p = default_moments(p, kind, table);
    spec.moments_2 = default_moments(2.0, kind, table);
    spec.strategy = StrategyConstants::defaults(p);
    spec.validate();
    return spec;
}

PenaltySpec PenaltySpec::standard(double p, std::size_t N, NoiseKind kind) {
    return standard(p, N, kind, MomentsTable::builtin());
}

namespace {

void check_x(std::size_t d, double x) {
    if (d == 0) return;
    if (x < 1.0)
        throw config_error("deviation factor x = " + std::to_string(x) +
                           " < 1 on a nonempty level");
}

} // namespace

double p_level(double p, std::size_t d, double x, const NoiseMoments& m) {
    if (d == 0) return 0.0;
    check_x(d, x);
    const double dd = static_cast<double>(d);
    const double lead = 1.5 * std::pow(m.sigma_p, p) * dd;
    const double spread = m.kappa_p * std::exp2(std::max(0.0, p - 2.0) / 2.0) *
                          std::pow(dd, std::max(0.0, 1.0 - p / 2.0)) *
                          std::pow(x, p / 2.0);
    return lead + spread;
}

double p_level_sharp(std::size_t d, double x, const NoiseMoments& m2) {
    if (d == 0) return 0.0;
    check_x(d, x);
    if (m2.p != 2.0) throw config_error("sharp level penalty needs index-2 moments");
    const double dd = static_cast<double>(d);
    return 1.5 * m2.sigma_p * m2.sigma_p * dd + m2.kappa_p * x;
}

double x_factor(Strategy strat, double p, int j, std::size_t d, int L,
                const StrategyConstants& sc) {
    (void)L;
    if (d == 0) return 0.0;
    const double dd = static_cast<double>(d);
    double v = 0.0;
    switch (strat) {
        case Strategy::H: v = (p / 2.0) * std::log(dd); break;
        case Strategy::I:
            v = sc.K_I * dd * (1.0 + std::log(std::exp2(j) / dd));
            break;
        case Strategy::S: v = sc.K_S * dd * static_cast<double>(j); break;
        case Strategy::Flat: v = sc.a * std::log(dd); break;
    }
    return std::max(v, 1.0);
}

XFactor x_factor_of(Strategy strat, const PenaltySpec& spec, int L) {
    const double p = spec.p;
    const StrategyConstants sc = spec.strategy;
    return [strat, p, L, sc](int j, std::size_t d) {
        return x_factor(strat, p, j, d, L, sc);
    };
}

double pen(const Model& m, const PenaltySpec& spec, double epsilon, const WeightScheme& w,
           const XFactor& x_of) {
    if (epsilon < 0.0) throw config_error("penalty requires epsilon >= 0");
    const double p = spec.p;
    double cap = 1.0;
    if (p > 2.0) {
        if (spec.N < 2) throw config_error("p > 2 requires N >= 2");
        cap = std::pow(2.0 * spec.q * std::log(static_cast<double>(spec.N)), p / 2.0 - 1.0);
    }
    double total = 0.0;
    for (int j = -1; j <= m.top_level(); ++j) {
        const std::size_t d = m.level(j).size();
        if (d == 0) continue;
        const double x = x_of(j, d);
        check_x(d, x);
        double per = p_level(p, d, x, spec.moments_p);
        if (p > 2.0) per = std::min(per, cap * p_level_sharp(d, x, spec.moments_2));
        total += w.level_weight(j) * per;
    }
    return 2.0 * std::pow(epsilon, p) * total;
}

double pen_flat(std::size_t k, const PenaltySpec& spec, double epsilon) {
    if (epsilon < 0.0) throw config_error("penalty requires epsilon >= 0");
    if (k == 0) return 0.0;
    const double x = std::max(spec.strategy.a * std::log(static_cast<double>(k)), 1.0);
    return 2.0 * std::pow(epsilon, spec.p) * p_level(spec.p, k, x, spec.moments_p);
}

} // namespace pco
