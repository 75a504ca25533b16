#include "pco/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pco {

namespace {

double pow_abs(double y, double p) { return std::pow(std::abs(y), p); }

// Per-level |theta|^p sorted descending plus prefix sums (unweighted).
struct LevelMass {
    double total = 0.0;
    std::vector<double> prefix; // prefix[d] = sum of the d largest |theta|^p
};

LevelMass level_mass(std::span<const double> vals, double p) {
    std::vector<double> pows(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) pows[k] = pow_abs(vals[k], p);
    std::sort(pows.begin(), pows.end(), std::greater<double>());
    LevelMass lm;
    lm.prefix.assign(pows.size() + 1, 0.0);
    for (std::size_t d = 0; d < pows.size(); ++d) lm.prefix[d + 1] = lm.prefix[d] + pows[d];
    lm.total = lm.prefix.back();
    return lm;
}

// theta mass above level J, weighted: irreducible bias for every model.
double tail_bias(const SignalSequence& theta, int J, const WeightScheme& w, double p) {
    double b = 0.0;
    for (int j = J + 1; j <= theta.max_level(); ++j) {
        double mass = 0.0;
        for (double x : theta.level(j)) mass += pow_abs(x, p);
        b += w.level_weight(j) * mass;
    }
    return b;
}

double level_mass_at(const SignalSequence& theta, int j, double p) {
    if (j > theta.max_level()) return 0.0;
    double mass = 0.0;
    for (double x : theta.level(j)) mass += pow_abs(x, p);
    return mass;
}

} // namespace

double expected_model_risk(const SignalSequence& theta, const Model& m, double epsilon,
                           const PenaltySpec& spec, const WeightScheme& w) {
    if (epsilon < 0.0) throw config_error("noise level must be >= 0");
    const double p = spec.p;
    const double vp = std::pow(epsilon, p) * std::pow(spec.moments_p.sigma_p, p);
    double risk = bias_term(theta, m, w, p);
    for (int j = -1; j <= m.top_level(); ++j)
        risk += vp * w.level_weight(j) * static_cast<double>(m.level(j).size());
    // Levels stored in theta above the model's range already count fully in
    // bias_term; a model below theta's top adds no variance there.
    return risk;
}

double oracle_risk(const SignalSequence& theta, const StrategyTag& collection, double epsilon,
                   const PenaltySpec& spec, const WeightScheme& w) {
    const double p = spec.p;
    const int J = top_level_of(spec.N);
    const double vp = std::pow(epsilon, p) * std::pow(spec.moments_p.sigma_p, p);

    std::vector<LevelMass> lm(static_cast<std::size_t>(J + 2));
    for (int j = -1; j <= J; ++j) {
        if (j <= theta.max_level()) {
            lm[static_cast<std::size_t>(j + 1)] = level_mass(theta.level(j), p);
        } else {
            LevelMass z;
            z.prefix.assign(level_size(j) + 1, 0.0);
            lm[static_cast<std::size_t>(j + 1)] = std::move(z);
        }
    }
    const double tail = tail_bias(theta, J, w, p);

    switch (collection.kind) {
        case StrategyTag::S:
        case StrategyTag::Threshold: {
            double total = tail;
            for (int j = -1; j <= J; ++j) {
                const auto& l = lm[static_cast<std::size_t>(j + 1)];
                const double wj = w.level_weight(j);
                double best = l.total; // d = 0
                for (std::size_t d = 1; d < l.prefix.size(); ++d)
                    best = std::min(best,
                                    l.total - l.prefix[d] + vp * static_cast<double>(d));
                total += wj * best;
            }
            return total;
        }
        case StrategyTag::H: {
            double best = 0.0;
            bool first = true;
            for (int L = 0; L <= J; ++L) {
                double cost = tail;
                for (int j = -1; j <= J; ++j) {
                    const double wj = w.level_weight(j);
                    if (j <= L)
                        cost += vp * wj * static_cast<double>(level_size(j));
                    else
                        cost += wj * lm[static_cast<std::size_t>(j + 1)].total;
                }
                if (first || cost < best) {
                    best = cost;
                    first = false;
                }
            }
            return best;
        }
        case StrategyTag::I: {
            double best = 0.0;
            bool first = true;
            for (int L = 0; L <= J; ++L) {
                double cost = tail;
                for (int j = -1; j <= L; ++j)
                    cost += vp * w.level_weight(j) * static_cast<double>(level_size(j));
                for (int j = L + 1; j <= J; ++j) {
                    const auto& l = lm[static_cast<std::size_t>(j + 1)];
                    const double wj = w.level_weight(j);
                    const std::size_t d = std::min(
                        strategy_I_cardinality(L, j - L, p, collection.steep_i),
                        level_size(j));
                    cost += wj * (l.total - l.prefix[d] + vp * static_cast<double>(d));
                }
                if (first || cost < best) {
                    best = cost;
                    first = false;
                }
            }
            return best;
        }
        case StrategyTag::FlatNested: {
            const std::size_t N = spec.N;
            double best = 0.0;
            double drop = 0.0; // weighted mass of the first k slots
            double keepvar = 0.0;
            double full = tail;
            for (int j = -1; j <= J; ++j)
                full += w.level_weight(j) * level_mass_at(theta, j, p);
            best = full; // k = 0
            for (std::size_t s = 0; s < N; ++s) {
                const auto idx = index_at_slot(s);
                const double wj = w.level_weight(idx.j);
                const double th =
                    idx.j <= theta.max_level()
                        ? theta.at(idx)
                        : 0.0;
                drop += wj * pow_abs(th, p);
                keepvar += vp * wj;
                best = std::min(best, full - drop + keepvar);
            }
            return best;
        }
    }
    throw config_error("unknown strategy tag");
}

double oracle_risk(const SignalSequence& theta, const std::vector<StrategyTag>& collections,
                   double epsilon, const PenaltySpec& spec, const WeightScheme& w) {
    if (collections.empty()) throw config_error("at least one collection required");
    double best = 0.0;
    bool first = true;
    for (const auto& tag : collections) {
        const double v = oracle_risk(theta, tag, epsilon, spec, w);
        if (first || v < best) {
            best = v;
            first = false;
        }
    }
    return best;
}

RiskReport mc_risk(const SignalSequence& theta, double epsilon, const PenaltySpec& spec,
                   const WeightScheme& w, const std::vector<StrategyTag>& strategies,
                   std::size_t replicates, NoiseKind kind, std::uint64_t seed, Exec exec) {
    if (replicates < 2) throw config_error("mc_risk needs >= 2 replicates");
    const std::size_t N = spec.N;
    std::vector<double> losses(replicates);
    const auto body = [&](std::size_t r) {
        auto gen = rng::stream(seed, rng::EXP_MC_RISK, r);
        const auto obs = observe_with(theta, epsilon, kind, N, gen);
        const auto sel = argmin_overall(obs, spec, w, strategies);
        losses[r] = direct_model_risk(obs, theta, sel.model, w, spec.p);
    };
    if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (std::size_t r = 0; r < replicates; ++r) body(r);
    } else {
        for (std::size_t r = 0; r < replicates; ++r) body(r);
    }

    // In-order compensated reduction keeps serial and parallel bit-equal.
    double sum = 0.0, comp = 0.0;
    for (double l : losses) {
        const double y = l - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / static_cast<double>(replicates);
    double sq = 0.0, sqc = 0.0;
    for (double l : losses) {
        const double d = l - mean;
        const double y = d * d - sqc;
        const double t = sq + y;
        sqc = (t - sq) - y;
        sq = t;
    }
    const double var = sq / static_cast<double>(replicates - 1);

    RiskReport report;
    report.mc_risk = mean;
    report.mc_stderr = std::sqrt(var / static_cast<double>(replicates));
    report.oracle_risk = oracle_risk(theta, strategies, epsilon, spec, w);
    report.oracle_ratio = report.oracle_risk > 0.0
                              ? mean / report.oracle_risk
                              : (mean > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.replicates = replicates;
    report.epsilon = epsilon;
    return report;
}

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::Homogeneous: return "homogeneous";
        case Regime::Intermediate: return "intermediate";
        case Regime::Frontier: return "frontier";
        case Regime::Sparse: return "sparse";
    }
    throw config_error("unknown regime tag");
}

Regime classify_regime(double p, double s, double r) {
    if (p < 1.0 || s <= 0.0 || r <= 0.0) throw config_error("bad regime parameters");
    const double cut = p / (2.0 * s + 1.0);
    const double tol = 1e-12 * std::max(1.0, std::abs(cut));
    if (std::abs(r - cut) <= tol) return Regime::Frontier;
    if (r < cut) return Regime::Sparse;
    return r >= p ? Regime::Homogeneous : Regime::Intermediate;
}

double theory_exponent(double p, double s, double r) {
    if (classify_regime(p, s, r) == Regime::Sparse)
        return 2.0 * p * (s - 1.0 / r + 1.0 / p) / (2.0 * s + 1.0 - 2.0 / r);
    return 2.0 * p * s / (2.0 * s + 1.0);
}

std::size_t rate_N_of_epsilon(double R, double epsilon, std::size_t cap) {
    if (epsilon <= 0.0 || R <= 0.0) throw config_error("rate sweep needs R, epsilon > 0");
    const double target = (R / epsilon) * (R / epsilon);
    std::size_t N = 2;
    while (static_cast<double>(N) < target && N < cap) N <<= 1;
    return std::min(N, cap);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw config_error("slope fit needs matched grids with >= 2 points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw config_error("slope fit needs distinct x values");
    return sxy / sxx;
}

RateFit rate_fit(const BesovBall& ball, double p, const std::vector<double>& epsilons,
                 const std::vector<StrategyTag>& strategies, SignalShape shape,
                 NoiseKind kind, std::size_t replicates, std::uint64_t seed,
                 const MomentsTable& table, WeightKind weight_kind, Exec exec,
                 int extra_levels) {
    ball.validate();
    if (!ball.rate_hypothesis())
        throw config_error("rate experiments require s > 1/r");
    if (epsilons.size() < 2) throw config_error("rate sweep needs >= 2 epsilon points");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (epsilons[i] >= epsilons[i - 1])
            throw config_error("epsilon grid must decrease strictly");

    const WeightScheme w = weight_kind == WeightKind::Dyadic ? WeightScheme::dyadic(p)
                                                             : WeightScheme::constant();
    RateFit fit;
    fit.regime = classify_regime(p, ball.s, ball.r);
    fit.theory = theory_exponent(p, ball.s, ball.r);
    std::vector<double> lx, ly;
    for (double eps : epsilons) {
        const std::size_t N = rate_N_of_epsilon(ball.R, eps);
        const int J = top_level_of(N);
        const auto theta = generate_signal(shape, ball, J + extra_levels, seed);
        const auto spec = PenaltySpec::standard(p, N, kind, table);
        const auto report =
            mc_risk(theta, eps, spec, w, strategies, replicates, kind, seed, exec);
        fit.epsilons.push_back(eps);
        fit.Ns.push_back(N);
        fit.risks.push_back(report.mc_risk);
        fit.stderrs.push_back(report.mc_stderr);
        fit.oracle_risks.push_back(report.oracle_risk);
        if (report.mc_risk <= 0.0)
            throw config_error("rate fit needs positive risks on every grid point");
        lx.push_back(std::log(eps));
        ly.push_back(std::log(report.mc_risk));
    }
    fit.slope = fit_slope(lx, ly);
    return fit;
}

} // namespace pco
