#include "pco/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pco {

namespace {

struct Candidate {
    Model model;
    double crit = 0.0;
    std::optional<int> L;
};

// Shared tie chain: criterion value, then model size, then lexicographic.
bool better(const Candidate& a, const Candidate& b) {
    if (a.crit != b.crit) return a.crit < b.crit;
    const std::size_t sa = a.model.total_size();
    const std::size_t sb = b.model.total_size();
    if (sa != sb) return sa < sb;
    return Model::lex_less(a.model, b.model);
}

double pow_abs(double y, double p) { return std::pow(std::abs(y), p); }

// Positions sorted by |Y| descending; equal magnitudes keep smaller k first.
std::vector<int> sorted_positions(std::span<const double> vals) {
    std::vector<int> order(vals.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(vals[static_cast<std::size_t>(a)]) >
               std::abs(vals[static_cast<std::size_t>(b)]);
    });
    return order;
}

std::vector<int> full_positions(int j) {
    std::vector<int> ks(level_size(j));
    std::iota(ks.begin(), ks.end(), 0);
    return ks;
}

// Total level contribution of the strategy's penalty: weights, the cap for
// p > 2, and the 2 eps^p factor included.
LevelPenalty level_penalty_for(Strategy strat, const PenaltySpec& spec, double eps,
                               const WeightScheme& w) {
    if (eps < 0.0) throw config_error("selection requires epsilon >= 0");
    const double p = spec.p;
    const double cap =
        p > 2.0 ? std::pow(2.0 * spec.q * std::log(static_cast<double>(spec.N)), p / 2.0 - 1.0)
                : 1.0;
    const double scale = 2.0 * std::pow(eps, p);
    const auto xo = x_factor_of(strat, spec, 0);
    const NoiseMoments mp = spec.moments_p;
    const NoiseMoments m2 = spec.moments_2;
    return [p, cap, scale, xo, mp, m2, w](int j, std::size_t d) -> double {
        if (d == 0) return 0.0;
        const double x = xo(j, d);
        double per = p_level(p, d, x, mp);
        if (p > 2.0) per = std::min(per, cap * p_level_sharp(d, x, m2));
        return scale * w.level_weight(j) * per;
    };
}

// Largest L >= 0 with levels -1..L fully kept; the shape shared by H and I.
int full_prefix_cut(const Model& m) {
    if (m.level(-1).size() != 1)
        throw invalid_model_error("cut collections keep the level -1 coordinate");
    int L = -1;
    for (int j = 0; j <= m.top_level(); ++j) {
        if (m.level(j).size() == level_size(j))
            L = j;
        else
            break;
    }
    if (L < 0) throw invalid_model_error("cut collections keep level 0 fully");
    return L;
}

double weighted_gain(const ObservationSet& obs, const Model& m, const WeightScheme& w,
                     double p) {
    double gain = 0.0;
    for (int j = -1; j <= m.top_level(); ++j) {
        const double wj = w.level_weight(j);
        const auto vals = obs.level(j);
        for (int k : m.level(j)) gain += wj * pow_abs(vals[static_cast<std::size_t>(k)], p);
    }
    return gain;
}

SelectionResult finish(Candidate cand, StrategyTag tag) {
    SelectionResult res;
    res.per_level_cardinalities = cand.model.per_level_cardinalities();
    res.model = std::move(cand.model);
    res.strategy = tag;
    res.crit_value = cand.crit;
    res.L = cand.L;
    return res;
}

} // namespace

std::string strategy_tag_name(const StrategyTag& tag) {
    switch (tag.kind) {
        case StrategyTag::H: return "H";
        case StrategyTag::I: return tag.steep_i ? "I-steep" : "I";
        case StrategyTag::S: return "S";
        case StrategyTag::FlatNested: return "flat";
        case StrategyTag::Threshold: return "threshold";
    }
    throw config_error("unknown strategy tag");
}

std::size_t strategy_I_cardinality(int L, int l, double p, bool steep) {
    if (L < 0 || l < 1) throw config_error("strategy I cardinality needs L >= 0, l >= 1");
    const double e = (steep && p > 2.0) ? 1.5 * p : 3.0;
    const double v = std::exp2(static_cast<double>(L + l) - l * p / 2.0) *
                     std::pow(static_cast<double>(l + 1), -e);
    if (v < 1.0) return 0;
    return static_cast<std::size_t>(std::floor(v + 1e-9));
}

double crit(const ObservationSet& obs, const Model& m, const StrategyTag& a,
            const PenaltySpec& spec, const WeightScheme& w) {
    if (m.top_level() > obs.top_level)
        throw invalid_model_error("model exceeds the observed level range");
    const double p = spec.p;
    const double gain = weighted_gain(obs, m, w, p);
    double penalty = 0.0;
    switch (a.kind) {
        case StrategyTag::Threshold: {
            double wsum = 0.0;
            for (int j = -1; j <= m.top_level(); ++j)
                wsum += w.level_weight(j) * static_cast<double>(m.level(j).size());
            penalty = std::pow(a.t, p) * wsum;
            break;
        }
        case StrategyTag::FlatNested: {
            const std::size_t k = m.total_size();
            for (std::size_t s = 0; s < k; ++s)
                if (!m.contains(index_at_slot(s)))
                    throw invalid_model_error("model is not a flat prefix");
            penalty = pen_flat(k, spec, obs.epsilon);
            break;
        }
        case StrategyTag::H: {
            const int L = full_prefix_cut(m);
            for (int j = L + 1; j <= m.top_level(); ++j)
                if (!m.level(j).empty())
                    throw invalid_model_error("level " + std::to_string(j) +
                                              " must be empty above the cut");
            penalty = pen(m, spec, obs.epsilon, w, x_factor_of(Strategy::H, spec, L));
            break;
        }
        case StrategyTag::I: {
            const int L = full_prefix_cut(m);
            for (int j = L + 1; j <= obs.top_level; ++j) {
                const std::size_t want = strategy_I_cardinality(L, j - L, p, a.steep_i);
                const std::size_t have =
                    j <= m.top_level() ? m.level(j).size() : 0;
                if (have != want)
                    throw invalid_model_error(
                        "level " + std::to_string(j) + " keeps " + std::to_string(have) +
                        " coefficients; the cut " + std::to_string(L) + " collection keeps " +
                        std::to_string(want));
            }
            penalty = pen(m, spec, obs.epsilon, w, x_factor_of(Strategy::I, spec, L));
            break;
        }
        case StrategyTag::S:
            penalty = pen(m, spec, obs.epsilon, w, x_factor_of(Strategy::S, spec, 0));
            break;
    }
    return -gain + penalty;
}

SelectionResult argmin_full_collection(const ObservationSet& obs, const WeightScheme& w,
                                       double p, const LevelPenalty& pen_level) {
    const int J = obs.top_level;
    Model m(J);
    double total = 0.0;
    for (int j = -1; j <= J; ++j) {
        const auto vals = obs.level(j);
        const double wj = w.level_weight(j);
        const auto order = sorted_positions(vals);
        double prefix = 0.0;
        double best_v = pen_level(j, 0);
        std::size_t best_d = 0;
        for (std::size_t d = 1; d <= vals.size(); ++d) {
            prefix += wj * pow_abs(vals[static_cast<std::size_t>(order[d - 1])], p);
            const double v = -prefix + pen_level(j, d);
            if (v < best_v) {
                best_v = v;
                best_d = d;
            }
        }
        m.set_level(j, {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_d)});
        total += best_v;
    }
    return finish({std::move(m), total, std::nullopt}, StrategyTag::s());
}

SelectionResult argmin_H(const ObservationSet& obs, const PenaltySpec& spec,
                         const WeightScheme& w) {
    const int J = obs.top_level;
    const auto penl = level_penalty_for(Strategy::H, spec, obs.epsilon, w);
    double acc = 0.0;
    double best_v = 0.0;
    int best_L = -1;
    for (int j = -1; j <= J; ++j) {
        const double wj = w.level_weight(j);
        double gain = 0.0;
        for (double y : obs.level(j)) gain += wj * pow_abs(y, spec.p);
        acc += -gain + penl(j, level_size(j));
        if (j >= 0 && (best_L < 0 || acc < best_v)) {
            best_L = j;
            best_v = acc;
        }
    }
    Model m(J);
    for (int j = -1; j <= best_L; ++j) m.set_level(j, full_positions(j));
    return finish({std::move(m), best_v, best_L}, StrategyTag::h());
}

SelectionResult argmin_I(const ObservationSet& obs, const PenaltySpec& spec,
                         const WeightScheme& w, bool steep) {
    const int J = obs.top_level;
    const double p = spec.p;
    const auto penl = level_penalty_for(Strategy::I, spec, obs.epsilon, w);

    std::vector<std::vector<int>> order(static_cast<std::size_t>(J + 2));
    std::vector<std::vector<double>> prefix(static_cast<std::size_t>(J + 2));
    for (int j = -1; j <= J; ++j) {
        const auto vals = obs.level(j);
        const double wj = w.level_weight(j);
        const auto slot = static_cast<std::size_t>(j + 1);
        order[slot] = sorted_positions(vals);
        prefix[slot].assign(vals.size() + 1, 0.0);
        for (std::size_t d = 1; d <= vals.size(); ++d)
            prefix[slot][d] =
                prefix[slot][d - 1] +
                wj * pow_abs(vals[static_cast<std::size_t>(order[slot][d - 1])], p);
    }

    Candidate best;
    bool first = true;
    for (int L = 0; L <= J; ++L) {
        Model m(J);
        double c = 0.0;
        for (int j = -1; j <= L; ++j) {
            const auto slot = static_cast<std::size_t>(j + 1);
            m.set_level(j, full_positions(j));
            c += -prefix[slot].back() + penl(j, level_size(j));
        }
        for (int j = L + 1; j <= J; ++j) {
            const auto slot = static_cast<std::size_t>(j + 1);
            const std::size_t d =
                std::min(strategy_I_cardinality(L, j - L, p, steep), level_size(j));
            m.set_level(j, {order[slot].begin(),
                            order[slot].begin() + static_cast<std::ptrdiff_t>(d)});
            c += -prefix[slot][d] + penl(j, d);
        }
        Candidate cand{std::move(m), c, L};
        if (first || better(cand, best)) {
            best = std::move(cand);
            first = false;
        }
    }
    auto tag = steep ? StrategyTag::i_steep() : StrategyTag::i();
    return finish(std::move(best), tag);
}

SelectionResult argmin_S(const ObservationSet& obs, const PenaltySpec& spec,
                         const WeightScheme& w) {
    const auto penl = level_penalty_for(Strategy::S, spec, obs.epsilon, w);
    auto res = argmin_full_collection(obs, w, spec.p, penl);
    res.strategy = StrategyTag::s();
    return res;
}

SelectionResult argmin_flat(const ObservationSet& obs, const PenaltySpec& spec,
                            const WeightScheme& w) {
    if (obs.epsilon < 0.0) throw config_error("selection requires epsilon >= 0");
    const std::size_t N = obs.count;
    const int J = obs.top_level;
    std::vector<double> g(N);
    for (std::size_t s = 0; s < N; ++s) {
        const auto idx = index_at_slot(s);
        g[s] = w.level_weight(idx.j) *
               pow_abs(obs.level(idx.j)[static_cast<std::size_t>(idx.k)], spec.p);
    }
    double acc = 0.0;
    double best_v = 0.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= N; ++k) {
        acc += g[k - 1];
        const double v = -acc + pen_flat(k, spec, obs.epsilon);
        if (v < best_v) {
            best_v = v;
            best_k = k;
        }
    }
    Model m(J);
    std::vector<std::vector<int>> ks(static_cast<std::size_t>(J + 2));
    for (std::size_t s = 0; s < best_k; ++s) {
        const auto idx = index_at_slot(s);
        ks[static_cast<std::size_t>(idx.j + 1)].push_back(idx.k);
    }
    for (int j = -1; j <= J; ++j) m.set_level(j, ks[static_cast<std::size_t>(j + 1)]);
    return finish({std::move(m), best_v, std::nullopt}, StrategyTag::flat());
}

namespace {

int tag_rank(const StrategyTag& tag) {
    switch (tag.kind) {
        case StrategyTag::H: return 0;
        case StrategyTag::I: return 1;
        case StrategyTag::S: return 2;
        case StrategyTag::FlatNested: return 3;
        case StrategyTag::Threshold: return 4;
    }
    return 5;
}

} // namespace

SelectionResult argmin_overall(const ObservationSet& obs, const PenaltySpec& spec,
                               const WeightScheme& w,
                               const std::vector<StrategyTag>& strategies) {
    if (strategies.empty()) throw config_error("at least one strategy must be enabled");
    std::vector<SelectionResult> results;
    results.reserve(strategies.size());
    for (const auto& tag : strategies) {
        switch (tag.kind) {
            case StrategyTag::H: results.push_back(argmin_H(obs, spec, w)); break;
            case StrategyTag::I: results.push_back(argmin_I(obs, spec, w, tag.steep_i)); break;
            case StrategyTag::S: results.push_back(argmin_S(obs, spec, w)); break;
            case StrategyTag::FlatNested: results.push_back(argmin_flat(obs, spec, w)); break;
            case StrategyTag::Threshold: {
                auto [model, est] = threshold_estimate(obs, tag.t, w, spec.p);
                (void)est;
                SelectionResult r;
                r.per_level_cardinalities = model.per_level_cardinalities();
                r.crit_value = crit(obs, model, tag, spec, w);
                r.model = std::move(model);
                r.strategy = tag;
                results.push_back(std::move(r));
                break;
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto& a = results[i];
        const auto& b = results[best];
        bool take = false;
        if (a.crit_value != b.crit_value) {
            take = a.crit_value < b.crit_value;
        } else if (tag_rank(a.strategy) != tag_rank(b.strategy)) {
            take = tag_rank(a.strategy) < tag_rank(b.strategy);
        } else if (a.model.total_size() != b.model.total_size()) {
            take = a.model.total_size() < b.model.total_size();
        } else {
            take = Model::lex_less(a.model, b.model);
        }
        if (take) best = i;
    }
    return results[best];
}

SignalSequence pco_estimate(const ObservationSet& obs, const SelectionResult& result) {
    if (result.model.top_level() > obs.top_level)
        throw invalid_model_error("selection exceeds the observed level range");
    SignalSequence est(obs.top_level);
    for (int j = -1; j <= result.model.top_level(); ++j) {
        const auto vals = obs.level(j);
        for (int k : result.model.level(j))
            est.set({j, k}, vals[static_cast<std::size_t>(k)]);
    }
    return est;
}

std::pair<Model, SignalSequence> threshold_estimate(const ObservationSet& obs, double t,
                                                    const WeightScheme&, double) {
    if (t <= 0.0) throw config_error("threshold must be > 0");
    const int J = obs.top_level;
    Model m(J);
    SignalSequence est(J);
    for (int j = -1; j <= J; ++j) {
        const auto vals = obs.level(j);
        std::vector<int> keep;
        for (std::size_t k = 0; k < vals.size(); ++k) {
            if (std::abs(vals[k]) > t) {
                keep.push_back(static_cast<int>(k));
                est.set({j, static_cast<int>(k)}, vals[k]);
            }
        }
        m.set_level(j, std::move(keep));
    }
    return {std::move(m), std::move(est)};
}

namespace {

// All sorted d-subsets of {0..n-1}, emitted in lexicographic order.
void for_each_combination(int n, int d, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> pick(static_cast<std::size_t>(d));
    std::iota(pick.begin(), pick.end(), 0);
    if (d == 0) {
        fn(pick);
        return;
    }
    if (d > n) return;
    while (true) {
        fn(pick);
        int i = d - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - d + i) --i;
        if (i < 0) break;
        ++pick[static_cast<std::size_t>(i)];
        for (int l = i + 1; l < d; ++l)
            pick[static_cast<std::size_t>(l)] = pick[static_cast<std::size_t>(l - 1)] + 1;
    }
}

double choose(int n, int d) {
    if (d < 0 || d > n) return 0.0;
    double v = 1.0;
    for (int i = 1; i <= d; ++i) v *= static_cast<double>(n - d + i) / static_cast<double>(i);
    return v;
}

void consider(const ObservationSet& obs, const PenaltySpec& spec, const WeightScheme& w,
              const StrategyTag& tag, const Model& m, Candidate& best, bool& first) {
    Candidate cand{m, crit(obs, m, tag, spec, w), std::nullopt};
    if (first || better(cand, best)) {
        best = std::move(cand);
        first = false;
    }
}

// Recursive product over levels of per-level subset choices.
void enumerate_subsets(const ObservationSet& obs, const PenaltySpec& spec,
                       const WeightScheme& w, const StrategyTag& tag, Model& m, int j,
                       Candidate& best, bool& first) {
    if (j > obs.top_level) {
        consider(obs, spec, w, tag, m, best, first);
        return;
    }
    const int n = static_cast<int>(level_size(j));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<int> ks;
        for (int k = 0; k < n; ++k)
            if (mask & (std::uint64_t{1} << k)) ks.push_back(k);
        m.set_level(j, std::move(ks));
        enumerate_subsets(obs, spec, w, tag, m, j + 1, best, first);
    }
    m.set_level(j, {});
}

void enumerate_I_tails(const ObservationSet& obs, const PenaltySpec& spec,
                       const WeightScheme& w, const StrategyTag& tag, Model& m, int L, int j,
                       Candidate& best, bool& first) {
    if (j > obs.top_level) {
        consider(obs, spec, w, tag, m, best, first);
        return;
    }
    const int n = static_cast<int>(level_size(j));
    const int d = static_cast<int>(
        std::min(strategy_I_cardinality(L, j - L, spec.p, tag.steep_i), level_size(j)));
    for_each_combination(n, d, [&](const std::vector<int>& pick) {
        m.set_level(j, pick);
        enumerate_I_tails(obs, spec, w, tag, m, L, j + 1, best, first);
    });
    m.set_level(j, {});
}

} // namespace

SelectionResult brute_force_argmin(const ObservationSet& obs, const PenaltySpec& spec,
                                   const WeightScheme& w, const StrategyTag& tag,
                                   std::size_t guard) {
    const int J = obs.top_level;
    const std::size_t N = obs.count;
    Candidate best;
    bool first = true;

    switch (tag.kind) {
        case StrategyTag::H: {
            for (int L = 0; L <= J; ++L) {
                Model m(J);
                for (int j = -1; j <= L; ++j) m.set_level(j, full_positions(j));
                consider(obs, spec, w, tag, m, best, first);
            }
            break;
        }
        case StrategyTag::FlatNested: {
            Model m(J);
            consider(obs, spec, w, tag, m, best, first);
            std::vector<std::vector<int>> ks(static_cast<std::size_t>(J + 2));
            for (std::size_t s = 0; s < N; ++s) {
                const auto idx = index_at_slot(s);
                ks[static_cast<std::size_t>(idx.j + 1)].push_back(idx.k);
                for (int j = -1; j <= J; ++j)
                    m.set_level(j, ks[static_cast<std::size_t>(j + 1)]);
                consider(obs, spec, w, tag, m, best, first);
            }
            break;
        }
        case StrategyTag::S:
        case StrategyTag::Threshold: {
            if (N > 8 * sizeof(std::size_t) - 2 ||
                (std::size_t{1} << N) > guard)
                throw size_guard_error("full collection holds 2^" + std::to_string(N) +
                                       " models, above the guard of " + std::to_string(guard));
            Model m(J);
            enumerate_subsets(obs, spec, w, tag, m, -1, best, first);
            break;
        }
        case StrategyTag::I: {
            double count = 0.0;
            for (int L = 0; L <= J; ++L) {
                double prod = 1.0;
                for (int j = L + 1; j <= J; ++j)
                    prod *= choose(static_cast<int>(level_size(j)),
                                   static_cast<int>(strategy_I_cardinality(L, j - L, spec.p,
                                                                           tag.steep_i)));
                count += prod;
            }
            if (count > static_cast<double>(guard))
                throw size_guard_error("strategy-I collection holds about " +
                                       std::to_string(count) + " models, above the guard");
            for (int L = 0; L <= J; ++L) {
                Model m(J);
                for (int j = -1; j <= L; ++j) m.set_level(j, full_positions(j));
                enumerate_I_tails(obs, spec, w, tag, m, L, L + 1, best, first);
            }
            break;
        }
    }
    if (first) throw config_error("empty candidate collection");
    auto res = finish(std::move(best), tag);
    // The scan caches no L; recover it for cut collections.
    if (tag.kind == StrategyTag::H || tag.kind == StrategyTag::I)
        res.L = full_prefix_cut(res.model);
    return res;
}

} // namespace pco
