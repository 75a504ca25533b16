#include "pco/signal.hpp"

#include <algorithm>
#include <cmath>

namespace pco {

void Model::set_level(int j, std::vector<int> ks) {
    check_level(j);
    std::sort(ks.begin(), ks.end());
    const std::size_t cap = level_size(j);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 0 || static_cast<std::size_t>(ks[i]) >= cap)
            throw invalid_model_error("position " + std::to_string(ks[i]) +
                                      " out of range at level " + std::to_string(j));
        if (i > 0 && ks[i] == ks[i - 1])
            throw invalid_model_error("duplicate position at level " + std::to_string(j));
    }
    kept_[slot(j)] = std::move(ks);
}

bool Model::contains(DyadicIndex idx) const {
    if (!valid_index(idx) || idx.j > top_level_) return false;
    const auto& ks = kept_[slot(idx.j)];
    return std::binary_search(ks.begin(), ks.end(), idx.k);
}

bool Model::lex_less(const Model& a, const Model& b) {
    // Compare the flattened streams of kept (level, position) pairs.
    auto stream = [](const Model& m) {
        std::vector<std::pair<int, int>> out;
        out.reserve(m.total_size());
        for (int j = -1; j <= m.top_level_; ++j)
            for (int k : m.kept_[slot(j)]) out.emplace_back(j, k);
        return out;
    };
    const auto sa = stream(a);
    const auto sb = stream(b);
    return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
}

double weighted_lp_pow(const SignalSequence& v, const WeightScheme& w, double p) {
    if (p < 1.0) throw std::domain_error("lp norm requires p >= 1");
    double total = 0.0;
    for (int j = -1; j <= v.max_level(); ++j) {
        const double wj = w.level_weight(j);
        double level_sum = 0.0;
        for (double x : v.level(j)) level_sum += std::pow(std::abs(x), p);
        total += wj * level_sum;
    }
    return total;
}

double weighted_lp_norm(const SignalSequence& v, const WeightScheme& w, double p) {
    return std::pow(weighted_lp_pow(v, w, p), 1.0 / p);
}

double bias_term(const SignalSequence& theta, const Model& m, const WeightScheme& w, double p) {
    if (p < 1.0) throw std::domain_error("bias term requires p >= 1");
    double total = 0.0;
    for (int j = -1; j <= theta.max_level(); ++j) {
        const double wj = w.level_weight(j);
        const auto vals = theta.level(j);
        double level_sum = 0.0;
        if (j > m.top_level()) {
            for (double x : vals) level_sum += std::pow(std::abs(x), p);
        } else {
            const auto& kept = m.level(j);
            std::size_t ki = 0;
            for (std::size_t k = 0; k < vals.size(); ++k) {
                if (ki < kept.size() && static_cast<std::size_t>(kept[ki]) == k) {
                    ++ki;
                    continue;
                }
                level_sum += std::pow(std::abs(vals[k]), p);
            }
        }
        total += wj * level_sum;
    }
    return total;
}

double variance_term(const ObservationSet& obs, const SignalSequence& theta, const Model& m,
                     const WeightScheme& w, double p) {
    if (m.top_level() > obs.top_level)
        throw invalid_model_error("model reaches level " + std::to_string(m.top_level()) +
                                  " beyond observed level " + std::to_string(obs.top_level));
    double total = 0.0;
    for (int j = -1; j <= m.top_level(); ++j) {
        const double wj = w.level_weight(j);
        const auto yv = obs.level(j);
        double level_sum = 0.0;
        for (int k : m.level(j)) {
            const DyadicIndex idx{j, k};
            level_sum += std::pow(std::abs(yv[static_cast<std::size_t>(k)] - theta.at(idx)), p);
        }
        total += wj * level_sum;
    }
    return total;
}

double direct_model_risk(const ObservationSet& obs, const SignalSequence& theta, const Model& m,
                         const WeightScheme& w, double p) {
    double total = 0.0;
    const int top = std::max(theta.max_level(), obs.top_level);
    for (int j = -1; j <= top; ++j) {
        const double wj = w.level_weight(j);
        double level_sum = 0.0;
        for (std::size_t k = 0; k < level_size(j); ++k) {
            const DyadicIndex idx{j, static_cast<int>(k)};
            const double truth = j <= theta.max_level() ? theta.at(idx) : 0.0;
            double est = 0.0;
            if (j <= obs.top_level && m.contains(idx))
                est = obs.level(j)[k];
            level_sum += std::pow(std::abs(est - truth), p);
        }
        total += wj * level_sum;
    }
    return total;
}

} // namespace pco
