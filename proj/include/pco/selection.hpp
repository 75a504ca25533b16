#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pco/penalty.hpp"

/*
 * Criterion and model search.
 *
 *   crit(m) = - sum_{lambda in m} w_lambda |Y_lambda|^p + pen(m)
 *   selected model = argmin over the strategy's collection
 *   estimate       = Y on the selected model, 0 elsewhere
 *
 * Collections:
 *   H     full levels through a cut L in {0..J}
 *   I     full levels through L, level L+l keeps any subset of cardinality
 *         floor(2^{L+l} 2^{-lp/2} (l+1)^{-3})   (regression mode replaces
 *         the last exponent by -3p/2 when p > 2)
 *   S     every per-level subset; solved exactly by sort-and-scan because
 *         the penalty depends on m_j only through |m_j|, so the best size-d
 *         subset keeps the d largest |Y|
 *   flat  nested prefixes of the flat slot order with the single-slice
 *         uncapped penalty
 *   threshold(t)  the full collection under pen(m) = sum_m w t^p, whose
 *         argmin is exactly {|Y| > t}
 */

namespace pco {

struct StrategyTag {
    enum Kind { H, I, S, FlatNested, Threshold };
    Kind kind = H;
    double t = 0.0;      // threshold value, read only when kind == Threshold
    bool steep_i = false; // strategy-I tail exponent -3p/2 instead of -3
                          // (regression front-end, p > 2)

    static StrategyTag h() { return {H, 0.0, false}; }
    static StrategyTag i() { return {I, 0.0, false}; }
    static StrategyTag i_steep() { return {I, 0.0, true}; }
    static StrategyTag s() { return {S, 0.0, false}; }
    static StrategyTag flat() { return {FlatNested, 0.0, false}; }
    static StrategyTag threshold(double t) {
        if (t <= 0.0) throw config_error("threshold must be > 0");
        return {Threshold, t, false};
    }

    friend bool operator==(const StrategyTag&, const StrategyTag&) = default;
};

std::string strategy_tag_name(const StrategyTag& tag);

struct SelectionResult {
    Model model;
    StrategyTag strategy;
    double crit_value = 0.0;
    std::vector<int> per_level_cardinalities;
    std::optional<int> L; // cut level for H and I
};

// Cardinality kept at level L+l (l >= 1) under strategy I.
std::size_t strategy_I_cardinality(int L, int l, double p, bool steep = false);

// Criterion value of an explicit model under a strategy's penalty.
// Throws invalid_model_error when m is not in the strategy's collection.
double crit(const ObservationSet& obs, const Model& m, const StrategyTag& a,
            const PenaltySpec& spec, const WeightScheme& w);

// Total penalty contribution of level j at cardinality d (weights and the
// 2 eps^p factor included).
using LevelPenalty = std::function<double(int j, std::size_t d)>;

// Exact argmin over all per-level subsets for a penalty that depends on
// each level only through its cardinality. Sort |Y| descending (ties:
// smaller k first), scan cardinalities, keep the best prefix per level.
SelectionResult argmin_full_collection(const ObservationSet& obs, const WeightScheme& w,
                                       double p, const LevelPenalty& pen_level);

SelectionResult argmin_H(const ObservationSet& obs, const PenaltySpec& spec,
                         const WeightScheme& w);
SelectionResult argmin_I(const ObservationSet& obs, const PenaltySpec& spec,
                         const WeightScheme& w, bool steep = false);
SelectionResult argmin_S(const ObservationSet& obs, const PenaltySpec& spec,
                         const WeightScheme& w);
SelectionResult argmin_flat(const ObservationSet& obs, const PenaltySpec& spec,
                            const WeightScheme& w);

// Best (model, strategy) pair across the enabled strategies; ties broken by
// strategy order H < I < S < flat < threshold, then smaller model, then
// lexicographic index order.
SelectionResult argmin_overall(const ObservationSet& obs, const PenaltySpec& spec,
                               const WeightScheme& w,
                               const std::vector<StrategyTag>& strategies);

// Estimate induced by a selection: Y on the model, 0 elsewhere.
SignalSequence pco_estimate(const ObservationSet& obs, const SelectionResult& result);

// Keep exactly the coordinates with |Y_lambda| > t (strict).
std::pair<Model, SignalSequence> threshold_estimate(const ObservationSet& obs, double t,
                                                    const WeightScheme& w, double p);

// Exhaustive enumeration of a strategy's collection; refuses above the
// candidate guard.
SelectionResult brute_force_argmin(const ObservationSet& obs, const PenaltySpec& spec,
                                   const WeightScheme& w, const StrategyTag& tag,
                                   std::size_t guard = 1000000);

} // namespace pco
