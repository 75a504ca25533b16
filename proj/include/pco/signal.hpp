#pragma once

#include <span>
#include <vector>

#include "pco/dyadic.hpp"
#include "pco/weights.hpp"

namespace pco {

// Coefficient sequence stored per level, j = -1 .. max_level. Coordinates
// beyond the stored range read as zero; whether that is exact (signal built
// here, zero tail by construction) or a truncation of an unknown tail
// (loaded from a file) is tracked by exact_tail.
class SignalSequence {
public:
    SignalSequence() : SignalSequence(0) {}

    explicit SignalSequence(int max_level, bool exact_tail = true)
        : max_level_(max_level), exact_tail_(exact_tail) {
        if (max_level < -1) throw geometry_error("max_level must be >= -1");
        levels_.resize(static_cast<std::size_t>(max_level + 2));
        for (int j = -1; j <= max_level; ++j)
            levels_[slot(j)].assign(level_size(j), 0.0);
    }

    int max_level() const { return max_level_; }
    bool exact_tail() const { return exact_tail_; }
    void set_exact_tail(bool v) { exact_tail_ = v; }

    // Total stored coordinate count, 2^{max_level+1}.
    std::size_t size() const { return std::size_t{1} << (max_level_ + 1); }

    double at(DyadicIndex idx) const {
        if (!valid_index(idx))
            throw geometry_error("invalid index (" + std::to_string(idx.j) + "," +
                                 std::to_string(idx.k) + ")");
        if (idx.j > max_level_) return 0.0;
        return levels_[slot(idx.j)][static_cast<std::size_t>(idx.k)];
    }

    void set(DyadicIndex idx, double v) {
        if (!valid_index(idx) || idx.j > max_level_)
            throw geometry_error("index out of stored range");
        levels_[slot(idx.j)][static_cast<std::size_t>(idx.k)] = v;
    }

    std::span<const double> level(int j) const {
        if (j < -1 || j > max_level_) throw geometry_error("level out of stored range");
        return levels_[slot(j)];
    }

    std::span<double> level_mut(int j) {
        if (j < -1 || j > max_level_) throw geometry_error("level out of stored range");
        return levels_[slot(j)];
    }

private:
    static std::size_t slot(int j) { return static_cast<std::size_t>(j + 1); }

    int max_level_;
    bool exact_tail_;
    std::vector<std::vector<double>> levels_;
};

// Per-level coefficient subsets m_j over levels -1..top_level. Each level
// holds a sorted list of kept positions k.
class Model {
public:
    Model() : Model(0) {}

    explicit Model(int top_level) : top_level_(top_level) {
        if (top_level < 0) throw geometry_error("model top level must be >= 0");
        kept_.resize(static_cast<std::size_t>(top_level + 2));
    }

    static Model empty(int top_level) { return Model(top_level); }

    static Model full(int top_level) {
        Model m(top_level);
        for (int j = -1; j <= top_level; ++j) {
            std::vector<int> ks(level_size(j));
            for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = static_cast<int>(k);
            m.kept_[slot(j)] = std::move(ks);
        }
        return m;
    }

    int top_level() const { return top_level_; }

    const std::vector<int>& level(int j) const {
        check_level(j);
        return kept_[slot(j)];
    }

    // Takes ownership; sorts and validates the positions.
    void set_level(int j, std::vector<int> ks);

    bool contains(DyadicIndex idx) const;

    std::size_t total_size() const {
        std::size_t n = 0;
        for (const auto& ks : kept_) n += ks.size();
        return n;
    }

    std::vector<int> per_level_cardinalities() const {
        std::vector<int> out;
        out.reserve(kept_.size());
        for (const auto& ks : kept_) out.push_back(static_cast<int>(ks.size()));
        return out;
    }

    friend bool operator==(const Model&, const Model&) = default;

    // Lexicographic order on (level, position) streams; used for tie-breaking.
    static bool lex_less(const Model& a, const Model& b);

private:
    static std::size_t slot(int j) { return static_cast<std::size_t>(j + 1); }
    void check_level(int j) const {
        if (j < -1 || j > top_level_) throw geometry_error("model level out of range");
    }

    int top_level_;
    std::vector<std::vector<int>> kept_;
};

// Realized observations over the first N = 2^{J+1} coordinates.
struct ObservationSet {
    SignalSequence y;   // stored through level J
    double epsilon = 0; // noise level
    int top_level = 0;  // J
    std::size_t count = 0; // N

    std::span<const double> level(int j) const { return y.level(j); }
};

// -- weighted lp machinery ------------------------------------------------

// Sum w_lambda |v_lambda|^p over all stored coordinates.
double weighted_lp_pow(const SignalSequence& v, const WeightScheme& w, double p);

// (sum w |v|^p)^{1/p}; p >= 1 required.
double weighted_lp_norm(const SignalSequence& v, const WeightScheme& w, double p);

// B_p(m): weighted p-th power mass of theta outside m (over stored levels).
double bias_term(const SignalSequence& theta, const Model& m, const WeightScheme& w, double p);

// Realized V_p(m) = sum_{lambda in m} w |y - theta|^p, from the residuals.
double variance_term(const ObservationSet& obs, const SignalSequence& theta, const Model& m,
                     const WeightScheme& w, double p);

// || thetahat^{(m)} - theta ||_p^p computed directly from the definition,
// keeping y on m and zero elsewhere. Reference route for the B+V identity.
double direct_model_risk(const ObservationSet& obs, const SignalSequence& theta, const Model& m,
                         const WeightScheme& w, double p);

} // namespace pco
