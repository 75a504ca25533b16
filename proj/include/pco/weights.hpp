#pragma once

#include <cmath>

namespace pco {

enum class WeightKind { Constant, Dyadic };

// Constant: w = 1 everywhere. Dyadic: w depends on the level only,
// omega_j = 2^{j(p/2 - 1)}, which collapses to 1 for p = 2.
struct WeightScheme {
    WeightKind kind = WeightKind::Constant;
    double p = 2.0; // only read in Dyadic mode

    double level_weight(int j) const {
        if (kind == WeightKind::Constant) return 1.0;
        return std::exp2(static_cast<double>(j) * (p / 2.0 - 1.0));
    }

    static WeightScheme constant() { return {WeightKind::Constant, 2.0}; }
    static WeightScheme dyadic(double p) { return {WeightKind::Dyadic, p}; }
};

} // namespace pco
