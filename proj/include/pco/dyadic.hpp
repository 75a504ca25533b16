#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>

#include "pco/errors.hpp"

namespace pco {

// Index space: level j = -1 holds one coordinate, level j >= 0 holds 2^j
// coordinates 0 <= k < 2^j. Flat (level-major) enumeration puts (-1,0) at
// slot 0 and level j at slots [2^j, 2^{j+1}), so the first N = 2^{J+1}
// slots cover levels -1..J exactly.
struct DyadicIndex {
    int j = -1;
    int k = 0;

    friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
};

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline std::size_t level_size(int j) {
    if (j < -1) throw geometry_error("level " + std::to_string(j) + " below -1");
    return j == -1 ? 1 : (std::size_t{1} << j);
}

inline bool valid_index(DyadicIndex idx) {
    if (idx.j == -1) return idx.k == 0;
    return idx.j >= 0 && idx.k >= 0 && static_cast<std::size_t>(idx.k) < level_size(idx.j);
}

inline std::size_t flat_slot(DyadicIndex idx) {
    if (!valid_index(idx))
        throw geometry_error("invalid dyadic index (" + std::to_string(idx.j) + "," +
                             std::to_string(idx.k) + ")");
    return idx.j == -1 ? 0 : (std::size_t{1} << idx.j) + static_cast<std::size_t>(idx.k);
}

inline DyadicIndex index_at_slot(std::size_t slot) {
    if (slot == 0) return {-1, 0};
    const int j = std::bit_width(slot) - 1;
    return {j, static_cast<int>(slot - (std::size_t{1} << j))};
}

// N = 2^{J+1} -> J. Rejects anything that does not cut between levels.
inline int top_level_of(std::size_t N) {
    if (N < 2 || !is_power_of_two(N))
        throw geometry_error("coordinate count " + std::to_string(N) +
                             " is not a power of two >= 2");
    return std::bit_width(N) - 2;
}

inline std::size_t coordinate_count(int top_level) {
    if (top_level < 0) throw geometry_error("top level must be >= 0");
    return std::size_t{1} << (top_level + 1);
}

} // namespace pco
