#pragma once

#include <stdexcept>
#include <string>

namespace pco {

// Configuration problems (bad keys, bad strategy tags, parameters outside
// their documented domain). The CLI maps these to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Index-space geometry violations (N not a power of two, level out of range).
class geometry_error : public std::runtime_error {
public:
    explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

// A model refers to coordinates outside the observed index set, or is not
// admissible for the strategy it is evaluated under.
class invalid_model_error : public std::runtime_error {
public:
    explicit invalid_model_error(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive enumeration refused because the candidate count exceeds the guard.
class size_guard_error : public std::runtime_error {
public:
    explicit size_guard_error(const std::string& what) : std::runtime_error(what) {}
};

// Noise-moment constants requested for a (distribution, p) pair that has
// neither closed-form values nor a table entry.
class uncalibrated_error : public std::runtime_error {
public:
    explicit uncalibrated_error(const std::string& what) : std::runtime_error(what) {}
};

// The calibration lattice search found no feasible point.
class calibration_error : public std::runtime_error {
public:
    explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pco
