#pragma once

#include <string>

#include "pco/errors.hpp"

namespace pco {

// Replicate loops ship in two builds: a serial reference and an OpenMP
// version. Both fill a per-replicate slot array that is reduced in index
// order, so outputs are bit-identical and the pair is testable against
// each other.
enum class Exec { Serial, Parallel };

inline Exec exec_from_name(const std::string& name) {
    if (name == "serial") return Exec::Serial;
    if (name == "parallel") return Exec::Parallel;
    throw config_error("unknown execution mode '" + name + "'");
}

inline std::string exec_name(Exec e) {
    return e == Exec::Serial ? "serial" : "parallel";
}

} // namespace pco
