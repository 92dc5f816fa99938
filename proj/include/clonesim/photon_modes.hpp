#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "clonesim/qstate.hpp"

namespace clonesim {

// Free-space photon modes are named "ph<path>.<pol>", e.g. "phA.H", "ph3.V".
inline std::string path_mode_id(std::string_view path, std::string_view pol) {
    return "ph" + std::string(path) + "." + std::string(pol);
}

inline Subsystem occupation_subsystem(std::string id, int max_photons) {
    Subsystem s{std::move(id), {}};
    for (int n = 0; n <= max_photons; ++n) s.levels.push_back(std::to_string(n));
    return s;
}

// The two polarization modes of one path.
inline std::vector<Subsystem> path_subsystems(std::string_view path, std::string_view pol1, std::string_view pol2,
                                              int max_photons = 1) {
    return {occupation_subsystem(path_mode_id(path, pol1), max_photons),
            occupation_subsystem(path_mode_id(path, pol2), max_photons)};
}

}  // namespace clonesim
