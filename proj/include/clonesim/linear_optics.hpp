// Photonic post-processing: wave plates, the 50:50 beam splitter and the
// coincidence-heralded projection onto the symmetric two-photon subspace.
//
// Photons live in occupation modes "ph<path>.<pol>" (see photon_modes.hpp).
// A dual-rail photonic qubit is one photon shared between the two
// polarization modes of a path, with H <-> |0> and V <-> |1>.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "clonesim/qstate.hpp"

namespace clonesim::optics {

// Circular to linear: (n_L, n_R) = (1,0) -> H, (0,1) -> V, vacuum -> vacuum.
// Throws InvalidParameter on a doubly occupied path.
StateVector qwp_relabel(const StateVector& s, std::string_view path);

// 0-degree half-wave plate: H -> H, V -> -V.
StateVector hwp0(const StateVector& s, std::string_view path);

// 50:50 beam splitter, polarization preserving, real symmetric convention:
//   a+_{in1,p} -> (a+_{out1,p} + a+_{out2,p})/sqrt2
//   a+_{in2,p} -> (a+_{out1,p} - a+_{out2,p})/sqrt2
// Both input paths must carry H and V modes. Output modes get an occupation
// alphabet large enough for full bunching.
StateVector beamsplitter(const StateVector& s, std::string_view in1, std::string_view in2, std::string_view out1,
                         std::string_view out2);

// Adds the vacuum H/V modes of `path` (occupation alphabet {0..max_photons}).
StateVector add_vacuum_path(const StateVector& s, std::string_view path, int max_photons = 1);

// I - |psi-><psi-| on the polarization qubits of two paths, as an operator
// on their four occupation modes ({0,1} alphabets).
LinearOperator symmetric_projector(std::string_view path1, std::string_view path2);

struct CoincidenceOutcome {
    bool heralded = false;
    StateVector projected_state;  // normalized when heralded
    double probability = 0.0;
    StateVector raw;  // unnormalized projection
};

// Projects the photonic qubits on paths (a, b) onto the symmetric subspace
// and relabels the paths to (out_a, out_b). Requires exactly one photon in
// each input path (stray amplitude < 1e-12).
CoincidenceOutcome symmetric_project(const StateVector& s, std::string_view path_a = "A",
                                     std::string_view path_b = "B", std::string_view out_a = "3",
                                     std::string_view out_b = "4", double floor = 1e-14);

// Photon numbers at the four detectors: D1 (path 3) and D2 (path 4) behind
// the beam splitter on output mode 2, D3 (path 5) and D4 (path 6) behind the
// one on output mode 1.
using DetectorCounts = std::array<int, 4>;
using PhotonConfigs = std::map<DetectorCounts, double>;

struct DetectionBreakdown {
    double p_symmetric = 0.0;     // <s|P_sym|s>
    double p_bunch_mode1 = 0.0;   // both photons leave the first splitter in mode 1
    double p_bunch_mode2 = 0.0;   // ... in mode 2
    double p_coinc_d1d2 = 0.0;    // one photon at D1 and one at D2
    double p_coinc_d3d4 = 0.0;    // one photon at D3 and one at D4
    double p_operational = 0.0;   // p_coinc_d1d2 + p_coinc_d3d4
    PhotonConfigs configs;
    std::optional<StateVector> heralded_d1d2;  // normalized state behind a D1&D2 herald
};

// Heralding probability the detailed bookkeeping is reported against.
inline constexpr double kQuotedSuccessProbability = 0.25;

// Full second-quantized propagation of the two photons on paths A, B
// through the detection stage, for indistinguishable photons.
DetectionBreakdown coincidence_probability_detailed(const StateVector& s);

// Detector statistics when the two photons are fully distinguishable
// (no two-photon interference).
PhotonConfigs distinguishable_configs();

bool is_coincidence(const DetectorCounts& c);

}  // namespace clonesim::optics
