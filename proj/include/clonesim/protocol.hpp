// End-to-end cloning protocol: prepare both nodes, emit, interfere,
// post-select on a two-fold coincidence and score the heralded state.
//
// Basis encoding used throughout:
//   logical |0>  <->  Alice g_L  <->  photon H  <->  Bob g_L
//   logical |1>  <->  Alice g_R  <->  photon V  <->  Bob g_R

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clonesim/adiabatic.hpp"
#include "clonesim/ideal_cloner.hpp"
#include "clonesim/linear_optics.hpp"
#include "clonesim/qstate.hpp"

namespace clonesim {

enum class Mode { Analytic, Dynamic };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& name);

struct NodeConfig {
    SystemParams params;
    PulseSchedule pulse;
};

struct DetectorParams {
    double eta = 1.0;
    double dark_rate = 0.0;
    double window = 1.0;
};

struct ProtocolConfig {
    InputQubit input;
    NodeConfig alice;
    NodeConfig bob;
    Mode mode = Mode::Analytic;
    DetectorParams detector;
    std::uint64_t seed = 20240601;
    double dt = 0.1;
    double emission_floor = 0.5;
    std::size_t mc_trials = 100000;

    void validate() const;
};

// Defaults: g = 1, kappa = 1, gamma = 0.1, delta = 0, Omega_max = 20 for
// Alice and 20 sqrt(2) for Bob (so both mixing angles follow the same
// curve), t_total = 200, sin^2 ramp with a 20% hold.
ProtocolConfig default_config();

// Omega_B(t) = sqrt(2) Omega_A(t), which makes theta_B(t) = theta_A(t) for
// equal couplings and therefore identical emitted pulse shapes.
PulseSchedule matched_bob_pulse(const PulseSchedule& alice);

struct DetectorStats {
    double p_dark = 0.0;              // per detector, per coincidence window
    double false_coincidences = 0.0;  // closed-form false-herald probability
    double false_fraction = 0.0;      // false heralds / all heralds
    std::size_t trials = 0;
    double p_detected_mc = 0.0;
    double false_fraction_mc = 0.0;
    double false_fraction_mc_sigma = 0.0;
};

struct CloneReport {
    Mode mode = Mode::Analytic;
    InputQubit input;
    // Heralded state of photons 3,4 and atom B from the interfering branch.
    std::optional<StateVector> post_state;
    // Heralded state including partial distinguishability and false heralds.
    DensityMatrix post_rho;
    double clone_fidelity_1 = 0.0;
    double clone_fidelity_2 = 0.0;
    double telenot_fidelity = 0.0;
    double p_symmetric = 0.0;
    double p_operational = 0.0;
    double p_detected = 0.0;
    double overlap_visibility = 1.0;
    optics::DetectionBreakdown detection;
    optics::PhotonConfigs configs;
    DetectorParams detector;
    DetectorStats detector_stats;
    std::optional<DynamicsReport> alice_dynamics;
    std::optional<DynamicsReport> bob_dynamics;
    std::vector<std::string> warnings;
};

// Photonic + atomic state ahead of the beam splitter in the perfect
// adiabatic limit: |g_0>_A (a|H>_A + b|V>_A)(|g_R>|H>_B - |g_L>|V>_B)/sqrt2.
StateVector pre_interference_state(const InputQubit& q);

CloneReport run_analytic(const ProtocolConfig& cfg);
CloneReport run_dynamic(const ProtocolConfig& cfg);

// Applies detector efficiency and dark counts. The closed form is
// cross-checked by `trials` seeded Monte Carlo samples.
CloneReport detector_model(const CloneReport& report, double eta, double dark_rate, double window,
                           std::uint64_t seed, std::size_t trials = 100000);

// Fidelity of atom B's heralded state with b*|g_L> - a*|g_R>.
double telenot_check(const CloneReport& report, const InputQubit& q);

// run_analytic or run_dynamic, followed by detector_model.
CloneReport run(const ProtocolConfig& cfg);

// Parameters accepted by apply_sweep_param / run_sweep.
const std::vector<std::string>& sweepable_params();
ProtocolConfig apply_sweep_param(const ProtocolConfig& base, const std::string& param, double value);

struct SweepPoint {
    std::size_t index;
    double value;
    CloneReport report;
};

// Runs every point concurrently; results are ordered by index.
std::vector<SweepPoint> run_sweep(const ProtocolConfig& base, const std::string& param,
                                  const std::vector<double>& values);

}  // namespace clonesim
