// Atom-cavity dynamics for the two nodes.
//
// Alice: atom levels {g_L, g_R, g_0, e_L, e_R}; the laser drives g_L->e_L and
// g_R->e_R, the cavity's L/R modes couple e_L->g_0 and e_R->g_0.
// Bob: atom levels {g0', e_0, g_L, g_R}; the laser drives g0'->e_0, the R
// mode couples e_0->g_L and the L mode couples e_0->g_R.
//
// Cavity modes are truncated at one photon. Units are dimensionless with the
// vacuum Rabi coupling g = 1 as the reference scale.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clonesim/qstate.hpp"

namespace clonesim {

enum class Side { Alice, Bob };

struct CouplingModulation {
    double epsilon = 0.0;
    double nu = 0.0;

    friend bool operator==(const CouplingModulation&, const CouplingModulation&) = default;
};

struct SystemParams {
    Side side = Side::Alice;
    double delta = 0.0;
    double gamma = 0.1;
    double g = 1.0;
    double kappa = 1.0;
    CouplingModulation modulation{};

    // g(t) = g (1 + epsilon sin(nu t)).
    double coupling(double t) const { return g * (1.0 + modulation.epsilon * std::sin(modulation.nu * t)); }
    void validate() const;

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

SystemParams default_params(Side side);

// Returns `p` with a time-dependent coupling; throws InvalidParameter unless
// 0 <= epsilon < 1.
SystemParams coupling_modulation(const SystemParams& p, double epsilon, double nu);

enum class RampShape { SinSquared, Tanh, Linear };

const char* to_string(RampShape shape);
RampShape ramp_shape_from_string(const std::string& name);

// Rabi envelope: rises from 0 to omega_max over [0, t_ramp], then holds.
// t_ramp = t_total * (1 - hold_fraction).
struct PulseSchedule {
    RampShape shape = RampShape::SinSquared;
    double omega_max = 20.0;
    double t_total = 200.0;
    double hold_fraction = 0.2;

    double ramp_end() const { return t_total * (1.0 - hold_fraction); }
    double omega(double t) const;
    void validate() const;

    friend bool operator==(const PulseSchedule&, const PulseSchedule&) = default;
};

// tan(theta) = Omega/g for Alice and Omega/(sqrt(2) g) for Bob.
double mixing_angle(Side side, double g, double omega);
double mixing_angle(const SystemParams& p, const PulseSchedule& pulse, double t);

// Subsystem ids.
namespace ids {
inline constexpr const char* kAtomA = "atomA";
inline constexpr const char* kAtomB = "atomB";
std::string cavity_mode(Side side, char pol);  // "cavA.L", "cavB.R", ...
}  // namespace ids

Space node_space(Side side, int max_photons = 1);
// Initial state (a|g_L> + b|g_R>)|0,0> for Alice.
StateVector alice_initial(cplx a, cplx b);
// |g0'>|0,0> for Bob.
StateVector bob_initial();

// Building blocks of the node Hamiltonians. `excited` is the projector on
// the excited manifold, `drive` the laser coupling plus h.c. at unit Rabi
// frequency, `cavity` the atom-mode coupling plus h.c. at unit g, `photons`
// the total photon number.
struct HamiltonianTerms {
    LinearOperator excited;
    LinearOperator drive;
    LinearOperator cavity;
    LinearOperator photons;
};
HamiltonianTerms hamiltonian_terms(Side side, int max_photons = 1);

// -(delta + i gamma/2) P_e + Omega(t) drive + g(t) cavity.
LinearOperator hamiltonian_alice(double t, const SystemParams& p, const PulseSchedule& pulse);
LinearOperator hamiltonian_bob(double t, const SystemParams& p, const PulseSchedule& pulse);
// Node Hamiltonian with the cavity leakage -i kappa/2 n added.
LinearOperator effective_hamiltonian(double t, const SystemParams& p, const PulseSchedule& pulse);

// Alice: D1 = cos th |g_L;0,0> - sin th |g_0;1,0>, D2 = cos th |g_R;0,0> - sin th |g_0;0,1>.
std::pair<StateVector, StateVector> alice_dark_states(double theta);
// Bob: cos th |g0';0,0> - (sin th/sqrt 2)(|g_L;0,1> + |g_R;1,0>).
StateVector bob_dark_state(double theta);
std::vector<StateVector> dark_states(const SystemParams& p, const PulseSchedule& pulse, double t);

// Dark-state image of `initial` at mixing angle theta, i.e. the adiabatic
// following target: cos th (a|g_L> + b|g_R>)|0,0> - sin th |g_0>(a|1,0> + b|0,1>)
// for Alice, bob_dark_state(theta) for Bob.
StateVector adiabatic_target(const StateVector& initial, Side side, double theta);

struct PulseShape {
    std::vector<double> t;
    std::vector<cplx> f;
};

// One photon-emission channel: the photon leaves through `mode` and the rest
// of the node is left in `residual` (a label of the node space with that
// mode emptied).
struct EmissionChannel {
    std::string mode;
    BasisLabel residual;
    std::vector<cplx> amplitude;  // sqrt(kappa) * cavity amplitude on the grid
};

struct DynamicsReport {
    Side side = Side::Alice;
    StateVector final_state;
    double emission_prob = 0.0;
    double spont_loss = 0.0;
    double residual_norm2 = 0.0;
    double excited_pop_max = 0.0;
    bool adiabaticity_warning = false;
    double step = 0.0;
    std::size_t steps = 0;
    PulseShape pulse_shape;
    std::vector<EmissionChannel> channels;
};

inline constexpr double kExcitedPopulationWarning = 1e-2;

// Integrates i d|psi>/dt = (H(t) - i kappa/2 n)|psi> over [0, pulse.t_total]
// with fixed-step RK4; the output grid has spacing dt.
DynamicsReport evolve(const StateVector& initial, const SystemParams& p, const PulseSchedule& pulse, double dt);

// f(t) = sqrt(kappa) sin th(t) exp(-kappa/2 int_0^t sin^2 th).
PulseShape pulse_shape_analytic(const SystemParams& p, const PulseSchedule& pulse, const std::vector<double>& grid);
// kappa * int_0^t sin^2 th(tau) dtau, by adaptive quadrature.
double emission_exponent(const SystemParams& p, const PulseSchedule& pulse, double t);

// int |f|^2 dt (Simpson on uniform grids, trapezoid otherwise).
double pulse_norm2(const PulseShape& f);
// |int fA* fB|^2 / (int|fA|^2 int|fB|^2). Grids must coincide.
double pulse_overlap(const PulseShape& fa, const PulseShape& fb);

// Quadrature weights used by pulse_norm2 / pulse_overlap.
std::vector<double> quadrature_weights(const std::vector<double>& grid);

// Emitted photon projected onto the pulse's temporal mode, tensored with the
// node's residual atom: a state over {atom, <path>.L, <path>.R}. Normalized.
StateVector emitted_photon_state(const DynamicsReport& report, const std::string& path);

std::string pulse_csv(const PulseShape& f);

}  // namespace clonesim
