// Algebraic reference for the optimal symmetric 1->2 qubit cloner: the
// projector onto the symmetric subspace of qubits 1,2, the cloned state and
// the clone / anti-clone fidelities. No dynamics is involved here.

#pragma once

#include <cstdint>
#include <vector>

#include "clonesim/qstate.hpp"
#include "clonesim/rng.hpp"

namespace clonesim {

// Normalized single-qubit state a|0> + b|1>.
class InputQubit {
 public:
    InputQubit() = default;
    // Throws InvalidParameter unless |a|^2 + |b|^2 = 1 to 1e-12.
    InputQubit(cplx a, cplx b);

    cplx a() const { return a_; }
    cplx b() const { return b_; }

    // a = cos(t/2), b = e^{i phi} sin(t/2) with cos t uniform in [-1,1] and
    // phi uniform in [0, 2pi).
    static InputQubit haar(Rng& rng);

 private:
    cplx a_{1.0, 0.0};
    cplx b_{0.0, 0.0};
};

namespace qubits {
inline constexpr const char* kInput = "q1";
inline constexpr const char* kAncilla = "q2";
inline constexpr const char* kAnti = "q3";
}  // namespace qubits

Subsystem qubit_subsystem(std::string id);
Space qubit_space(const std::vector<std::string>& ids);

// |psi> = a|0> + b|1> on qubit `id`.
StateVector qubit_state(const InputQubit& q, const std::string& id);
// b*|0> - a*|1>, orthogonal to qubit_state(q).
StateVector orthogonal_qubit_state(const InputQubit& q, const std::string& id);

// 2^{-1/2}(|01> - |10>) on the two given qubits (defaults: q2,q3).
StateVector singlet(const std::string& first = qubits::kAncilla, const std::string& second = qubits::kAnti);

// (I_12 - |psi-><psi-|_12) (x) I_3 on q1,q2,q3.
LinearOperator projector_p123();

struct CloneOutput {
    StateVector state;  // normalized, over q1,q2,q3
    double branch_prob = 0.0;
    DensityMatrix rho_clone1;
    DensityMatrix rho_clone2;
    DensityMatrix rho_anti;
};

CloneOutput clone(const InputQubit& q);
double clone_fidelity(const InputQubit& q);
double unot_fidelity(const InputQubit& q);

}  // namespace clonesim
