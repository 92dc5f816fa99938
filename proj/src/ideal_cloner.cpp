#include "clonesim/ideal_cloner.hpp"

#include <cmath>
#include <numbers>

#include "clonesim/errors.hpp"

namespace clonesim {

InputQubit::InputQubit(cplx a, cplx b) : a_(a), b_(b) {
    const double n = std::norm(a) + std::norm(b);
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12)
        throw InvalidParameter("input qubit is not normalized (|a|^2+|b|^2 = " + std::to_string(n) + ")");
}

InputQubit InputQubit::haar(Rng& rng) {
    const double cos_t = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double c = std::sqrt((1.0 + cos_t) / 2.0);
    const double s = std::sqrt((1.0 - cos_t) / 2.0);
    // Renormalize away the last ulp so the constructor's check always holds.
    const double n = std::hypot(c, s);
    return InputQubit(cplx{c / n, 0.0}, std::polar(s / n, phi));
}

Subsystem qubit_subsystem(std::string id) { return Subsystem{std::move(id), {"0", "1"}}; }

Space qubit_space(const std::vector<std::string>& ids) {
    std::vector<Subsystem> subs;
    for (const auto& id : ids) subs.push_back(qubit_subsystem(id));
    return Space(std::move(subs));
}

StateVector qubit_state(const InputQubit& q, const std::string& id) {
    const Space s = qubit_space({id});
    return StateVector(s, {{{0}, q.a()}, {{1}, q.b()}});
}

StateVector orthogonal_qubit_state(const InputQubit& q, const std::string& id) {
    const Space s = qubit_space({id});
    return StateVector(s, {{{0}, std::conj(q.b())}, {{1}, -std::conj(q.a())}});
}

StateVector singlet(const std::string& first, const std::string& second) {
    const Space s = qubit_space({first, second});
    const double r = 1.0 / std::sqrt(2.0);
    return StateVector(s, {{s.label({{first, "0"}, {second, "1"}}), r},
                           {s.label({{first, "1"}, {second, "0"}}), -r}});
}

LinearOperator projector_p123() {
    const Space s12 = qubit_space({qubits::kInput, qubits::kAncilla});
    const StateVector psi_minus = singlet(qubits::kInput, qubits::kAncilla);
    const LinearOperator p12 = LinearOperator::identity(s12) - LinearOperator::outer(psi_minus, psi_minus);
    return extend(p12, qubit_space({qubits::kInput, qubits::kAncilla, qubits::kAnti}));
}

CloneOutput clone(const InputQubit& q) {
    const StateVector pi = tensor(qubit_state(q, qubits::kInput), singlet());
    const StateVector projected = apply(projector_p123(), pi);
    Normalized n = normalize(projected);
    CloneOutput out;
    out.rho_clone1 = partial_trace(n.state, {qubits::kInput});
    out.rho_clone2 = partial_trace(n.state, {qubits::kAncilla});
    out.rho_anti = partial_trace(n.state, {qubits::kAnti});
    out.state = std::move(n.state);
    out.branch_prob = n.probability;
    return out;
}

double clone_fidelity(const InputQubit& q) {
    return fidelity_pure(clone(q).rho_clone1, qubit_state(q, qubits::kInput));
}

double unot_fidelity(const InputQubit& q) {
    return fidelity_pure(clone(q).rho_anti, orthogonal_qubit_state(q, qubits::kAnti));
}

}  // namespace clonesim
