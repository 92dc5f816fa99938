#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "clonesim/adiabatic.hpp"
#include "clonesim/errors.hpp"
#include "clonesim/ideal_cloner.hpp"
#include "clonesim/qstate.hpp"
#include "clonesim/rng.hpp"

using namespace clonesim;

namespace {

Space qubits2(const char* x, const char* y) { return qubit_space({x, y}); }

StateVector random_state(const Space& sp, Rng& rng, double scale) {
    std::map<BasisLabel, cplx> amps;
    for (const auto& l : enumerate_basis(sp)) amps[l] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    StateVector s(sp, amps);
    return cplx(scale / s.norm()) * s;
}

}  // namespace

TEST(Space, LabelsAreCanonical) {
    const Space sp({{"b", {"0", "1"}}, {"a", {"x", "y", "z"}}});
    EXPECT_EQ(sp[0].id, "a");
    EXPECT_EQ(sp.label({{"a", "z"}, {"b", "1"}}), sp.label({{"b", "1"}, {"a", "z"}}));
    EXPECT_EQ(sp.dimension(), 6u);
    EXPECT_THROW(sp.label({{"a", "w"}, {"b", "1"}}), InvalidParameter);
    EXPECT_THROW(sp.label({{"c", "0"}}), UnknownSubsystem);
}

TEST(StateVector, RejectsForeignLabels) {
    const Space sp = qubit_space({"q"});
    EXPECT_THROW(StateVector(sp, {{BasisLabel{2}, 1.0}}), InvalidParameter);
}

TEST(Tensor, ProductOfUnitKets) {
    const Space atom = node_space(Side::Alice, 1).restrict_to({ids::kAtomA});
    const Space cav = node_space(Side::Alice, 1).restrict_to({ids::cavity_mode(Side::Alice, 'L'),
                                                              ids::cavity_mode(Side::Alice, 'R')});
    const StateVector g = StateVector::basis(atom, {{ids::kAtomA, "g_L"}});
    const StateVector vac = StateVector::basis(
        cav, {{ids::cavity_mode(Side::Alice, 'L'), "0"}, {ids::cavity_mode(Side::Alice, 'R'), "0"}});
    const StateVector t = tensor(g, vac);
    ASSERT_EQ(t.amplitudes().size(), 1u);
    EXPECT_EQ(t.amplitudes().begin()->second, cplx(1.0));
}

TEST(Tensor, InitialAliceState) {
    const cplx a(0.6, 0.0), b(0.0, 0.8);
    const Space full = node_space(Side::Alice, 1);
    const Space atom = full.restrict_to({ids::kAtomA});
    const Space cav = full.restrict_to({ids::cavity_mode(Side::Alice, 'L'), ids::cavity_mode(Side::Alice, 'R')});
    const StateVector atom_state(atom, {{atom.label({{ids::kAtomA, "g_L"}}), a}, {atom.label({{ids::kAtomA, "g_R"}}), b}});
    const StateVector vac = StateVector::basis(
        cav, {{ids::cavity_mode(Side::Alice, 'L'), "0"}, {ids::cavity_mode(Side::Alice, 'R'), "0"}});
    EXPECT_NEAR(overlap_modulus(tensor(atom_state, vac), alice_initial(a, b)), 1.0, 1e-15);
}

TEST(Tensor, OverlapThrows) {
    const StateVector x = StateVector::basis(qubit_space({"q"}), {{"q", "0"}});
    EXPECT_THROW(tensor(x, x), CompositionError);
}

TEST(Tensor, NormIsMultiplicative) {
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const double sx = rng.uniform(0.1, 1.0), sy = rng.uniform(0.1, 1.0);
        const StateVector x = random_state(qubits2("a", "b"), rng, sx);
        const StateVector y = random_state(qubit_space({"c"}), rng, sy);
        EXPECT_NEAR(tensor(x, y).norm(), sx * sy, 1e-12);
    }
}

TEST(Inner, SingletComponent) {
    const StateVector s = singlet("x", "y");
    const StateVector k01 = StateVector::basis(s.space(), {{"x", "0"}, {"y", "1"}});
    EXPECT_NEAR(std::abs(inner(s, k01) - cplx(1.0 / std::sqrt(2.0))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner(s, s) - 1.0), 0.0, 1e-15);
    EXPECT_THROW(inner(s, StateVector::basis(qubit_space({"z"}), {{"z", "0"}})), SpaceMismatch);
}

TEST(Apply, IdentityAndUnknownSubsystem) {
    Rng rng(3);
    const StateVector s = random_state(qubits2("a", "b"), rng, 1.0);
    const StateVector t = apply(LinearOperator::identity(s.space()), s);
    EXPECT_NEAR((t - s).norm(), 0.0, 1e-15);
    const LinearOperator foreign = LinearOperator::identity(qubit_space({"zz"}));
    EXPECT_THROW(apply(foreign, s), UnknownSubsystem);
}

TEST(Apply, ActsOnlyOnDeclaredSubsystem) {
    const Space sp = qubits2("a", "b");
    const LinearOperator flip = LinearOperator::transition(qubit_subsystem("a"), "1", "0");
    const StateVector s = apply(flip, StateVector::basis(sp, {{"a", "0"}, {"b", "1"}}));
    EXPECT_EQ(s.amplitude({{"a", "1"}, {"b", "1"}}), cplx(1.0));
}

TEST(Operators, AdjointMatchesInnerProduct) {
    Rng rng(11);
    const Space sp = qubits2("a", "b");
    LinearOperator h = cplx(0.3, 0.2) * LinearOperator::transition(qubit_subsystem("a"), "1", "0");
    h = h + h.adjoint();
    for (int i = 0; i < 10; ++i) {
        const StateVector x = random_state(sp, rng, 1.0), y = random_state(sp, rng, 1.0);
        EXPECT_NEAR(std::abs(inner(x, apply(h, y)) - inner(apply(h, x), y)), 0.0, 1e-12);
    }
}

TEST(Operators, LadderOperatorsOnTruncatedMode) {
    const Subsystem mode{"m", {"0", "1", "2"}};
    const Space sp({mode});
    const StateVector one = StateVector::basis(sp, {{"m", "1"}});
    const StateVector up = apply(LinearOperator::creation(mode), one);
    EXPECT_NEAR(std::abs(up.amplitude({{"m", "2"}}) - std::sqrt(2.0)), 0.0, 1e-15);
    const StateVector n = apply(LinearOperator::number(mode), up);
    EXPECT_NEAR(std::abs(n.amplitude({{"m", "2"}}) - 2.0 * std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(PartialTrace, NothingTracedGivesProjector) {
    Rng rng(5);
    const StateVector s = random_state(qubits2("a", "b"), rng, 1.0);
    const DensityMatrix rho = partial_trace(s, {"a", "b"});
    EXPECT_NEAR(std::abs(rho.trace() - 1.0), 0.0, 1e-14);
    EXPECT_TRUE(rho.is_hermitian());
    const auto basis = enumerate_basis(rho.space());
    const Eigen::MatrixXcd m = to_dense(rho, basis);
    EXPECT_NEAR((m * m - m).norm(), 0.0, 1e-13);
}

TEST(PartialTrace, EmptyKeepThrows) {
    const StateVector s = singlet("a", "b");
    EXPECT_THROW(partial_trace(s, {}), InvalidParameter);
}

TEST(PartialTrace, SingletMarginalIsMixed) {
    const DensityMatrix rho = partial_trace(singlet("a", "b"), {"a"});
    EXPECT_NEAR(fidelity_pure(rho, StateVector::basis(rho.space(), {{"a", "0"}})), 0.5, 1e-15);
    EXPECT_NEAR(rho.min_eigenvalue(), 0.5, 1e-12);
}

TEST(PartialTrace, DensityMatrixAgreesWithState) {
    Rng rng(9);
    const StateVector s = random_state(qubit_space({"a", "b", "c"}), rng, 1.0);
    const DensityMatrix direct = partial_trace(s, {"b"});
    const DensityMatrix staged = partial_trace(partial_trace(s, {"a", "b"}), {"b"});
    for (const auto& [rc, v] : direct.entries()) EXPECT_NEAR(std::abs(v - staged.entry(rc.first, rc.second)), 0.0, 1e-14);
}

TEST(Fidelity, Examples) {
    const Space sp = qubit_space({"p"});
    const StateVector h = StateVector::basis(sp, {{"p", "0"}});
    const StateVector v = StateVector::basis(sp, {{"p", "1"}});
    EXPECT_NEAR(fidelity_pure(DensityMatrix::from_pure(h), h), 1.0, 1e-15);
    const DensityMatrix mix = (5.0 / 6.0) * DensityMatrix::from_pure(h) + (1.0 / 6.0) * DensityMatrix::from_pure(v);
    EXPECT_NEAR(fidelity_pure(mix, h), 5.0 / 6.0, 1e-15);
    const DensityMatrix flat = 0.5 * DensityMatrix::from_pure(h) + 0.5 * DensityMatrix::from_pure(v);
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        EXPECT_NEAR(fidelity_pure(flat, qubit_state(q, "p")), 0.5, 1e-14);
    }
    EXPECT_THROW(fidelity_pure(mix, cplx(2.0) * h), InvalidParameter);
}

TEST(Normalize, DegenerateBranch) {
    const Space sp = qubit_space({"p"});
    const StateVector tiny = cplx(1e-9) * StateVector::basis(sp, {{"p", "0"}});
    EXPECT_THROW(normalize(tiny), DegenerateBranch);
    const Normalized n = normalize(cplx(0.5) * StateVector::basis(sp, {{"p", "1"}}));
    EXPECT_NEAR(n.probability, 0.25, 1e-15);
    EXPECT_NEAR(n.state.norm(), 1.0, 1e-15);
}

TEST(Helpers, ProjectOutAndRename) {
    const StateVector s = singlet("a", "b");
    const StateVector p = project_out(s, "a", "0");
    EXPECT_EQ(p.space().size(), 1u);
    EXPECT_NEAR(std::abs(p.amplitude({{"b", "1"}}) - cplx(1.0 / std::sqrt(2.0))), 0.0, 1e-15);
    const StateVector r = rename_subsystems(s, {{"a", "z"}});
    EXPECT_TRUE(r.space().contains("z"));
    EXPECT_NEAR(std::abs(r.amplitude({{"b", "0"}, {"z", "1"}}) + cplx(1.0 / std::sqrt(2.0))), 0.0, 1e-15);
}
