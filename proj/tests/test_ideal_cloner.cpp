#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "clonesim/errors.hpp"
#include "clonesim/ideal_cloner.hpp"
#include "clonesim/rng.hpp"

using namespace clonesim;

namespace {

// Dense oracle on q1 (x) q2 (x) q3, index = 4*q1 + 2*q2 + q3.
Eigen::Matrix<cplx, 8, 8> dense_projector() {
    Eigen::Vector4cd psi_minus(0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0);
    const Eigen::Matrix4cd p12 = Eigen::Matrix4cd::Identity() - psi_minus * psi_minus.adjoint();
    Eigen::Matrix<cplx, 8, 8> p;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) p(2 * i + k, 2 * j + l) = k == l ? p12(i, j) : cplx(0.0);
    return p;
}

Eigen::Matrix<cplx, 8, 1> dense_input(const InputQubit& q) {
    Eigen::Matrix<cplx, 8, 1> v = Eigen::Matrix<cplx, 8, 1>::Zero();
    const double r = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < 2; ++x) {
        const cplx c = x == 0 ? q.a() : q.b();
        v(4 * x + 1) += c * r;
        v(4 * x + 2) -= c * r;
    }
    return v;
}

// Reduced density matrix of qubit `which` (0,1,2).
Eigen::Matrix2cd reduce(const Eigen::Matrix<cplx, 8, 1>& v, int which) {
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            const int shift = 2 - which;
            const int rest_i = i & ~(1 << shift), rest_j = j & ~(1 << shift);
            if (rest_i != rest_j) continue;
            rho((i >> shift) & 1, (j >> shift) & 1) += v(i) * std::conj(v(j));
        }
    return rho;
}

struct Oracle {
    double branch, f1, f2, f_not;
};

Oracle oracle(const InputQubit& q) {
    Eigen::Matrix<cplx, 8, 1> v = dense_projector() * dense_input(q);
    const double branch = v.squaredNorm();
    v /= std::sqrt(branch);
    const Eigen::Vector2cd psi(q.a(), q.b());
    const Eigen::Vector2cd perp(std::conj(q.b()), -std::conj(q.a()));
    return {branch, (psi.adjoint() * reduce(v, 0) * psi)(0).real(), (psi.adjoint() * reduce(v, 1) * psi)(0).real(),
            (perp.adjoint() * reduce(v, 2) * perp)(0).real()};
}

}  // namespace

TEST(Singlet, Amplitudes) {
    const StateVector s = singlet("x", "y");
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(s.amplitude({{"x", "0"}, {"y", "0"}}), cplx(0.0));
    EXPECT_NEAR(std::abs(s.amplitude({{"x", "0"}, {"y", "1"}}) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude({{"x", "1"}, {"y", "0"}}) + r), 0.0, 1e-15);
    EXPECT_EQ(s.amplitude({{"x", "1"}, {"y", "1"}}), cplx(0.0));
    const StateVector swapped = rename_subsystems(s, {{"x", "y"}, {"y", "x"}});
    EXPECT_NEAR((swapped + s).norm(), 0.0, 1e-15);
}

TEST(Projector, IdempotentWithRankSix) {
    const LinearOperator p = projector_p123();
    const auto basis = enumerate_basis(p.space());
    const Eigen::MatrixXcd m = to_dense(p, basis);
    EXPECT_NEAR((m * m - m).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 0.5 ? 1 : 0;
    EXPECT_EQ(rank, 6);
    EXPECT_NEAR((m - dense_projector()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Projector, SingletIsKernel) {
    for (const char* x : {"0", "1"}) {
        const StateVector s = tensor(singlet(qubits::kInput, qubits::kAncilla),
                                     StateVector::basis(qubit_space({qubits::kAnti}), {{qubits::kAnti, x}}));
        EXPECT_LT(apply(projector_p123(), s).norm(), 1e-15);
    }
}

TEST(Clone, BasisInput) {
    const CloneOutput out = clone(InputQubit(1.0, 0.0));
    EXPECT_NEAR(out.branch_prob, 0.75, 1e-15);
    const auto& rho = out.rho_clone1;
    EXPECT_NEAR(std::abs(rho.entry(rho.space().label({{qubits::kInput, "0"}}), rho.space().label({{qubits::kInput, "0"}})) -
                         5.0 / 6.0),
                0.0, 1e-15);
    EXPECT_NEAR(std::abs(rho.entry(rho.space().label({{qubits::kInput, "1"}}), rho.space().label({{qubits::kInput, "1"}})) -
                         1.0 / 6.0),
                0.0, 1e-15);
    EXPECT_NEAR(clone_fidelity(InputQubit(0.0, 1.0)), 5.0 / 6.0, 1e-15);
    EXPECT_NEAR(unot_fidelity(InputQubit(1.0, 0.0)), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(unot_fidelity(InputQubit(0.0, 1.0)), 2.0 / 3.0, 1e-15);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(clone_fidelity(InputQubit(r, r)), 5.0 / 6.0, 1e-15);
}

TEST(Clone, MatchesDenseOracleOverHaarInputs) {
    Rng rng(2024);
    double max_dev = 0.0;
    std::vector<double> nots;
    for (int i = 0; i < 100; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        const CloneOutput out = clone(q);
        const Oracle o = oracle(q);
        EXPECT_NEAR(out.branch_prob, o.branch, 1e-13);
        EXPECT_NEAR(o.branch, 0.75, 1e-13);
        const double f = clone_fidelity(q), t = unot_fidelity(q);
        EXPECT_NEAR(f, o.f1, 1e-13);
        EXPECT_NEAR(f, o.f2, 1e-13);
        EXPECT_NEAR(t, o.f_not, 1e-13);
        for (const auto& [rc, v] : out.rho_clone1.entries()) {
            const BasisLabel r2 = {rc.first[0]}, c2 = {rc.second[0]};
            EXPECT_NEAR(std::abs(v - out.rho_clone2.entry(r2, c2)), 0.0, 1e-12);
        }
        max_dev = std::max(max_dev, std::abs(f - 5.0 / 6.0));
        nots.push_back(t);
    }
    EXPECT_LT(max_dev, 1e-12);
    double mean = 0.0, var = 0.0;
    for (double t : nots) mean += t / 100.0;
    for (double t : nots) var += (t - mean) * (t - mean) / 100.0;
    EXPECT_LT(var, 1e-24);
}

TEST(InputQubit, RejectsUnnormalized) {
    EXPECT_THROW(InputQubit(1.0, 1.0), InvalidParameter);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        EXPECT_NEAR(std::norm(q.a()) + std::norm(q.b()), 1.0, 1e-14);
    }
}
