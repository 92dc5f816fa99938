#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "clonesim/adiabatic.hpp"
#include "clonesim/errors.hpp"
#include "clonesim/rng.hpp"

using namespace clonesim;

namespace {

double max_antihermitian(const LinearOperator& h) {
    const auto basis = enumerate_basis(h.space());
    const Eigen::MatrixXcd m = to_dense(h, basis);
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

SystemParams ideal(Side side, double delta = 0.0) {
    SystemParams p = default_params(side);
    p.gamma = 0.0;
    p.delta = delta;
    return p;
}

}  // namespace

TEST(Hamiltonian, HermitianWithoutLoss) {
    const PulseSchedule pulse;
    for (double t : {0.0, 37.5, 150.0, 199.0}) {
        EXPECT_LT(max_antihermitian(hamiltonian_alice(t, ideal(Side::Alice, 0.3), pulse)), 1e-12);
        EXPECT_LT(max_antihermitian(hamiltonian_bob(t, ideal(Side::Bob, -0.2), pulse)), 1e-12);
    }
    EXPECT_GT(max_antihermitian(hamiltonian_alice(50.0, default_params(Side::Alice), pulse)), 0.05);
    EXPECT_THROW(hamiltonian_alice(0.0, default_params(Side::Bob), pulse), InvalidParameter);
    EXPECT_THROW(hamiltonian_bob(0.0, default_params(Side::Alice), pulse), InvalidParameter);
}

TEST(Hamiltonian, CavityMatrixElements) {
    const PulseSchedule pulse;
    const SystemParams pa = ideal(Side::Alice);
    const LinearOperator ha = hamiltonian_alice(0.0, pa, pulse);
    const Space& sa = ha.space();
    const auto cl = ids::cavity_mode(Side::Alice, 'L'), cr = ids::cavity_mode(Side::Alice, 'R');
    const cplx ea = ha.entry(sa.label({{ids::kAtomA, "e_L"}, {cl, "0"}, {cr, "0"}}),
                             sa.label({{ids::kAtomA, "g_0"}, {cl, "1"}, {cr, "0"}}));
    EXPECT_NEAR(std::abs(ea - pa.g), 0.0, 1e-15);

    const SystemParams pb = ideal(Side::Bob);
    const LinearOperator hb = hamiltonian_bob(0.0, pb, pulse);
    const Space& sb = hb.space();
    const auto bl = ids::cavity_mode(Side::Bob, 'L'), br = ids::cavity_mode(Side::Bob, 'R');
    const cplx eb = hb.entry(sb.label({{ids::kAtomB, "e_0"}, {bl, "0"}, {br, "0"}}),
                             sb.label({{ids::kAtomB, "g_L"}, {bl, "0"}, {br, "1"}}));
    EXPECT_NEAR(std::abs(eb - pb.g), 0.0, 1e-15);
}

TEST(DarkStates, NullVectorsAtRandomTimes) {
    Rng rng(17);
    const PulseSchedule pulse;
    for (double delta : {0.0, 0.7}) {
        for (int i = 0; i < 20; ++i) {
            const double t = rng.uniform(0.0, pulse.t_total);
            const auto pa = ideal(Side::Alice, delta);
            for (const auto& d : dark_states(pa, pulse, t)) {
                EXPECT_LT(apply(hamiltonian_alice(t, pa, pulse), d).norm(), 1e-12);
                EXPECT_NEAR(d.norm(), 1.0, 1e-14);
            }
            const auto pb = ideal(Side::Bob, delta);
            const PulseSchedule bob = [&] {
                PulseSchedule s = pulse;
                s.omega_max *= std::numbers::sqrt2;
                return s;
            }();
            for (const auto& d : dark_states(pb, bob, t)) EXPECT_LT(apply(hamiltonian_bob(t, pb, bob), d).norm(), 1e-12);
        }
    }
}

TEST(DarkStates, LimitsAndOrthogonality) {
    const auto [d1, d2] = alice_dark_states(0.0);
    EXPECT_NEAR(std::abs(d1.amplitude({{ids::kAtomA, "g_L"},
                                       {ids::cavity_mode(Side::Alice, 'L'), "0"},
                                       {ids::cavity_mode(Side::Alice, 'R'), "0"}}) -
                         1.0),
                0.0, 0.0);
    const auto far = alice_dark_states(mixing_angle(Side::Alice, 1.0, 1e12)).first;
    EXPECT_NEAR(std::abs(far.amplitude({{ids::kAtomA, "g_0"},
                                        {ids::cavity_mode(Side::Alice, 'L'), "1"},
                                        {ids::cavity_mode(Side::Alice, 'R'), "0"}}) +
                         1.0),
                0.0, 1e-12);
    Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        const auto [a, b] = alice_dark_states(rng.uniform(0.0, std::numbers::pi / 2));
        EXPECT_NEAR(std::abs(inner(a, b)), 0.0, 1e-15);
    }
}

TEST(MixingAngle, MatchesCosineForms) {
    for (double omega : {0.0, 0.3, 1.0, 20.0}) {
        const double g = 0.8;
        EXPECT_NEAR(std::cos(mixing_angle(Side::Alice, g, omega)), g / std::hypot(g, omega), 1e-15);
        EXPECT_NEAR(std::cos(mixing_angle(Side::Bob, g, omega)),
                    std::sqrt(2.0) * g / std::sqrt(2 * g * g + omega * omega), 1e-15);
    }
}

TEST(PulseSchedule, ShapesStartAtZeroAndReachMax) {
    for (RampShape shape : {RampShape::SinSquared, RampShape::Tanh, RampShape::Linear}) {
        PulseSchedule s;
        s.shape = shape;
        EXPECT_EQ(s.omega(0.0), 0.0) << to_string(shape);
        EXPECT_NEAR(s.omega(s.ramp_end()), s.omega_max, 1e-12) << to_string(shape);
        double prev = 0.0;
        for (double t = 0.0; t <= s.ramp_end(); t += 0.5) {
            EXPECT_GE(s.omega(t), prev - 1e-12);
            prev = s.omega(t);
        }
        EXPECT_EQ(ramp_shape_from_string(to_string(shape)), shape);
    }
}

TEST(Evolve, TracksDarkStateWithoutLoss) {
    SystemParams p = ideal(Side::Alice);
    p.kappa = 0.0;
    const PulseSchedule pulse;
    const StateVector init = alice_initial(0.6, cplx(0.0, 0.8));
    const DynamicsReport r = evolve(init, p, pulse, 0.1);
    const double theta = mixing_angle(Side::Alice, p.g, pulse.omega(pulse.t_total));
    EXPECT_GT(overlap_modulus(r.final_state, adiabatic_target(init, Side::Alice, theta)), 0.999);
    EXPECT_NEAR(r.final_state.norm(), 1.0, 1e-8);
    EXPECT_LT(r.excited_pop_max, 1e-2);
    EXPECT_FALSE(r.adiabaticity_warning);
}

TEST(Evolve, StationaryWithoutDrive) {
    SystemParams p = ideal(Side::Alice);
    PulseSchedule pulse;
    pulse.omega_max = 1e-300;
    pulse.t_total = 20.0;
    const StateVector init = alice_initial(1.0, 0.0);
    const DynamicsReport r = evolve(init, p, pulse, 0.02);
    EXPECT_NEAR((r.final_state - init).norm(), 0.0, 1e-10);
}

TEST(Evolve, FullEmissionAndClosure) {
    for (Side side : {Side::Alice, Side::Bob}) {
        const SystemParams p = ideal(side);
        PulseSchedule pulse;
        if (side == Side::Bob) pulse.omega_max *= std::numbers::sqrt2;
        const DynamicsReport r = evolve(side == Side::Alice ? alice_initial(1.0, 0.0) : bob_initial(), p, pulse, 0.1);
        EXPECT_GE(r.emission_prob, 0.99);
        EXPECT_NEAR(r.emission_prob + r.spont_loss + r.residual_norm2, 1.0, 1e-8);
        EXPECT_NEAR(r.emission_prob, pulse_norm2(r.pulse_shape), 1e-4);
    }
    const DynamicsReport lossy = evolve(alice_initial(0.6, 0.8), default_params(Side::Alice), PulseSchedule{}, 0.1);
    EXPECT_GT(lossy.spont_loss, 0.0);
    EXPECT_NEAR(lossy.emission_prob + lossy.spont_loss + lossy.residual_norm2, 1.0, 1e-8);
}

TEST(Evolve, FastRampIsFlagged) {
    PulseSchedule pulse;
    pulse.t_total = 10.0;
    const DynamicsReport r = evolve(alice_initial(1.0, 0.0), default_params(Side::Alice), pulse, 0.01);
    EXPECT_TRUE(r.adiabaticity_warning);
    EXPECT_LT(r.emission_prob, 0.99);
}

TEST(Evolve, Preconditions) {
    const PulseSchedule pulse;
    EXPECT_THROW(evolve(alice_initial(1.0, 0.0), default_params(Side::Alice), pulse, 1.0), StepSizeError);
    EXPECT_THROW(evolve(cplx(2.0) * alice_initial(1.0, 0.0), default_params(Side::Alice), pulse, 0.1),
                 InvalidParameter);
    EXPECT_THROW(coupling_modulation(default_params(Side::Alice), 1.5, 0.1), InvalidParameter);
}

TEST(PulseShape, ConstantAngleGivesExponential) {
    // g -> 0 puts theta at pi/2 as soon as the drive is on.
    SystemParams p = ideal(Side::Alice);
    p.g = 1e-12;
    PulseSchedule pulse;
    pulse.t_total = 60.0;
    pulse.hold_fraction = 0.99;
    std::vector<double> grid;
    for (int i = 0; i <= 6000; ++i) grid.push_back(0.01 * i);
    const PulseShape f = pulse_shape_analytic(p, pulse, grid);
    for (std::size_t i = 100; i < grid.size(); i += 500) EXPECT_NEAR(std::abs(f.f[i]), std::exp(-grid[i] / 2), 1e-6);
    // f jumps from 0 to 1 within the first step, which no grid rule resolves; integrate the tail.
    PulseShape tail;
    tail.t.assign(f.t.begin() + 1, f.t.end());
    tail.f.assign(f.f.begin() + 1, f.f.end());
    EXPECT_NEAR(pulse_norm2(tail), std::exp(-0.01) - std::exp(-60.0), 1e-6);
}

TEST(PulseShape, NormMatchesEmissionExponent) {
    for (Side side : {Side::Alice, Side::Bob}) {
        const SystemParams p = default_params(side);
        PulseSchedule pulse;
        pulse.t_total = 50.0;
        std::vector<double> grid;
        for (int i = 0; i <= 5000; ++i) grid.push_back(0.01 * i);
        const PulseShape f = pulse_shape_analytic(p, pulse, grid);
        EXPECT_NEAR(pulse_norm2(f), 1.0 - std::exp(-emission_exponent(p, pulse, pulse.t_total)), 1e-9);
    }
}

TEST(PulseShape, NumericMatchesAnalytic) {
    SystemParams p = ideal(Side::Alice);
    const PulseSchedule pulse;
    const DynamicsReport r = evolve(alice_initial(1.0, 0.0), p, pulse, 0.1);
    EXPECT_GT(pulse_overlap(r.pulse_shape, pulse_shape_analytic(p, pulse, r.pulse_shape.t)), 0.995);
}

TEST(PulseOverlap, SelfAndModulated) {
    const SystemParams p = ideal(Side::Alice);
    const PulseSchedule pulse;
    const DynamicsReport a = evolve(alice_initial(1.0, 0.0), p, pulse, 0.1);
    EXPECT_NEAR(pulse_overlap(a.pulse_shape, a.pulse_shape), 1.0, 1e-12);
    const DynamicsReport m = evolve(alice_initial(1.0, 0.0), coupling_modulation(p, 0.1, 0.5), pulse, 0.1);
    const double ov = pulse_overlap(a.pulse_shape, m.pulse_shape);
    EXPECT_GT(ov, 0.0);
    EXPECT_LE(ov, 1.0);
    PulseShape shifted = a.pulse_shape;
    shifted.t.pop_back();
    EXPECT_THROW(pulse_overlap(a.pulse_shape, shifted), InvalidParameter);
}

TEST(PulseCsv, Header) {
    PulseShape f{{0.0, 0.5}, {cplx(0.25, 0.0), cplx(0.0, -1.0)}};
    const std::string csv = pulse_csv(f);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,re_f,im_f");
}
