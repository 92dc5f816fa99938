#include <gtest/gtest.h>

#include <cmath>

#include "clonesim/errors.hpp"
#include "clonesim/photon_modes.hpp"
#include "clonesim/protocol.hpp"
#include "clonesim/rng.hpp"
#include "clonesim/verification.hpp"

using namespace clonesim;

namespace {

ProtocolConfig analytic(const InputQubit& q) {
    ProtocolConfig c = default_config();
    c.input = q;
    return c;
}

ProtocolConfig dynamic(const InputQubit& q, double t_total = 200.0) {
    ProtocolConfig c = analytic(q);
    c.mode = Mode::Dynamic;
    c.alice.pulse.t_total = c.bob.pulse.t_total = t_total;
    c.dt = t_total / 2000.0;
    return c;
}

// Clone-1 reduced state of the photonic output as a 2x2 matrix in the
// logical basis (H = 0, V = 1).
std::array<std::array<cplx, 2>, 2> photon_qubit(const DensityMatrix& rho, const char* path) {
    const DensityMatrix r = partial_trace(rho, {path_mode_id(path, "H"), path_mode_id(path, "V")});
    const Space& sp = r.space();
    const BasisLabel lbl[2] = {sp.label({{path_mode_id(path, "H"), "1"}, {path_mode_id(path, "V"), "0"}}),
                               sp.label({{path_mode_id(path, "H"), "0"}, {path_mode_id(path, "V"), "1"}})};
    std::array<std::array<cplx, 2>, 2> m{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = r.entry(lbl[i], lbl[j]);
    return m;
}

}  // namespace

TEST(Analytic, HeraldedStateForBasisInput) {
    const CloneReport r = run_analytic(analytic(InputQubit(1.0, 0.0)));
    const StateVector& s = *r.post_state;
    auto amp = [&](const char* p3, const char* p4, const char* atom) {
        return s.amplitude({{path_mode_id("3", "H"), p3[0] == 'H' ? "1" : "0"},
                            {path_mode_id("3", "V"), p3[0] == 'V' ? "1" : "0"},
                            {path_mode_id("4", "H"), p4[0] == 'H' ? "1" : "0"},
                            {path_mode_id("4", "V"), p4[0] == 'V' ? "1" : "0"},
                            {ids::kAtomB, atom}});
    };
    // Up to a global phase: sqrt(2/3)|HH>|g_R> - sqrt(1/6)(|HV>+|VH>)|g_L>.
    const cplx phase = amp("H", "H", "g_R") / std::abs(amp("H", "H", "g_R"));
    EXPECT_NEAR(std::abs(amp("H", "H", "g_R") / phase - std::sqrt(2.0 / 3.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(amp("H", "V", "g_L") / phase + std::sqrt(1.0 / 6.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(amp("V", "H", "g_L") / phase + std::sqrt(1.0 / 6.0)), 0.0, 1e-14);
    EXPECT_NEAR(s.norm(), 1.0, 1e-14);
    EXPECT_EQ(s.amplitudes().size(), 3u);
}

TEST(Analytic, MatchesReferenceOverHaarInputs) {
    Rng rng(31);
    for (int i = 0; i < 20; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        const CloneReport r = run_analytic(analytic(q));
        EXPECT_GT(overlap_modulus(*r.post_state, reference::heralded(q)), 1.0 - 1e-12);
        EXPECT_GT(overlap_modulus(pre_interference_state(q), reference::pre_interference(q)), 1.0 - 1e-12);
    }
}

TEST(Analytic, CloneStatesEqualIdealCircuit) {
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        const CloneReport r = run_analytic(analytic(q));
        const CloneOutput ideal = clone(q);
        const auto m1 = photon_qubit(r.post_rho, "3"), m2 = photon_qubit(r.post_rho, "4");
        const Space& s1 = ideal.rho_clone1.space();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const cplx e = ideal.rho_clone1.entry(s1.label({{qubits::kInput, a ? "1" : "0"}}),
                                                      s1.label({{qubits::kInput, b ? "1" : "0"}}));
                EXPECT_NEAR(std::abs(m1[a][b] - e), 0.0, 1e-10);
                EXPECT_NEAR(std::abs(m2[a][b] - e), 0.0, 1e-10);
            }
        EXPECT_NEAR(r.clone_fidelity_1, r.clone_fidelity_2, 1e-12);
    }
}

TEST(Analytic, UniversalConstants) {
    Rng rng(12);
    std::vector<double> f;
    for (int i = 0; i < 100; ++i) {
        const CloneReport r = run_analytic(analytic(InputQubit::haar(rng)));
        EXPECT_NEAR(r.clone_fidelity_1, 5.0 / 6.0, 1e-12);
        EXPECT_NEAR(r.telenot_fidelity, 2.0 / 3.0, 1e-12);
        EXPECT_NEAR(r.p_symmetric, 0.75, 1e-12);
        f.push_back(r.clone_fidelity_1);
    }
    double mean = 0.0, var = 0.0;
    for (double x : f) mean += x / f.size();
    for (double x : f) var += (x - mean) * (x - mean) / f.size();
    EXPECT_LT(var, 1e-20);
}

TEST(Analytic, BasisInputAtomMarginal) {
    const CloneReport r = run_analytic(analytic(InputQubit(1.0, 0.0)));
    const DensityMatrix atom = partial_trace(r.post_rho, {ids::kAtomB});
    const Space& sp = atom.space();
    const BasisLabel gr = sp.label({{ids::kAtomB, "g_R"}});
    EXPECT_NEAR(atom.entry(gr, gr).real(), 2.0 / 3.0, 1e-14);
    const auto m = photon_qubit(r.post_rho, "3");
    EXPECT_NEAR(m[0][0].real(), 5.0 / 6.0, 1e-14);
    EXPECT_NEAR(m[1][1].real(), 1.0 / 6.0, 1e-14);
}

TEST(TeleNot, MatchesUnotFidelity) {
    Rng rng(50);
    EXPECT_NEAR(telenot_check(run_analytic(analytic(InputQubit(1.0, 0.0))), InputQubit(1.0, 0.0)), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(telenot_check(run_analytic(analytic(InputQubit(0.0, 1.0))), InputQubit(0.0, 1.0)), 2.0 / 3.0, 1e-14);
    for (int i = 0; i < 50; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        EXPECT_NEAR(telenot_check(run_analytic(analytic(q)), q), unot_fidelity(q), 1e-12);
    }
}

TEST(DetectorModel, EtaSquaredLaw) {
    const CloneReport base = run_analytic(analytic(InputQubit(0.6, 0.8)));
    const CloneReport one = detector_model(base, 1.0, 0.0, 1.0, 1);
    EXPECT_EQ(one.p_detected, base.p_operational);
    EXPECT_EQ(one.clone_fidelity_1, base.clone_fidelity_1);
    EXPECT_EQ(one.telenot_fidelity, base.telenot_fidelity);
    for (double eta : {0.0, 0.25, 0.5, 1.0}) {
        const CloneReport r = detector_model(base, eta, 0.0, 1.0, 1);
        EXPECT_EQ(r.p_detected / r.p_operational, eta * eta);
        EXPECT_EQ(r.clone_fidelity_1, base.clone_fidelity_1);
        EXPECT_EQ(r.clone_fidelity_2, base.clone_fidelity_2);
        EXPECT_EQ(r.telenot_fidelity, base.telenot_fidelity);
    }
    EXPECT_EQ(detector_model(base, 0.5, 0.0, 1.0, 1).p_detected, base.p_operational / 4);
}

TEST(DetectorModel, DarkCountsMatchMonteCarlo) {
    const CloneReport base = run_analytic(analytic(InputQubit(0.6, 0.8)));
    const CloneReport r = detector_model(base, 0.1, 0.01, 1.0, 20240601, 200000);
    const auto& st = r.detector_stats;
    EXPECT_GT(st.false_fraction, 0.0);
    EXPECT_LT(std::abs(st.false_fraction - st.false_fraction_mc), 3.0 * st.false_fraction_mc_sigma)
        << "closed form " << st.false_fraction << " vs MC " << st.false_fraction_mc << " +- "
        << st.false_fraction_mc_sigma;
    const double p_sigma = std::sqrt(r.p_detected * (1 - r.p_detected) / st.trials);
    EXPECT_LT(std::abs(r.p_detected - st.p_detected_mc), 3.0 * p_sigma);
    // Dilution lowers every fidelity toward its value on the maximally mixed state.
    EXPECT_LT(r.clone_fidelity_1, base.clone_fidelity_1);
    EXPECT_NEAR(r.clone_fidelity_1, (1 - st.false_fraction) * base.clone_fidelity_1 + st.false_fraction * 0.5, 1e-12);
    EXPECT_NEAR(r.telenot_fidelity, (1 - st.false_fraction) * base.telenot_fidelity + st.false_fraction * 0.5, 1e-12);
}

TEST(DetectorModel, SameSeedSameNumbers) {
    const CloneReport base = run_analytic(analytic(InputQubit(0.6, 0.8)));
    const CloneReport a = detector_model(base, 0.3, 0.05, 2.0, 77, 20000);
    const CloneReport b = detector_model(base, 0.3, 0.05, 2.0, 77, 20000);
    EXPECT_EQ(a.detector_stats.false_fraction_mc, b.detector_stats.false_fraction_mc);
    EXPECT_EQ(a.detector_stats.p_detected_mc, b.detector_stats.p_detected_mc);
    EXPECT_FALSE(detector_model(base, 0.3, 0.3, 1.0, 77, 10).warnings.empty());
}

TEST(Dynamic, MatchedPulsesNearOptimal) {
    const CloneReport r = run(dynamic(InputQubit(0.6, cplx(0.0, 0.8))));
    EXPECT_GT(r.overlap_visibility, 0.995);
    EXPECT_NEAR(r.clone_fidelity_1, 5.0 / 6.0, 0.01);
    EXPECT_NEAR(r.clone_fidelity_1, r.clone_fidelity_2, 1e-9);
    for (const auto* d : {&*r.alice_dynamics, &*r.bob_dynamics})
        EXPECT_NEAR(d->emission_prob + d->spont_loss + d->residual_norm2, 1.0, 1e-8);
}

TEST(Dynamic, ConvergesWithLongerPulses) {
    double prev = 1.0;
    for (double t : {25.0, 50.0, 100.0, 200.0}) {
        ProtocolConfig c = dynamic(InputQubit(0.6, 0.8), t);
        c.alice.params.gamma = c.bob.params.gamma = 0.0;
        const double dev = std::abs(run(c).clone_fidelity_1 - 5.0 / 6.0);
        EXPECT_LE(dev, prev + 1e-4) << "t_total " << t;
        prev = dev;
    }
}

TEST(Dynamic, MismatchedPulsesLoseVisibility) {
    ProtocolConfig c = dynamic(InputQubit(1.0, 0.0));
    c.bob.params.kappa = 0.05;
    const CloneReport r = run(c);
    EXPECT_LT(r.overlap_visibility, 0.9);
    // Mixture of 5/6 (interfering) and 3/4 (distinguishable) weighted by heralding rate.
    const double w_int = r.overlap_visibility * 0.375, w_dist = (1 - r.overlap_visibility) * 0.25;
    EXPECT_NEAR(r.p_operational, w_int + w_dist, 1e-12);
    EXPECT_NEAR(r.clone_fidelity_1, (w_int * 5.0 / 6.0 + w_dist * 0.75) / (w_int + w_dist), 1e-4);
    EXPECT_NEAR(r.clone_fidelity_1, r.clone_fidelity_2, 1e-9);
}

TEST(Dynamic, Diagnostics) {
    ProtocolConfig fast = dynamic(InputQubit(1.0, 0.0), 10.0);
    fast.dt = 0.01;
    const CloneReport r = run(fast);
    EXPECT_FALSE(r.warnings.empty());
    EXPECT_TRUE(r.alice_dynamics->adiabaticity_warning);

    ProtocolConfig bad = dynamic(InputQubit(1.0, 0.0));
    bad.bob.pulse.t_total = 100.0;
    EXPECT_THROW(run(bad), ConfigError);

    ProtocolConfig floor = dynamic(InputQubit(1.0, 0.0), 20.0);
    floor.dt = 0.01;
    floor.alice.params.kappa = floor.bob.params.kappa = 0.01;
    const CloneReport low = run(floor);
    bool degenerate = false;
    for (const auto& w : low.warnings) degenerate = degenerate || w.find("degenerate") != std::string::npos;
    EXPECT_TRUE(degenerate);
}

TEST(Sweep, OrderedAndValidated) {
    const std::vector<double> etas = {1.0, 0.5, 0.25, 0.0};
    const auto pts = run_sweep(default_config(), "eta", etas);
    ASSERT_EQ(pts.size(), etas.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        EXPECT_EQ(pts[i].index, i);
        EXPECT_EQ(pts[i].value, etas[i]);
        EXPECT_EQ(pts[i].report.detector.eta, etas[i]);
    }
    EXPECT_THROW(apply_sweep_param(default_config(), "nope", 1.0), ConfigError);
    const ProtocolConfig both = apply_sweep_param(default_config(), "t_total", 80.0);
    EXPECT_EQ(both.alice.pulse.t_total, 80.0);
    EXPECT_EQ(both.bob.pulse.t_total, 80.0);
}

TEST(Config, Validation) {
    ProtocolConfig c = default_config();
    c.detector.eta = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = default_config();
    c.detector.window = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}
