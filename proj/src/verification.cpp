#include "clonesim/verification.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "clonesim/adiabatic.hpp"
#include "clonesim/format.hpp"
#include "clonesim/linear_optics.hpp"
#include "clonesim/photon_modes.hpp"
#include "clonesim/protocol.hpp"
#include "clonesim/report_io.hpp"
#include "clonesim/rng.hpp"

namespace clonesim {

namespace reference {

namespace {

Space atom_space(Side side) {
    const char* id = side == Side::Alice ? ids::kAtomA : ids::kAtomB;
    return node_space(side, 1).restrict_to({id});
}

Space photon_space(std::string_view p1, std::string_view p2) {
    auto subs = path_subsystems(p1, "H", "V");
    for (auto& s : path_subsystems(p2, "H", "V")) subs.push_back(s);
    return Space(std::move(subs));
}

// Occupation factors for one photon of polarization x on `path`.
LabelFactors photon(std::string_view path, char x) {
    return {{path_mode_id(path, "H"), x == 'H' ? "1" : "0"}, {path_mode_id(path, "V"), x == 'V' ? "1" : "0"}};
}

LabelFactors concat(std::initializer_list<LabelFactors> parts) {
    LabelFactors out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace

StateVector pre_interference(const InputQubit& q) {
    const Space sp(merge_disjoint(merge_disjoint(atom_space(Side::Alice), atom_space(Side::Bob)),
                                  photon_space("A", "B"))
                       .subsystems());
    const double r = 1.0 / std::numbers::sqrt2;
    std::map<BasisLabel, cplx> amps;
    const LabelFactors ga = {{ids::kAtomA, "g_0"}};
    const std::pair<char, cplx> alice[] = {{'H', q.a()}, {'V', q.b()}};
    for (const auto& [x, amp] : alice) {
        amps[sp.label(concat({ga, photon("A", x), {{ids::kAtomB, "g_R"}}, photon("B", 'H')}))] += r * amp;
        amps[sp.label(concat({ga, photon("A", x), {{ids::kAtomB, "g_L"}}, photon("B", 'V')}))] -= r * amp;
    }
    return StateVector(sp, std::move(amps));
}

StateVector heralded(const InputQubit& q) {
    const Space sp(merge_disjoint(atom_space(Side::Bob), photon_space("3", "4")).subsystems());
    const double s23 = std::sqrt(2.0 / 3.0), s16 = std::sqrt(1.0 / 6.0);
    const cplx a = q.a(), b = q.b();
    auto lbl = [&](char x, char y, const char* atom) {
        return sp.label(concat({photon("3", x), photon("4", y), {{ids::kAtomB, atom}}}));
    };
    std::map<BasisLabel, cplx> amps;
    amps[lbl('H', 'H', "g_R")] += s23 * a;
    amps[lbl('H', 'V', "g_L")] -= s16 * a;
    amps[lbl('V', 'H', "g_L")] -= s16 * a;
    amps[lbl('V', 'V', "g_L")] -= s23 * b;
    amps[lbl('H', 'V', "g_R")] += s16 * b;
    amps[lbl('V', 'H', "g_R")] += s16 * b;
    return StateVector(sp, std::move(amps));
}

StateVector ideal_output(const InputQubit& q) {
    const Space sp = qubit_space({qubits::kInput, qubits::kAncilla, qubits::kAnti});
    const double s23 = std::sqrt(2.0 / 3.0);
    const cplx a = q.a(), b = q.b();
    auto lbl = [&](const char* x, const char* y, const char* z) {
        return sp.label({{qubits::kInput, x}, {qubits::kAncilla, y}, {qubits::kAnti, z}});
    };
    std::map<BasisLabel, cplx> amps;
    // sqrt(2/3) (zeta_1 |1> - zeta_0 |0>)
    amps[lbl("0", "0", "1")] += s23 * a;
    amps[lbl("0", "1", "1")] += s23 * 0.5 * b;
    amps[lbl("1", "0", "1")] += s23 * 0.5 * b;
    amps[lbl("1", "1", "0")] -= s23 * b;
    amps[lbl("0", "1", "0")] -= s23 * 0.5 * a;
    amps[lbl("1", "0", "0")] -= s23 * 0.5 * a;
    return StateVector(sp, std::move(amps));
}

StateVector projection_table(char x, char y) {
    const Space sp = photon_space("3", "4");
    auto lbl = [&](char u, char v) { return sp.label(concat({photon("3", u), photon("4", v)})); };
    std::map<BasisLabel, cplx> amps;
    if (x == y) {
        amps[lbl(x, y)] = 1.0;
    } else {
        amps[lbl('H', 'V')] = 0.5;
        amps[lbl('V', 'H')] = 0.5;
    }
    return StateVector(sp, std::move(amps));
}

}  // namespace reference

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "FAILED: " << what << "; ";
        }
    }
};

std::string n(double x) { return format_number(x); }

ProtocolConfig analytic_cfg(const InputQubit& q) {
    ProtocolConfig c = default_config();
    c.input = q;
    return c;
}

// Photons on paths A, B with polarizations x, y and nothing else.
StateVector two_photons(char x, char y) {
    auto subs = path_subsystems("A", "H", "V");
    for (auto& s : path_subsystems("B", "H", "V")) subs.push_back(s);
    const Space sp(std::move(subs));
    auto occ = [](char want, char have) { return want == have ? "1" : "0"; };
    return StateVector::basis(sp, sp.label({{path_mode_id("A", "H"), occ('H', x)},
                                            {path_mode_id("A", "V"), occ('V', x)},
                                            {path_mode_id("B", "H"), occ('H', y)},
                                            {path_mode_id("B", "V"), occ('V', y)}}));
}

double closure(const DynamicsReport& d) { return std::abs(d.emission_prob + d.spont_loss + d.residual_norm2 - 1.0); }

void c1_heralded_state(Check& c, std::uint64_t seed) {
    Rng rng(seed + 1);
    std::vector<InputQubit> inputs = {InputQubit(1.0, 0.0)};
    for (int i = 0; i < 5; ++i) inputs.push_back(InputQubit::haar(rng));
    double worst = 1.0;
    for (const auto& q : inputs) {
        const CloneReport r = run_analytic(analytic_cfg(q));
        worst = std::min(worst, overlap_modulus(*r.post_state, reference::heralded(q)));
    }
    c.detail << "min overlap with reference over 6 inputs = " << n(worst) << "; ";
    c.require(worst > 1.0 - 1e-12, "overlap > 1 - 1e-12");
}

void c2_optimal_constants(Check& c, std::uint64_t seed) {
    // Brute-force circuit first: projector applied to input x singlet.
    Rng rng(seed + 2);
    double worst_circuit = 0.0;
    for (int i = 0; i < 10; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        worst_circuit = std::max({worst_circuit, std::abs(clone_fidelity(q) - 5.0 / 6.0),
                                  std::abs(unot_fidelity(q) - 2.0 / 3.0)});
        worst_circuit = std::max(worst_circuit, 1.0 - overlap_modulus(clone(q).state, reference::ideal_output(q)));
    }
    c.detail << "circuit max deviation = " << n(worst_circuit) << "; ";
    c.require(worst_circuit < 1e-9, "circuit reproduces 5/6, 2/3 and the reference output");

    std::vector<double> f, t;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const InputQubit q = InputQubit::haar(rng);
        const CloneReport r = run_analytic(analytic_cfg(q));
        f.push_back(r.clone_fidelity_1);
        t.push_back(r.telenot_fidelity);
        worst = std::max({worst, std::abs(r.clone_fidelity_1 - 5.0 / 6.0), std::abs(r.clone_fidelity_2 - 5.0 / 6.0),
                          std::abs(r.telenot_fidelity - 2.0 / 3.0), std::abs(unot_fidelity(q) - r.telenot_fidelity)});
    }
    auto variance = [](const std::vector<double>& v) {
        double m = 0.0, s = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        for (double x : v) s += (x - m) * (x - m);
        return s / static_cast<double>(v.size());
    };
    const double vf = variance(f), vt = variance(t);
    c.detail << "protocol max deviation = " << n(worst) << ", var(F_clone) = " << n(vf) << ", var(F_not) = " << n(vt)
             << "; ";
    c.require(worst < 1e-9, "fidelities within 1e-9 of 5/6 and 2/3");
    c.require(vf < 1e-20 && vt < 1e-20, "variance < 1e-20");
}

void c3_projector(Check& c) {
    const LinearOperator p = projector_p123();
    const Space& ps = p.space();
    auto bit = [](char x) { return x == 'H' ? "0" : "1"; };
    double worst_p = 0.0, worst_table = 0.0;
    const char pols[] = {'H', 'V'};
    for (char x : pols)
        for (char y : pols) {
            const auto out = optics::symmetric_project(two_photons(x, y));
            worst_table = std::max(worst_table, (out.raw - reference::projection_table(x, y)).norm());
            for (char u : pols)
                for (char v : pols) {
                    const cplx ideal =
                        p.entry(ps.label({{qubits::kInput, bit(u)}, {qubits::kAncilla, bit(v)}, {qubits::kAnti, "0"}}),
                                ps.label({{qubits::kInput, bit(x)}, {qubits::kAncilla, bit(y)}, {qubits::kAnti, "0"}}));
                    const Space& os = out.raw.space();
                    const cplx optical = out.raw.amplitude(os.label({{path_mode_id("3", "H"), u == 'H' ? "1" : "0"},
                                                                     {path_mode_id("3", "V"), u == 'V' ? "1" : "0"},
                                                                     {path_mode_id("4", "H"), v == 'H' ? "1" : "0"},
                                                                     {path_mode_id("4", "V"), v == 'V' ? "1" : "0"}}));
                    worst_p = std::max(worst_p, std::abs(ideal - optical));
                }
        }
    c.detail << "max |P_opt - P_123| = " << n(worst_p) << ", max table deviation = " << n(worst_table) << "; ";
    c.require(worst_p < 1e-12, "entrywise agreement 1e-12");
    c.require(worst_table == 0.0, "four-row table reproduced exactly");
}

void c4_success_probability(Check& c, std::uint64_t seed) {
    Rng rng(seed + 4);
    double worst = 0.0;
    CloneReport r;
    for (int i = 0; i < 100; ++i) {
        r = run_analytic(analytic_cfg(InputQubit::haar(rng)));
        worst = std::max(worst, std::abs(r.p_symmetric - 0.75));
    }
    c.detail << "max |p_sym - 3/4| = " << n(worst) << "; ";
    c.require(worst <= 1e-12, "p_symmetric = 3/4 +- 1e-12");

    const auto& d = r.detection;
    double total = 0.0;
    for (const auto& [cfg, w] : r.configs) total += w;
    const CloneReport mc = detector_model(r, 1.0, 0.0, 1.0, seed + 40, 100000);
    const double sigma = std::sqrt(d.p_operational * (1.0 - d.p_operational) / 100000.0);
    c.detail << "p_operational = " << n(d.p_operational) << " (D1&D2 " << n(d.p_coinc_d1d2) << " + D3&D4 "
             << n(d.p_coinc_d3d4) << "; bunching into mode 1 " << n(d.p_bunch_mode1) << ", mode 2 "
             << n(d.p_bunch_mode2) << "), Monte Carlo " << n(mc.detector_stats.p_detected_mc) << " +- " << n(sigma)
             << ", quoted " << n(optics::kQuotedSuccessProbability) << ", ratio "
             << n(d.p_operational / optics::kQuotedSuccessProbability) << "; ";
    c.require(std::abs(total - 1.0) < 1e-12, "detector configurations sum to 1");
    c.require(std::abs(d.p_coinc_d1d2 + d.p_coinc_d3d4 - d.p_operational) < 1e-15, "coincidence bookkeeping adds up");
    c.require(std::abs(mc.detector_stats.p_detected_mc - d.p_operational) < 3.0 * sigma,
              "Monte Carlo within 3 sigma of the closed form");
}

void c5_eta_law(Check& c, std::uint64_t seed) {
    const CloneReport base = run_analytic(analytic_cfg(InputQubit(0.6, cplx(0.0, 0.8))));
    const CloneReport ref = detector_model(base, 1.0, 0.0, 1.0, seed + 5);
    for (double eta : {0.0, 0.25, 0.5, 1.0}) {
        const CloneReport r = detector_model(base, eta, 0.0, 1.0, seed + 5);
        const double ratio = r.p_detected / r.p_operational;
        c.detail << "eta=" << n(eta) << ": ratio " << n(ratio) << "; ";
        c.require(ratio == eta * eta, "p_detected/p_operational == eta^2 at eta=" + n(eta));
        c.require(r.clone_fidelity_1 == ref.clone_fidelity_1 && r.clone_fidelity_2 == ref.clone_fidelity_2 &&
                      r.telenot_fidelity == ref.telenot_fidelity,
                  "fidelities bit-identical at eta=" + n(eta));
    }
}

void c6_dark_state(Check& c, std::vector<double>& closures) {
    for (Side side : {Side::Alice, Side::Bob}) {
        const char* name = side == Side::Alice ? "alice" : "bob";
        SystemParams p = default_params(side);
        p.gamma = 0.0;
        p.delta = 0.0;
        p.kappa = 0.0;
        const StateVector init = side == Side::Alice ? alice_initial(0.6, cplx(0.0, 0.8)) : bob_initial();
        double prev = 0.0;
        c.detail << name << " overlaps:";
        for (double t_total : {25.0, 50.0, 100.0, 200.0}) {
            PulseSchedule pulse;
            pulse.t_total = t_total;
            if (side == Side::Bob) pulse = matched_bob_pulse(pulse);
            const DynamicsReport d = evolve(init, p, pulse, t_total / 2000.0);
            closures.push_back(closure(d));
            const double theta = mixing_angle(side, p.g, pulse.omega(t_total));
            const double ov = overlap_modulus(d.final_state, adiabatic_target(init, side, theta));
            c.detail << " " << n(ov);
            c.require(ov >= prev - 1e-6, std::string(name) + " overlap non-decreasing in t_total");
            prev = ov;
            if (t_total == 200.0) {
                c.detail << " (excited max " << n(d.excited_pop_max) << ")";
                c.require(ov > 0.999, std::string(name) + " final overlap > 0.999");
                c.require(d.excited_pop_max < 1e-2, std::string(name) + " excited population < 1e-2");
            }
        }
        c.detail << "; ";
    }
}

void c7_pulse_shape(Check& c, std::vector<double>& closures) {
    for (Side side : {Side::Alice, Side::Bob}) {
        const char* name = side == Side::Alice ? "alice" : "bob";
        SystemParams p = default_params(side);
        p.gamma = 0.0;
        PulseSchedule pulse;
        if (side == Side::Bob) pulse = matched_bob_pulse(pulse);
        const StateVector init = side == Side::Alice ? alice_initial(1.0, 0.0) : bob_initial();
        const DynamicsReport d = evolve(init, p, pulse, 0.1);
        closures.push_back(closure(d));
        const PulseShape f = pulse_shape_analytic(p, pulse, d.pulse_shape.t);
        const double ov = pulse_overlap(d.pulse_shape, f);
        const double norm_err = std::abs(pulse_norm2(f) - (1.0 - std::exp(-emission_exponent(p, pulse, pulse.t_total))));
        c.detail << name << ": overlap " << n(ov) << ", norm error " << n(norm_err) << "; ";
        c.require(ov > 0.995, std::string(name) + " pulse overlap > 0.995");
        c.require(norm_err < 1e-6, std::string(name) + " analytic pulse norm");
    }
}

void c8_hom(Check& c) {
    const StateVector out = optics::beamsplitter(two_photons('H', 'H'), "A", "B", "1", "2");
    const Space& sp = out.space();
    const cplx cross = out.amplitude(sp.label({{path_mode_id("1", "H"), "1"},
                                               {path_mode_id("1", "V"), "0"},
                                               {path_mode_id("2", "H"), "1"},
                                               {path_mode_id("2", "V"), "0"}}));
    const StateVector singlet =
        (1.0 / std::numbers::sqrt2) * (two_photons('H', 'V') - two_photons('V', 'H'));
    const double p_singlet = optics::symmetric_project(singlet).raw.norm2();
    c.detail << "|cross amplitude| = " << n(std::abs(cross)) << ", singlet projection = " << n(p_singlet) << "; ";
    c.require(std::abs(cross) < 1e-12, "HH gives no coincidence across the splitter");
    c.require(p_singlet < 1e-24, "singlet has no symmetric component");
}

void c9_closure(Check& c, std::vector<double> closures) {
    ProtocolConfig cfg = default_config();
    cfg.mode = Mode::Dynamic;
    cfg.input = InputQubit(0.6, 0.8);
    auto add = [&](const CloneReport& r) {
        closures.push_back(closure(*r.alice_dynamics));
        closures.push_back(closure(*r.bob_dynamics));
    };
    add(run_dynamic(cfg));
    ProtocolConfig fast = cfg;
    fast.alice.pulse.t_total = fast.bob.pulse.t_total = 25.0;
    fast.dt = 0.025;
    add(run_dynamic(fast));
    add(run_dynamic(apply_sweep_param(cfg, "epsilon", 0.1)));
    double worst = 0.0;
    for (double x : closures) worst = std::max(worst, x);
    c.detail << closures.size() << " runs, max |emission + loss + residual - 1| = " << n(worst) << "; ";
    c.require(worst < 1e-8, "closure to 1e-8");
}

template <class F>
CriterionResult timed(int id, const std::string& name, double limit_s, F&& body) {
    CriterionResult r{id, name, false, "", 0.0};
    Check c;
    const auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0.0 && r.seconds > limit_s) {
        c.ok = false;
        c.detail << "FAILED: runtime above " << n(limit_s) << " s; ";
    }
    r.passed = c.ok;
    r.detail = c.detail.str();
    if (r.detail.size() >= 2) r.detail.resize(r.detail.size() - 2);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    auto push = [&](CriterionResult r) {
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    };
    std::vector<double> closures;
    push(timed(1, "heralded state matches reference", 1.0, [&](Check& c) { c1_heralded_state(c, seed); }));
    push(timed(2, "optimal fidelity constants", 5.0, [&](Check& c) { c2_optimal_constants(c, seed); }));
    push(timed(3, "optical projector equals P_123", 0.0, [&](Check& c) { c3_projector(c); }));
    push(timed(4, "success probability", 0.0, [&](Check& c) { c4_success_probability(c, seed); }));
    push(timed(5, "eta squared law", 0.0, [&](Check& c) { c5_eta_law(c, seed); }));
    push(timed(6, "dark-state tracking", 30.0, [&](Check& c) { c6_dark_state(c, closures); }));
    push(timed(7, "pulse shape", 0.0, [&](Check& c) { c7_pulse_shape(c, closures); }));
    push(timed(8, "two-photon interference", 0.0, [&](Check& c) { c8_hom(c); }));
    push(timed(9, "probability closure", 0.0, [&](Check& c) { c9_closure(c, closures); }));
    return out;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> first = run_criteria(seed, on_result);
    CriterionResult r10 = timed(10, "reproducible reports", 0.0, [&](Check& c) {
        const std::string a = acceptance_report(seed, first);
        const std::string b = acceptance_report(seed, run_criteria(seed));
        c.detail << "criteria report " << a.size() << " bytes " << (a == b ? "identical" : "DIFFERENT") << "; ";
        c.require(a == b, "identical criteria reports");

        ProtocolConfig cfg = default_config();
        cfg.mode = Mode::Dynamic;
        cfg.seed = seed;
        cfg.input = InputQubit(0.6, cplx(0.0, 0.8));
        cfg.detector = {0.1, 0.01, 1.0};
        auto serialize = [](const CloneReport& r) { return report_to_json(r).dump(2) + summary_csv(r); };
        const std::string ra = serialize(run(cfg));
        const std::string rb = serialize(run(cfg));
        c.detail << "seeded dynamic report " << ra.size() << " bytes " << (ra == rb ? "identical" : "DIFFERENT")
                 << "; ";
        c.require(ra == rb, "identical seeded dynamic reports");
    });
    if (on_result) on_result(r10);
    first.push_back(std::move(r10));
    return first;
}

std::string acceptance_report(std::uint64_t seed, const std::vector<CriterionResult>& results) {
    json j = {{"seed", seed}, {"criteria", json::array()}};
    bool all = true;
    for (const auto& r : results) {
        j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    j["all_passed"] = all;
    return j.dump(2) + "\n";
}

std::string format_result_line(const CriterionResult& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
    return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + " (" + buf +
           " s) " + r.detail;
}

}  // namespace clonesim
