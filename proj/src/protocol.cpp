#include "clonesim/protocol.hpp"

#include <cmath>
#include <future>
#include <numbers>

#include "clonesim/errors.hpp"
#include "clonesim/format.hpp"
#include "clonesim/photon_modes.hpp"
#include "clonesim/rng.hpp"

namespace clonesim {

const char* to_string(Mode m) { return m == Mode::Analytic ? "analytic" : "dynamic"; }

Mode mode_from_string(const std::string& name) {
    if (name == "analytic") return Mode::Analytic;
    if (name == "dynamic") return Mode::Dynamic;
    throw ConfigError("unknown mode '" + name + "' (expected analytic or dynamic)");
}

void ProtocolConfig::validate() const {
    if (alice.params.side != Side::Alice || bob.params.side != Side::Bob)
        throw ConfigError("alice/bob parameter blocks carry the wrong side");
    alice.params.validate();
    bob.params.validate();
    alice.pulse.validate();
    bob.pulse.validate();
    if (!(detector.eta >= 0.0 && detector.eta <= 1.0)) throw ConfigError("detector.eta must lie in [0,1]");
    if (!(detector.dark_rate >= 0.0) || !std::isfinite(detector.dark_rate))
        throw ConfigError("detector.dark_rate must be a finite number >= 0");
    if (!(detector.window > 0.0) || !std::isfinite(detector.window))
        throw ConfigError("detector.window must be a finite number > 0");
    if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
    if (mc_trials == 0) throw ConfigError("mc_trials must be positive");
}

PulseSchedule matched_bob_pulse(const PulseSchedule& alice) {
    PulseSchedule b = alice;
    b.omega_max = std::numbers::sqrt2 * alice.omega_max;
    return b;
}

ProtocolConfig default_config() {
    ProtocolConfig cfg;
    cfg.alice = {default_params(Side::Alice), PulseSchedule{}};
    cfg.bob = {default_params(Side::Bob), matched_bob_pulse(PulseSchedule{})};
    return cfg;
}

namespace {

const std::set<std::string> kClone1 = {path_mode_id("3", "H"), path_mode_id("3", "V")};
const std::set<std::string> kClone2 = {path_mode_id("4", "H"), path_mode_id("4", "V")};
const std::set<std::string> kAtomB = {ids::kAtomB};

// a|H> + b|V> on a path, as a one-photon occupation state.
StateVector clone_target(const InputQubit& q, std::string_view path) {
    const Space sp(path_subsystems(path, "H", "V"));
    const auto h = path_mode_id(path, "H"), v = path_mode_id(path, "V");
    return StateVector(sp, {{sp.label({{h, "1"}, {v, "0"}}), q.a()}, {sp.label({{h, "0"}, {v, "1"}}), q.b()}});
}

StateVector telenot_target(const InputQubit& q, const Space& atom_space) {
    return StateVector(atom_space, {{atom_space.label({{ids::kAtomB, "g_L"}}), std::conj(q.b())},
                                    {atom_space.label({{ids::kAtomB, "g_R"}}), -std::conj(q.a())}});
}

void score(CloneReport& r) {
    r.clone_fidelity_1 = fidelity_pure(partial_trace(r.post_rho, kClone1), clone_target(r.input, "3"));
    r.clone_fidelity_2 = fidelity_pure(partial_trace(r.post_rho, kClone2), clone_target(r.input, "4"));
    r.telenot_fidelity = telenot_check(r, r.input);
}

// Cavity photons leave the node on path `path` and pass a quarter-wave plate.
StateVector leak_to_path(const StateVector& node_state, Side side, std::string_view path) {
    const StateVector moved = rename_subsystems(node_state, {{ids::cavity_mode(side, 'L'), path_mode_id(path, "L")},
                                                             {ids::cavity_mode(side, 'R'), path_mode_id(path, "R")}});
    return optics::qwp_relabel(moved, path);
}

StateVector drop_alice_atom(const StateVector& s) { return project_out(s, ids::kAtomA, "g_0"); }

double coincidence_mass(const optics::PhotonConfigs& configs) {
    double p = 0.0;
    for (const auto& [c, w] : configs)
        if (optics::is_coincidence(c)) p += w;
    return p;
}

}  // namespace

StateVector pre_interference_state(const InputQubit& q) {
    constexpr double kFullTransfer = std::numbers::pi / 2;
    const StateVector alice =
        leak_to_path(adiabatic_target(alice_initial(q.a(), q.b()), Side::Alice, kFullTransfer), Side::Alice, "A");
    const StateVector bob = optics::hwp0(leak_to_path(bob_dark_state(kFullTransfer), Side::Bob, "B"), "B");
    return tensor(alice, bob);
}

CloneReport run_analytic(const ProtocolConfig& cfg) {
    CloneReport r;
    r.mode = Mode::Analytic;
    r.input = cfg.input;
    const StateVector phi = pre_interference_state(cfg.input);
    const auto outcome = optics::symmetric_project(phi);
    if (!outcome.heralded) throw DegenerateBranch("symmetric projection of the emitted photons vanished");
    r.post_state = drop_alice_atom(outcome.projected_state);
    r.post_rho = DensityMatrix::from_pure(*r.post_state);
    r.detection = optics::coincidence_probability_detailed(phi);
    r.configs = r.detection.configs;
    r.p_symmetric = r.detection.p_symmetric;
    r.p_operational = r.detection.p_operational;
    r.p_detected = r.p_operational;
    r.overlap_visibility = 1.0;
    score(r);
    return r;
}

CloneReport run_dynamic(const ProtocolConfig& cfg) {
    cfg.validate();
    if (cfg.alice.pulse.t_total != cfg.bob.pulse.t_total)
        throw ConfigError("alice.t_total and bob.t_total must match so both pulses share one time grid");
    CloneReport r;
    r.mode = Mode::Dynamic;
    r.input = cfg.input;

    DynamicsReport da = evolve(alice_initial(cfg.input.a(), cfg.input.b()), cfg.alice.params, cfg.alice.pulse, cfg.dt);
    DynamicsReport db = evolve(bob_initial(), cfg.bob.params, cfg.bob.pulse, cfg.dt);
    for (const auto* d : {&da, &db}) {
        const char* who = d->side == Side::Alice ? "alice" : "bob";
        if (d->emission_prob < cfg.emission_floor)
            r.warnings.push_back(std::string(who) + ": emission probability " + format_number(d->emission_prob) +
                                 " is below the floor " + format_number(cfg.emission_floor) +
                                 "; the protocol is degenerate");
        else if (d->emission_prob < 0.99)
            r.warnings.push_back(std::string(who) + ": emission probability " + format_number(d->emission_prob) +
                                 " < 0.99");
        if (d->adiabaticity_warning)
            r.warnings.push_back(std::string(who) + ": excited-state population reached " +
                                 format_number(d->excited_pop_max) + " (adiabaticity violated)");
    }

    const StateVector alice = optics::qwp_relabel(emitted_photon_state(da, "A"), "A");
    const StateVector bob = optics::hwp0(optics::qwp_relabel(emitted_photon_state(db, "B"), "B"), "B");
    const StateVector phi = tensor(alice, bob);

    const double vis = pulse_overlap(da.pulse_shape, db.pulse_shape);
    r.overlap_visibility = vis;
    r.detection = optics::coincidence_probability_detailed(phi);
    r.p_symmetric = r.detection.p_symmetric;

    const optics::PhotonConfigs dist = optics::distinguishable_configs();
    for (const auto& [c, w] : r.detection.configs) r.configs[c] += vis * w;
    for (const auto& [c, w] : dist) r.configs[c] += (1.0 - vis) * w;
    const double p_int = vis * r.detection.p_operational;
    const double p_dist = (1.0 - vis) * coincidence_mass(dist);
    r.p_operational = p_int + p_dist;
    r.p_detected = r.p_operational;

    const auto outcome = optics::symmetric_project(phi);
    if (!outcome.heralded) throw DegenerateBranch("symmetric projection of the emitted photons vanished");
    r.post_state = drop_alice_atom(outcome.projected_state);
    DensityMatrix rho = DensityMatrix::from_pure(*r.post_state);
    if (p_dist > 0.0) {
        // Distinguishable photons reach the two heralding detectors without
        // interfering, in either order.
        const StateVector straight = drop_alice_atom(rename_subsystems(
            phi, {{path_mode_id("A", "H"), path_mode_id("3", "H")}, {path_mode_id("A", "V"), path_mode_id("3", "V")},
                  {path_mode_id("B", "H"), path_mode_id("4", "H")}, {path_mode_id("B", "V"), path_mode_id("4", "V")}}));
        const StateVector swapped = drop_alice_atom(rename_subsystems(
            phi, {{path_mode_id("A", "H"), path_mode_id("4", "H")}, {path_mode_id("A", "V"), path_mode_id("4", "V")},
                  {path_mode_id("B", "H"), path_mode_id("3", "H")}, {path_mode_id("B", "V"), path_mode_id("3", "V")}}));
        const DensityMatrix rho_dist =
            0.5 * DensityMatrix::from_pure(straight) + 0.5 * DensityMatrix::from_pure(swapped);
        rho = (p_int / r.p_operational) * rho + (p_dist / r.p_operational) * rho_dist;
    }
    r.post_rho = std::move(rho);
    r.alice_dynamics = std::move(da);
    r.bob_dynamics = std::move(db);
    score(r);
    return r;
}

namespace {

// Maximally mixed polarization of photons 3,4 times a maximally mixed atom B
// qubit: what a herald triggered by dark counts leaves behind.
DensityMatrix false_herald_state(const Space& space) {
    MatrixEntries e;
    for (const char* p3 : {"H", "V"})
        for (const char* p4 : {"H", "V"})
            for (const char* atom : {"g_L", "g_R"}) {
                LabelFactors f = {{ids::kAtomB, atom}};
                for (const char* pol : {"H", "V"}) {
                    f.emplace_back(path_mode_id("3", pol), std::string(pol) == p3 ? "1" : "0");
                    f.emplace_back(path_mode_id("4", pol), std::string(pol) == p4 ? "1" : "0");
                }
                const BasisLabel l = space.label(f);
                e[{l, l}] = 1.0 / 8.0;
            }
    return DensityMatrix(space, std::move(e));
}

double click_probability(int photons, double eta, double p_dark) {
    return 1.0 - std::pow(1.0 - eta, photons) * (1.0 - p_dark);
}

}  // namespace

CloneReport detector_model(const CloneReport& report, double eta, double dark_rate, double window,
                           std::uint64_t seed, std::size_t trials) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0,1]");
    if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate)) throw InvalidParameter("dark_rate must be >= 0");
    if (!(window > 0.0) || !std::isfinite(window)) throw InvalidParameter("window must be > 0");
    CloneReport r = report;
    r.detector = {eta, dark_rate, window};
    auto& st = r.detector_stats;
    st = {};
    st.p_dark = -std::expm1(-dark_rate * window);
    if (dark_rate * window > 0.2)
        r.warnings.push_back("dark_rate*window = " + format_number(dark_rate * window) +
                             " is not small; the Poisson false-coincidence estimate is crude");

    // Closed form over photon-number configurations.
    double false_mass = 0.0;
    if (st.p_dark > 0.0) {
        for (const auto& [c, w] : r.configs) {
            std::array<double, 4> q{};
            for (int i = 0; i < 4; ++i) q[i] = click_probability(c[i], eta, st.p_dark);
            const double pair12 = q[0] * q[1], pair34 = q[2] * q[3];
            const double herald = pair12 + pair34 - pair12 * pair34;
            const bool split = c == optics::DetectorCounts{1, 1, 0, 0} || c == optics::DetectorCounts{0, 0, 1, 1};
            false_mass += w * (herald - (split ? eta * eta : 0.0));
        }
    }
    st.false_coincidences = false_mass;
    r.p_detected = r.p_operational * (eta * eta) + false_mass;
    st.false_fraction = r.p_detected > 0.0 ? false_mass / r.p_detected : 0.0;

    // Monte Carlo over the same configurations.
    Rng rng(seed);
    std::vector<std::pair<double, optics::DetectorCounts>> cumulative;
    double acc = 0.0;
    for (const auto& [c, w] : r.configs) {
        acc += w;
        cumulative.emplace_back(acc, c);
    }
    std::size_t heralds = 0, false_heralds = 0;
    for (std::size_t t = 0; t < trials && !cumulative.empty(); ++t) {
        const double u = rng.uniform() * acc;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u,
                                   [](const auto& e, double v) { return e.first <= v; });
        if (it == cumulative.end()) --it;
        const auto& c = it->second;
        std::array<int, 4> detected{};
        std::array<bool, 4> click{};
        for (int i = 0; i < 4; ++i) {
            for (int k = 0; k < c[i]; ++k) detected[i] += rng.bernoulli(eta) ? 1 : 0;
            const bool dark = rng.bernoulli(st.p_dark);
            click[i] = detected[i] > 0 || dark;
        }
        const bool herald = (click[0] && click[1]) || (click[2] && click[3]);
        if (!herald) continue;
        ++heralds;
        const bool genuine = (c == optics::DetectorCounts{1, 1, 0, 0} && detected[0] == 1 && detected[1] == 1) ||
                             (c == optics::DetectorCounts{0, 0, 1, 1} && detected[2] == 1 && detected[3] == 1);
        if (!genuine) ++false_heralds;
    }
    st.trials = trials;
    st.p_detected_mc = trials > 0 ? static_cast<double>(heralds) / static_cast<double>(trials) : 0.0;
    if (heralds > 0) {
        const double f = static_cast<double>(false_heralds) / static_cast<double>(heralds);
        st.false_fraction_mc = f;
        st.false_fraction_mc_sigma = std::sqrt(std::max(f * (1.0 - f), 1.0 / static_cast<double>(heralds)) /
                                               static_cast<double>(heralds));
    }

    if (st.false_fraction > 0.0) {
        r.post_rho = (1.0 - st.false_fraction) * r.post_rho + st.false_fraction * false_herald_state(r.post_rho.space());
        score(r);
    }
    return r;
}

double telenot_check(const CloneReport& report, const InputQubit& q) {
    const DensityMatrix rho_b = partial_trace(report.post_rho, kAtomB);
    return fidelity_pure(rho_b, telenot_target(q, rho_b.space()));
}

CloneReport run(const ProtocolConfig& cfg) {
    cfg.validate();
    const CloneReport base = cfg.mode == Mode::Analytic ? run_analytic(cfg) : run_dynamic(cfg);
    return detector_model(base, cfg.detector.eta, cfg.detector.dark_rate, cfg.detector.window, cfg.seed,
                          cfg.mc_trials);
}

const std::vector<std::string>& sweepable_params() {
    static const std::vector<std::string> params = {
        "t_total", "eta", "dark_rate", "window", "epsilon", "nu", "kappa", "gamma", "delta",
        "alice.omega_max", "bob.omega_max", "omega_max"};
    return params;
}

ProtocolConfig apply_sweep_param(const ProtocolConfig& base, const std::string& param, double value) {
    ProtocolConfig c = base;
    auto both = [&](auto&& f) {
        f(c.alice);
        f(c.bob);
    };
    if (param == "t_total") {
        both([&](NodeConfig& n) { n.pulse.t_total = value; });
    } else if (param == "eta") {
        c.detector.eta = value;
    } else if (param == "dark_rate") {
        c.detector.dark_rate = value;
    } else if (param == "window") {
        c.detector.window = value;
    } else if (param == "epsilon") {
        both([&](NodeConfig& n) { n.params.modulation.epsilon = value; });
    } else if (param == "nu") {
        both([&](NodeConfig& n) { n.params.modulation.nu = value; });
    } else if (param == "kappa") {
        both([&](NodeConfig& n) { n.params.kappa = value; });
    } else if (param == "gamma") {
        both([&](NodeConfig& n) { n.params.gamma = value; });
    } else if (param == "delta") {
        both([&](NodeConfig& n) { n.params.delta = value; });
    } else if (param == "alice.omega_max") {
        c.alice.pulse.omega_max = value;
    } else if (param == "bob.omega_max") {
        c.bob.pulse.omega_max = value;
    } else if (param == "omega_max") {
        c.alice.pulse.omega_max = value;
        c.bob.pulse.omega_max = std::numbers::sqrt2 * value;
    } else {
        throw ConfigError("parameter '" + param + "' is not sweepable");
    }
    return c;
}

std::vector<SweepPoint> run_sweep(const ProtocolConfig& base, const std::string& param,
                                  const std::vector<double>& values) {
    std::vector<ProtocolConfig> cfgs;
    for (double v : values) cfgs.push_back(apply_sweep_param(base, param, v));
    std::vector<std::future<CloneReport>> jobs;
    for (const auto& c : cfgs) jobs.push_back(std::async(std::launch::async, [c] { return run(c); }));
    std::vector<SweepPoint> out;
    for (std::size_t i = 0; i < jobs.size(); ++i) out.push_back({i, values[i], jobs[i].get()});
    return out;
}

}  // namespace clonesim
