#include "clonesim/adiabatic.hpp"

#include <algorithm>
#include <deque>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "clonesim/errors.hpp"
#include "clonesim/format.hpp"
#include "clonesim/photon_modes.hpp"

namespace clonesim {

namespace {

const std::vector<std::string> kAliceLevels = {"g_L", "g_R", "g_0", "e_L", "e_R"};
const std::vector<std::string> kBobLevels = {"g0'", "e_0", "g_L", "g_R"};

bool finite_all(std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

const char* side_name(Side s) { return s == Side::Alice ? "Alice" : "Bob"; }

Subsystem atom_subsystem(Side side) {
    return side == Side::Alice ? Subsystem{ids::kAtomA, kAliceLevels} : Subsystem{ids::kAtomB, kBobLevels};
}

}  // namespace

void SystemParams::validate() const {
    if (!finite_all({delta, gamma, g, kappa, modulation.epsilon, modulation.nu}))
        throw InvalidParameter("system parameters must be finite");
    if (gamma < 0.0) throw InvalidParameter("gamma must be >= 0");
    if (kappa < 0.0) throw InvalidParameter("kappa must be >= 0");
    if (!(g > 0.0)) throw InvalidParameter("g must be > 0");
    if (modulation.epsilon < 0.0 || modulation.epsilon >= 1.0)
        throw InvalidParameter("coupling modulation depth must satisfy 0 <= epsilon < 1");
}

SystemParams default_params(Side side) {
    SystemParams p;
    p.side = side;
    return p;
}

SystemParams coupling_modulation(const SystemParams& p, double epsilon, double nu) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw InvalidParameter("coupling modulation depth must satisfy 0 <= epsilon < 1");
    if (!std::isfinite(nu)) throw InvalidParameter("modulation frequency must be finite");
    SystemParams out = p;
    out.modulation = {epsilon, nu};
    return out;
}

const char* to_string(RampShape shape) {
    switch (shape) {
        case RampShape::SinSquared: return "sin2";
        case RampShape::Tanh: return "tanh";
        case RampShape::Linear: return "linear";
    }
    return "?";
}

RampShape ramp_shape_from_string(const std::string& name) {
    if (name == "sin2") return RampShape::SinSquared;
    if (name == "tanh") return RampShape::Tanh;
    if (name == "linear") return RampShape::Linear;
    throw InvalidParameter("unknown ramp shape '" + name + "' (expected sin2, tanh or linear)");
}

double PulseSchedule::omega(double t) const {
    if (t <= 0.0) return 0.0;
    const double tr = ramp_end();
    if (t >= tr) return omega_max;
    const double x = t / tr;
    switch (shape) {
        case RampShape::SinSquared: {
            const double s = std::sin(std::numbers::pi * x / 2.0);
            return omega_max * s * s;
        }
        case RampShape::Tanh: {
            constexpr double k = 3.0;
            return omega_max * (std::tanh(k * (2.0 * x - 1.0)) + std::tanh(k)) / (2.0 * std::tanh(k));
        }
        case RampShape::Linear: return omega_max * x;
    }
    return 0.0;
}

void PulseSchedule::validate() const {
    if (!finite_all({omega_max, t_total, hold_fraction})) throw InvalidParameter("pulse parameters must be finite");
    if (!(omega_max > 0.0)) throw InvalidParameter("omega_max must be > 0");
    if (!(t_total > 0.0)) throw InvalidParameter("t_total must be > 0");
    if (!(hold_fraction >= 0.0 && hold_fraction < 1.0)) throw InvalidParameter("hold_fraction must lie in [0,1)");
}

double mixing_angle(Side side, double g, double omega) {
    const double gg = side == Side::Alice ? g : std::numbers::sqrt2 * g;
    return std::atan2(omega, gg);
}

double mixing_angle(const SystemParams& p, const PulseSchedule& pulse, double t) {
    return mixing_angle(p.side, p.coupling(t), pulse.omega(t));
}

std::string ids::cavity_mode(Side side, char pol) {
    return std::string(side == Side::Alice ? "cavA." : "cavB.") + pol;
}

Space node_space(Side side, int max_photons) {
    return Space({atom_subsystem(side), occupation_subsystem(ids::cavity_mode(side, 'L'), max_photons),
                  occupation_subsystem(ids::cavity_mode(side, 'R'), max_photons)});
}

StateVector alice_initial(cplx a, cplx b) {
    const Space s = node_space(Side::Alice);
    const auto L = ids::cavity_mode(Side::Alice, 'L'), R = ids::cavity_mode(Side::Alice, 'R');
    return StateVector(s, {{s.label({{ids::kAtomA, "g_L"}, {L, "0"}, {R, "0"}}), a},
                           {s.label({{ids::kAtomA, "g_R"}, {L, "0"}, {R, "0"}}), b}});
}

StateVector bob_initial() {
    const Space s = node_space(Side::Bob);
    return StateVector::basis(
        s, {{ids::kAtomB, "g0'"}, {ids::cavity_mode(Side::Bob, 'L'), "0"}, {ids::cavity_mode(Side::Bob, 'R'), "0"}});
}

HamiltonianTerms hamiltonian_terms(Side side, int max_photons) {
    const Space space = node_space(side, max_photons);
    const Subsystem atom = atom_subsystem(side);
    const Subsystem mode_l = occupation_subsystem(ids::cavity_mode(side, 'L'), max_photons);
    const Subsystem mode_r = occupation_subsystem(ids::cavity_mode(side, 'R'), max_photons);
    auto sigma = [&](const char* to, const char* from) { return LinearOperator::transition(atom, to, from); };
    const LinearOperator a_l = LinearOperator::annihilation(mode_l);
    const LinearOperator a_r = LinearOperator::annihilation(mode_r);

    LinearOperator excited, drive, cavity;
    if (side == Side::Alice) {
        excited = sigma("e_L", "e_L") + sigma("e_R", "e_R");
        drive = sigma("e_L", "g_L") + sigma("e_R", "g_R");
        cavity = a_l * sigma("e_L", "g_0") + a_r * sigma("e_R", "g_0");
    } else {
        excited = sigma("e_0", "e_0");
        drive = sigma("e_0", "g0'");
        cavity = a_r * sigma("e_0", "g_L") + a_l * sigma("e_0", "g_R");
    }
    drive = drive + drive.adjoint();
    cavity = cavity + cavity.adjoint();
    const LinearOperator photons = LinearOperator::number(mode_l) + LinearOperator::number(mode_r);
    return {extend(excited, space), extend(drive, space), extend(cavity, space), extend(photons, space)};
}

namespace {

LinearOperator node_hamiltonian(Side expected, double t, const SystemParams& p, const PulseSchedule& pulse) {
    if (p.side != expected)
        throw InvalidParameter(std::string("parameters are for ") + side_name(p.side) + ", expected " +
                               side_name(expected));
    const auto terms = hamiltonian_terms(expected);
    return cplx{-p.delta, -p.gamma / 2.0} * terms.excited + cplx{pulse.omega(t), 0.0} * terms.drive +
           cplx{p.coupling(t), 0.0} * terms.cavity;
}

}  // namespace

LinearOperator hamiltonian_alice(double t, const SystemParams& p, const PulseSchedule& pulse) {
    return node_hamiltonian(Side::Alice, t, p, pulse);
}

LinearOperator hamiltonian_bob(double t, const SystemParams& p, const PulseSchedule& pulse) {
    return node_hamiltonian(Side::Bob, t, p, pulse);
}

LinearOperator effective_hamiltonian(double t, const SystemParams& p, const PulseSchedule& pulse) {
    const auto terms = hamiltonian_terms(p.side);
    return node_hamiltonian(p.side, t, p, pulse) + cplx{0.0, -p.kappa / 2.0} * terms.photons;
}

std::pair<StateVector, StateVector> alice_dark_states(double theta) {
    const Space s = node_space(Side::Alice);
    const auto L = ids::cavity_mode(Side::Alice, 'L'), R = ids::cavity_mode(Side::Alice, 'R');
    const double c = std::cos(theta), sn = std::sin(theta);
    StateVector d1(s, {{s.label({{ids::kAtomA, "g_L"}, {L, "0"}, {R, "0"}}), c},
                       {s.label({{ids::kAtomA, "g_0"}, {L, "1"}, {R, "0"}}), -sn}});
    StateVector d2(s, {{s.label({{ids::kAtomA, "g_R"}, {L, "0"}, {R, "0"}}), c},
                       {s.label({{ids::kAtomA, "g_0"}, {L, "0"}, {R, "1"}}), -sn}});
    return {std::move(d1), std::move(d2)};
}

StateVector bob_dark_state(double theta) {
    const Space s = node_space(Side::Bob);
    const auto L = ids::cavity_mode(Side::Bob, 'L'), R = ids::cavity_mode(Side::Bob, 'R');
    const double c = std::cos(theta), sn = std::sin(theta) / std::numbers::sqrt2;
    return StateVector(s, {{s.label({{ids::kAtomB, "g0'"}, {L, "0"}, {R, "0"}}), c},
                           {s.label({{ids::kAtomB, "g_L"}, {L, "0"}, {R, "1"}}), -sn},
                           {s.label({{ids::kAtomB, "g_R"}, {L, "1"}, {R, "0"}}), -sn}});
}

std::vector<StateVector> dark_states(const SystemParams& p, const PulseSchedule& pulse, double t) {
    const double theta = mixing_angle(p, pulse, t);
    if (p.side == Side::Alice) {
        auto [d1, d2] = alice_dark_states(theta);
        return {std::move(d1), std::move(d2)};
    }
    return {bob_dark_state(theta)};
}

StateVector adiabatic_target(const StateVector& initial, Side side, double theta) {
    if (side == Side::Bob) return cplx{inner(bob_dark_state(0.0), initial)} * bob_dark_state(theta);
    const auto [d1_0, d2_0] = alice_dark_states(0.0);
    const auto [d1, d2] = alice_dark_states(theta);
    return inner(d1_0, initial) * d1 + inner(d2_0, initial) * d2;
}

// ------------------------------------------------------------------ evolve

namespace {

int total_occupation(const Space& space, const BasisLabel& l, const std::vector<std::size_t>& mode_pos) {
    int n = 0;
    for (auto k : mode_pos) n += std::stoi(space[k].levels[l[k]]);
    return n;
}

// Labels reachable from `seed` under the nonzero pattern of `ops`.
std::vector<BasisLabel> reachable(const std::vector<const LinearOperator*>& ops, const std::set<BasisLabel>& seed) {
    std::map<BasisLabel, std::vector<BasisLabel>> adj;
    for (const auto* op : ops)
        for (const auto& [rc, _] : op->entries()) {
            adj[rc.second].push_back(rc.first);
            adj[rc.first].push_back(rc.second);
        }
    std::set<BasisLabel> seen(seed.begin(), seed.end());
    std::deque<BasisLabel> queue(seed.begin(), seed.end());
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        auto it = adj.find(cur);
        if (it == adj.end()) continue;
        for (const auto& nxt : it->second)
            if (seen.insert(nxt).second) queue.push_back(nxt);
    }
    return {seen.begin(), seen.end()};
}

void check_no_leakage(Side side, const std::set<BasisLabel>& seed) {
    const auto wide = hamiltonian_terms(side, 2);
    const Space ws = node_space(side, 2);
    for (const auto& l : reachable({&wide.excited, &wide.drive, &wide.cavity, &wide.photons}, seed))
        for (std::size_t k = 1; k < ws.size(); ++k)
            if (l[k] > 1)
                throw LeakageError("dynamics would populate " + ws.to_string(l) +
                                   ", outside the one-photon truncation");
}

}  // namespace

DynamicsReport evolve(const StateVector& initial, const SystemParams& p, const PulseSchedule& pulse, double dt) {
    p.validate();
    pulse.validate();
    const Space space = node_space(p.side);
    if (!(initial.space() == space)) throw SpaceMismatch("initial state does not live in the node space");
    if (std::abs(initial.norm2() - 1.0) > 1e-10) throw InvalidParameter("initial state must be normalized");
    if (!(dt > 0.0)) throw StepSizeError("dt must be > 0");
    if (dt > pulse.t_total / 1000.0 * (1.0 + 1e-12))
        throw StepSizeError("output step dt = " + format_number(dt) + " exceeds t_total/1000 = " +
                            format_number(pulse.t_total / 1000.0));

    std::set<BasisLabel> seed;
    for (const auto& [l, _] : initial.amplitudes()) seed.insert(l);
    check_no_leakage(p.side, seed);

    const auto terms = hamiltonian_terms(p.side);
    const auto basis = reachable({&terms.excited, &terms.drive, &terms.cavity, &terms.photons}, seed);
    const auto n = static_cast<Eigen::Index>(basis.size());
    const Eigen::MatrixXcd drive = to_dense(terms.drive, basis);
    const Eigen::MatrixXcd cavity = to_dense(terms.cavity, basis);
    const Eigen::VectorXd excited = to_dense(terms.excited, basis).diagonal().real();
    const Eigen::VectorXd photons = to_dense(terms.photons, basis).diagonal().real();

    const cplx excited_shift{-p.delta, -p.gamma / 2.0};
    const Eigen::VectorXcd diag =
        excited.cast<cplx>() * excited_shift + photons.cast<cplx>() * cplx{0.0, -p.kappa / 2.0};

    // State plus two accumulators: emitted probability and spontaneous loss.
    struct Deriv {
        Eigen::VectorXcd dpsi;
        double emission;
        double spont;
    };
    auto rhs = [&](double t, const Eigen::VectorXcd& psi) {
        const double om = pulse.omega(t);
        const double gt = p.coupling(t);
        Eigen::VectorXcd hpsi = om * (drive * psi) + gt * (cavity * psi) + diag.cwiseProduct(psi);
        const Eigen::VectorXd pop = psi.cwiseAbs2();
        return Deriv{cplx{0.0, -1.0} * hpsi, p.kappa * photons.dot(pop), p.gamma * excited.dot(pop)};
    };

    const double g_max = p.g * (1.0 + p.modulation.epsilon);
    const double h_max = 1.0 / (50.0 * std::max({g_max, pulse.omega_max, p.kappa, std::abs(p.delta)}));

    // Output grid.
    std::vector<double> grid;
    const auto intervals = static_cast<std::size_t>(std::ceil(pulse.t_total / dt - 1e-9));
    for (std::size_t k = 0; k <= intervals; ++k) grid.push_back(std::min(static_cast<double>(k) * dt, pulse.t_total));

    // Emission channels: every reachable label with exactly one photon.
    std::vector<std::size_t> mode_pos = {1, 2};
    DynamicsReport report;
    report.side = p.side;
    std::vector<std::pair<Eigen::Index, std::size_t>> channel_of;  // basis index -> channel
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& l = basis[static_cast<std::size_t>(i)];
        if (total_occupation(space, l, mode_pos) != 1) continue;
        const std::size_t k = l[1] == 1 ? 1 : 2;
        BasisLabel residual = l;
        residual[k] = 0;
        report.channels.push_back({space[k].id, residual, {}});
        channel_of.emplace_back(i, report.channels.size() - 1);
    }
    const double sqrt_kappa = std::sqrt(p.kappa);
    auto record = [&](const Eigen::VectorXcd& psi) {
        for (const auto& [i, c] : channel_of) report.channels[c].amplitude.push_back(sqrt_kappa * psi[i]);
    };

    Eigen::VectorXcd psi = to_dense(initial, basis);
    double emission = 0.0, spont = 0.0;
    double norm2 = psi.squaredNorm();
    report.excited_pop_max = excited.dot(psi.cwiseAbs2());
    record(psi);
    double h_used = 0.0;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double span = grid[k + 1] - grid[k];
        const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(span / h_max - 1e-9)));
        const double h = span / static_cast<double>(m);
        h_used = std::max(h_used, h);
        for (std::size_t j = 0; j < m; ++j) {
            const double t = grid[k] + static_cast<double>(j) * h;
            const Deriv k1 = rhs(t, psi);
            const Deriv k2 = rhs(t + h / 2, psi + (h / 2) * k1.dpsi);
            const Deriv k3 = rhs(t + h / 2, psi + (h / 2) * k2.dpsi);
            const Deriv k4 = rhs(t + h, psi + h * k3.dpsi);
            psi += (h / 6) * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
            emission += (h / 6) * (k1.emission + 2.0 * k2.emission + 2.0 * k3.emission + k4.emission);
            spont += (h / 6) * (k1.spont + 2.0 * k2.spont + 2.0 * k3.spont + k4.spont);
            const double next = psi.squaredNorm();
            if (next > norm2 + 1e-10)
                throw IntegratorFault("norm increased from " + format_number(norm2) + " to " + format_number(next) +
                                      " at t = " + format_number(t + h));
            norm2 = next;
            report.excited_pop_max = std::max(report.excited_pop_max, excited.dot(psi.cwiseAbs2()));
            ++report.steps;
        }
        record(psi);
    }

    std::map<BasisLabel, cplx> final_amps;
    for (Eigen::Index i = 0; i < n; ++i) final_amps[basis[static_cast<std::size_t>(i)]] = psi[i];
    report.final_state = StateVector(space, std::move(final_amps));
    report.emission_prob = emission;
    report.spont_loss = spont;
    report.residual_norm2 = norm2;
    report.step = h_used;
    report.adiabaticity_warning = report.excited_pop_max > kExcitedPopulationWarning;

    // Scalar envelope: channel amplitudes projected on their dominant
    // (time-integrated) pattern.
    const auto w = quadrature_weights(grid);
    std::vector<cplx> pattern(report.channels.size());
    double pattern_norm2 = 0.0;
    for (std::size_t c = 0; c < report.channels.size(); ++c) {
        for (std::size_t k = 0; k < grid.size(); ++k) pattern[c] += w[k] * report.channels[c].amplitude[k];
        pattern_norm2 += std::norm(pattern[c]);
    }
    report.pulse_shape.t = grid;
    report.pulse_shape.f.assign(grid.size(), cplx{});
    if (pattern_norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(pattern_norm2);
        for (std::size_t c = 0; c < report.channels.size(); ++c)
            for (std::size_t k = 0; k < grid.size(); ++k)
                report.pulse_shape.f[k] += std::conj(pattern[c] * inv) * report.channels[c].amplitude[k];
    }
    return report;
}

// ---------------------------------------------------------- pulse shapes

double emission_exponent(const SystemParams& p, const PulseSchedule& pulse, double t) {
    if (t <= 0.0 || p.kappa == 0.0) return 0.0;
    auto sin2 = [&](double tau) {
        const double s = std::sin(mixing_angle(p, pulse, tau));
        return s * s;
    };
    using boost::math::quadrature::gauss_kronrod;
    // Split at the end of the ramp, where the envelope has a kink in its
    // higher derivatives.
    const double tr = std::min(pulse.ramp_end(), t);
    double total = gauss_kronrod<double, 31>::integrate(sin2, 0.0, tr, 20, 1e-14);
    if (t > tr) total += gauss_kronrod<double, 31>::integrate(sin2, tr, t, 20, 1e-14);
    return p.kappa * total;
}

PulseShape pulse_shape_analytic(const SystemParams& p, const PulseSchedule& pulse, const std::vector<double>& grid) {
    if (grid.empty() || grid.front() != 0.0) throw InvalidParameter("pulse grid must start at 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw InvalidParameter("pulse grid must be strictly increasing");
    PulseShape out;
    out.t = grid;
    out.f.reserve(grid.size());
    const double sqrt_kappa = std::sqrt(p.kappa);
    double exponent = 0.0;
    using boost::math::quadrature::gauss_kronrod;
    auto sin2 = [&](double tau) {
        const double s = std::sin(mixing_angle(p, pulse, tau));
        return s * s;
    };
    const double tr = pulse.ramp_end();
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (k > 0 && p.kappa != 0.0) {
            const double a = grid[k - 1], b = grid[k];
            if (a < tr && b > tr) {
                exponent += p.kappa * (gauss_kronrod<double, 15>::integrate(sin2, a, tr, 10, 1e-14) +
                                       gauss_kronrod<double, 15>::integrate(sin2, tr, b, 10, 1e-14));
            } else {
                exponent += p.kappa * gauss_kronrod<double, 15>::integrate(sin2, a, b, 10, 1e-14);
            }
        }
        const double s = std::sin(mixing_angle(p, pulse, grid[k]));
        out.f.emplace_back(sqrt_kappa * s * std::exp(-exponent / 2.0), 0.0);
    }
    return out;
}

std::vector<double> quadrature_weights(const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    const double h = grid[1] - grid[0];
    bool uniform = true;
    for (std::size_t k = 1; k < n; ++k)
        if (std::abs((grid[k] - grid[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) uniform = false;
    if (!uniform || n < 3) {
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double hk = grid[k + 1] - grid[k];
            w[k] += hk / 2;
            w[k + 1] += hk / 2;
        }
        return w;
    }
    // Composite Simpson over an even number of intervals; a trailing odd
    // interval is closed with the trapezoid rule.
    const std::size_t simpson_end = (n - 1) % 2 == 0 ? n - 1 : n - 2;
    for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) {
        w[k] += h / 3;
        w[k + 1] += 4 * h / 3;
        w[k + 2] += h / 3;
    }
    if (simpson_end != n - 1) {
        const double hk = grid[n - 1] - grid[n - 2];
        w[n - 2] += hk / 2;
        w[n - 1] += hk / 2;
    }
    return w;
}

double pulse_norm2(const PulseShape& f) {
    const auto w = quadrature_weights(f.t);
    double s = 0.0;
    for (std::size_t k = 0; k < f.t.size(); ++k) s += w[k] * std::norm(f.f[k]);
    return s;
}

double pulse_overlap(const PulseShape& fa, const PulseShape& fb) {
    if (fa.t.size() != fb.t.size() || fa.f.size() != fa.t.size() || fb.f.size() != fb.t.size())
        throw InvalidParameter("pulse overlap needs shapes on a common grid");
    for (std::size_t k = 0; k < fa.t.size(); ++k)
        if (std::abs(fa.t[k] - fb.t[k]) > 1e-12 * std::max(1.0, std::abs(fa.t[k])))
            throw InvalidParameter("pulse overlap needs shapes on a common grid");
    const auto w = quadrature_weights(fa.t);
    cplx cross{};
    double na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < fa.t.size(); ++k) {
        cross += w[k] * std::conj(fa.f[k]) * fb.f[k];
        na += w[k] * std::norm(fa.f[k]);
        nb += w[k] * std::norm(fb.f[k]);
    }
    if (!(na > 0.0) || !(nb > 0.0)) throw InvalidParameter("pulse overlap of a zero-norm shape");
    return std::clamp(std::norm(cross) / (na * nb), 0.0, 1.0);
}

StateVector emitted_photon_state(const DynamicsReport& report, const std::string& path) {
    const Space node = node_space(report.side);
    const Subsystem atom = atom_subsystem(report.side);
    auto subs = path_subsystems(path, "L", "R");
    subs.push_back(atom);
    const Space out(subs);
    const std::string lid = path_mode_id(path, "L"), rid = path_mode_id(path, "R");

    const auto& f = report.pulse_shape;
    const auto w = quadrature_weights(f.t);
    const double env_norm = std::sqrt(std::max(pulse_norm2(f), 0.0));
    if (!(env_norm > 0.0)) throw DegenerateBranch("no photon was emitted");

    std::map<BasisLabel, cplx> amps;
    for (const auto& ch : report.channels) {
        cplx proj{};
        for (std::size_t k = 0; k < f.t.size(); ++k) proj += w[k] * std::conj(f.f[k] / env_norm) * ch.amplitude[k];
        const bool left = ch.mode == ids::cavity_mode(report.side, 'L');
        const std::string atom_level = atom.levels[ch.residual[node.index_of(atom.id)]];
        const BasisLabel l =
            out.label({{atom.id, atom_level}, {lid, left ? "1" : "0"}, {rid, left ? "0" : "1"}});
        amps[l] += proj;
    }
    return normalize(StateVector(out, std::move(amps))).state;
}

std::string pulse_csv(const PulseShape& f) {
    std::ostringstream os;
    os << "t,re_f,im_f\n";
    for (std::size_t k = 0; k < f.t.size(); ++k)
        os << format_number(f.t[k]) << ',' << format_number(f.f[k].real()) << ',' << format_number(f.f[k].imag())
           << '\n';
    return os.str();
}

}  // namespace clonesim
