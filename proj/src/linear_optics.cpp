#include "clonesim/linear_optics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "clonesim/errors.hpp"
#include "clonesim/photon_modes.hpp"

namespace clonesim::optics {

namespace {

constexpr std::array<const char*, 2> kLinear = {"H", "V"};

int occupation(const Space& space, std::size_t k, const BasisLabel& l) { return std::stoi(space[k].levels[l[k]]); }

int max_occupation(const Subsystem& s) { return static_cast<int>(s.levels.size()) - 1; }

std::size_t require_mode(const Space& space, std::string_view path, std::string_view pol) {
    const auto id = path_mode_id(path, pol);
    auto k = space.find(id);
    if (!k) throw UnknownSubsystem("state has no photon mode '" + id + "'");
    return *k;
}

}  // namespace

StateVector qwp_relabel(const StateVector& s, std::string_view path) {
    const Space& sp = s.space();
    const auto kl = require_mode(sp, path, "L"), kr = require_mode(sp, path, "R");
    for (const auto& [l, a] : s.amplitudes())
        if (occupation(sp, kl, l) + occupation(sp, kr, l) > 1)
            throw InvalidParameter("quarter-wave plate relabeling needs at most one photon on path '" +
                                   std::string(path) + "'");
    return rename_subsystems(s, {{path_mode_id(path, "L"), path_mode_id(path, "H")},
                                 {path_mode_id(path, "R"), path_mode_id(path, "V")}});
}

StateVector hwp0(const StateVector& s, std::string_view path) {
    const Space& sp = s.space();
    const auto kv = require_mode(sp, path, "V");
    std::map<BasisLabel, cplx> amps;
    for (const auto& [l, a] : s.amplitudes()) amps[l] = occupation(sp, kv, l) % 2 == 0 ? a : -a;
    return StateVector(sp, std::move(amps));
}

StateVector add_vacuum_path(const StateVector& s, std::string_view path, int max_photons) {
    const auto subs = path_subsystems(path, "H", "V", max_photons);
    const Space vac(subs);
    return tensor(s, StateVector::basis(vac, BasisLabel{0, 0}));
}

StateVector beamsplitter(const StateVector& s, std::string_view in1, std::string_view in2, std::string_view out1,
                         std::string_view out2) {
    const Space& sp = s.space();
    std::array<std::array<std::size_t, 2>, 2> in_pos{};  // [input][pol]
    int photon_cap = 0;
    for (int pol = 0; pol < 2; ++pol) {
        in_pos[0][pol] = require_mode(sp, in1, kLinear[pol]);
        in_pos[1][pol] = require_mode(sp, in2, kLinear[pol]);
        photon_cap = std::max(photon_cap, max_occupation(sp[in_pos[0][pol]]) + max_occupation(sp[in_pos[1][pol]]));
    }

    std::set<std::string> rest_ids = sp.ids();
    for (const auto& row : in_pos)
        for (auto k : row) rest_ids.erase(sp[k].id);
    std::vector<Subsystem> subs = sp.restrict_to(rest_ids).subsystems();
    for (auto path : {out1, out2})
        for (const auto& m : path_subsystems(path, "H", "V", photon_cap)) {
            if (rest_ids.count(m.id)) throw CompositionError("beam-splitter output mode '" + m.id + "' already exists");
            subs.push_back(m);
        }
    const Space out(subs);
    std::array<std::array<std::size_t, 2>, 2> out_pos{};
    for (int pol = 0; pol < 2; ++pol) {
        out_pos[0][pol] = out.index_of(path_mode_id(out1, kLinear[pol]));
        out_pos[1][pol] = out.index_of(path_mode_id(out2, kLinear[pol]));
    }

    std::map<BasisLabel, cplx> amps;
    const double r = 1.0 / std::numbers::sqrt2;
    for (const auto& [l, amp] : s.amplitudes()) {
        // Creation operators present in this label: (input port, pol).
        std::vector<std::pair<int, int>> ops;
        double norm_in = 1.0;
        for (int port = 0; port < 2; ++port)
            for (int pol = 0; pol < 2; ++pol) {
                const int n = occupation(sp, in_pos[port][pol], l);
                norm_in *= std::tgamma(n + 1.0);
                for (int i = 0; i < n; ++i) ops.emplace_back(port, pol);
            }
        BasisLabel base(out.size(), 0);
        for (std::size_t k = 0; k < sp.size(); ++k)
            if (rest_ids.count(sp[k].id)) base[out.index_of(sp[k].id)] = l[k];

        const std::size_t n_ops = ops.size();
        for (std::size_t choice = 0; choice < (std::size_t{1} << n_ops); ++choice) {
            std::array<std::array<int, 2>, 2> m{};  // [output port][pol]
            double coef = 1.0;
            for (std::size_t i = 0; i < n_ops; ++i) {
                const int to = static_cast<int>((choice >> i) & 1u);
                const auto [port, pol] = ops[i];
                ++m[to][pol];
                coef *= (port == 1 && to == 1) ? -r : r;
            }
            double norm_out = 1.0;
            BasisLabel lbl = base;
            for (int port = 0; port < 2; ++port)
                for (int pol = 0; pol < 2; ++pol) {
                    norm_out *= std::tgamma(m[port][pol] + 1.0);
                    lbl[out_pos[port][pol]] = m[port][pol];
                }
            amps[lbl] += amp * coef * std::sqrt(norm_out / norm_in);
        }
    }
    return StateVector(out, std::move(amps));
}

LinearOperator symmetric_projector(std::string_view path1, std::string_view path2) {
    auto subs = path_subsystems(path1, "H", "V");
    for (const auto& m : path_subsystems(path2, "H", "V")) subs.push_back(m);
    const Space sp(subs);
    auto photon = [&](int p1, int p2) {
        return sp.label({{path_mode_id(path1, "H"), p1 == 0 ? "1" : "0"},
                         {path_mode_id(path1, "V"), p1 == 1 ? "1" : "0"},
                         {path_mode_id(path2, "H"), p2 == 0 ? "1" : "0"},
                         {path_mode_id(path2, "V"), p2 == 1 ? "1" : "0"}});
    };
    // I - |psi-><psi-| written as (I + SWAP)/2, whose entries are exact.
    MatrixEntries e;
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            e[{photon(p, q), photon(p, q)}] += 0.5;
            e[{photon(q, p), photon(p, q)}] += 0.5;
        }
    return LinearOperator(sp, std::move(e));
}

namespace {

void require_one_photon_per_path(const StateVector& s, std::string_view a, std::string_view b) {
    const Space& sp = s.space();
    const auto ah = require_mode(sp, a, "H"), av = require_mode(sp, a, "V");
    const auto bh = require_mode(sp, b, "H"), bv = require_mode(sp, b, "V");
    double stray = 0.0;
    for (const auto& [l, amp] : s.amplitudes()) {
        const int na = occupation(sp, ah, l) + occupation(sp, av, l);
        const int nb = occupation(sp, bh, l) + occupation(sp, bv, l);
        if (na != 1 || nb != 1) stray += std::norm(amp);
    }
    if (stray > 1e-24)
        throw InvalidParameter("symmetric projection needs exactly one photon on each of paths '" + std::string(a) +
                               "' and '" + std::string(b) + "'");
}

}  // namespace

CoincidenceOutcome symmetric_project(const StateVector& s, std::string_view path_a, std::string_view path_b,
                                     std::string_view out_a, std::string_view out_b, double floor) {
    require_one_photon_per_path(s, path_a, path_b);
    std::map<std::string, std::string> renames;
    for (const char* pol : kLinear) {
        renames[path_mode_id(path_a, pol)] = path_mode_id(out_a, pol);
        renames[path_mode_id(path_b, pol)] = path_mode_id(out_b, pol);
    }
    const StateVector relabeled = rename_subsystems(s, renames);
    CoincidenceOutcome out;
    out.raw = apply(symmetric_projector(out_a, out_b), relabeled);
    const double p = out.raw.norm2();
    if (p > floor) {
        out.heralded = true;
        out.probability = p;
        out.projected_state = normalize(out.raw, floor).state;
    } else {
        out.projected_state = out.raw;
    }
    return out;
}

bool is_coincidence(const DetectorCounts& c) { return (c[0] >= 1 && c[1] >= 1) || (c[2] >= 1 && c[3] >= 1); }

namespace {

// A, B -> first splitter -> modes 1, 2; mode 2 -> (3, 4) and mode 1 -> (5, 6).
StateVector detection_chain(const StateVector& s) {
    StateVector x = beamsplitter(s, "A", "B", "1", "2");
    x = beamsplitter(add_vacuum_path(x, "v2", 2), "2", "v2", "3", "4");
    x = beamsplitter(add_vacuum_path(x, "v1", 2), "1", "v1", "5", "6");
    return x;
}

int path_count(const Space& sp, const BasisLabel& l, std::string_view path) {
    return occupation(sp, sp.index_of(path_mode_id(path, "H")), l) +
           occupation(sp, sp.index_of(path_mode_id(path, "V")), l);
}

}  // namespace

DetectionBreakdown coincidence_probability_detailed(const StateVector& s) {
    require_one_photon_per_path(s, "A", "B");
    DetectionBreakdown out;
    out.p_symmetric = symmetric_project(s).raw.norm2();

    const StateVector after_first = beamsplitter(s, "A", "B", "1", "2");
    for (const auto& [l, a] : after_first.amplitudes()) {
        if (path_count(after_first.space(), l, "1") == 2) out.p_bunch_mode1 += std::norm(a);
        if (path_count(after_first.space(), l, "2") == 2) out.p_bunch_mode2 += std::norm(a);
    }

    const StateVector fin = detection_chain(s);
    const Space& fs = fin.space();
    std::map<BasisLabel, cplx> herald;
    for (const auto& [l, a] : fin.amplitudes()) {
        const DetectorCounts c = {path_count(fs, l, "3"), path_count(fs, l, "4"), path_count(fs, l, "5"),
                                  path_count(fs, l, "6")};
        out.configs[c] += std::norm(a);
        if (c == DetectorCounts{1, 1, 0, 0}) herald[l] = a;
    }
    out.p_coinc_d1d2 = out.configs.count({1, 1, 0, 0}) ? out.configs.at({1, 1, 0, 0}) : 0.0;
    out.p_coinc_d3d4 = out.configs.count({0, 0, 1, 1}) ? out.configs.at({0, 0, 1, 1}) : 0.0;
    out.p_operational = out.p_coinc_d1d2 + out.p_coinc_d3d4;

    if (out.p_coinc_d1d2 > 1e-14) {
        // Re-express the D1&D2 branch on {0,1} alphabets without the
        // (empty) paths 5, 6 and vacuum ports.
        std::set<std::string> keep = fs.ids();
        for (const char* p : {"5", "6"})
            for (const char* pol : kLinear) keep.erase(path_mode_id(p, pol));
        std::vector<Subsystem> subs;
        for (const auto& id : keep) {
            Subsystem sub = fs[fs.index_of(id)];
            if (id.rfind("ph3.", 0) == 0 || id.rfind("ph4.", 0) == 0) sub.levels = {"0", "1"};
            subs.push_back(sub);
        }
        const Space hs(subs);
        std::map<BasisLabel, cplx> amps;
        for (const auto& [l, a] : herald) {
            BasisLabel hl(hs.size());
            for (std::size_t k = 0; k < hs.size(); ++k) hl[k] = l[fs.index_of(hs[k].id)];
            amps[hl] = a;
        }
        out.heralded_d1d2 = normalize(StateVector(hs, std::move(amps))).state;
    }
    return out;
}

PhotonConfigs distinguishable_configs() {
    // Route one photon at a time; the two routings are independent.
    auto route = [](std::string_view from) {
        auto subs = path_subsystems("A", "H", "V");
        for (const auto& m : path_subsystems("B", "H", "V")) subs.push_back(m);
        const Space sp(subs);
        const StateVector one = StateVector::basis(
            sp, {{path_mode_id("A", "H"), from == "A" ? "1" : "0"}, {path_mode_id("A", "V"), "0"},
                 {path_mode_id("B", "H"), from == "B" ? "1" : "0"}, {path_mode_id("B", "V"), "0"}});
        const StateVector fin = detection_chain(one);
        std::array<double, 4> p{};
        for (const auto& [l, a] : fin.amplitudes()) {
            int k = 0;
            for (const char* path : {"3", "4", "5", "6"}) {
                if (path_count(fin.space(), l, path) == 1) p[k] += std::norm(a);
                ++k;
            }
        }
        return p;
    };
    const auto pa = route("A"), pb = route("B");
    PhotonConfigs out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            DetectorCounts c{};
            ++c[i];
            ++c[j];
            out[c] += pa[i] * pb[j];
        }
    return out;
}

}  // namespace clonesim::optics
