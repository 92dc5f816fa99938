#include "clonesim/report_io.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "clonesim/errors.hpp"
#include "clonesim/format.hpp"

namespace clonesim {

double rounded(double x) { return std::stod(format_number(x)); }

namespace {

json complex_pair(cplx z) { return {{"re", rounded(z.real())}, {"im", rounded(z.imag())}}; }

json label_json(const Space& space, const BasisLabel& label) {
    json out = json::array();
    for (const auto& [id, level] : space.factors(label)) out.push_back({id, level});
    return out;
}

json space_json(const Space& space) {
    json out = json::array();
    for (const auto& sub : space.subsystems()) out.push_back({{"id", sub.id}, {"levels", sub.levels}});
    return out;
}

json dynamics_json(const DynamicsReport& d) {
    return {{"side", d.side == Side::Alice ? "alice" : "bob"},
            {"emission_prob", rounded(d.emission_prob)},
            {"spont_loss", rounded(d.spont_loss)},
            {"residual_norm2", rounded(d.residual_norm2)},
            {"closure_error", rounded(d.emission_prob + d.spont_loss + d.residual_norm2 - 1.0)},
            {"excited_pop_max", rounded(d.excited_pop_max)},
            {"adiabaticity_warning", d.adiabaticity_warning},
            {"step", rounded(d.step)},
            {"steps", d.steps},
            {"pulse_norm2", rounded(pulse_norm2(d.pulse_shape))},
            {"final_state", state_to_json(d.final_state)}};
}

std::string csv_join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    return out;
}

std::vector<std::string> summary_cells(const CloneReport& r) {
    auto n = [](double x) { return format_number(x); };
    auto opt = [&](const std::optional<DynamicsReport>& d, double DynamicsReport::*field) {
        return d ? n((*d).*field) : std::string();
    };
    return {"v" + std::to_string(kSummaryVersion),
            to_string(r.mode),
            n(r.input.a().real()),
            n(r.input.a().imag()),
            n(r.input.b().real()),
            n(r.input.b().imag()),
            n(r.clone_fidelity_1),
            n(r.clone_fidelity_2),
            n(r.telenot_fidelity),
            n(r.p_symmetric),
            n(r.p_operational),
            n(r.p_detected),
            n(optics::kQuotedSuccessProbability),
            n(r.overlap_visibility),
            n(r.detector.eta),
            n(r.detector.dark_rate),
            n(r.detector.window),
            n(r.detector_stats.false_fraction),
            opt(r.alice_dynamics, &DynamicsReport::emission_prob),
            opt(r.bob_dynamics, &DynamicsReport::emission_prob),
            opt(r.alice_dynamics, &DynamicsReport::excited_pop_max),
            opt(r.bob_dynamics, &DynamicsReport::excited_pop_max),
            std::to_string(r.warnings.size())};
}

}  // namespace

json state_to_json(const StateVector& s) {
    json amps = json::array();
    for (const auto& [label, amp] : s.amplitudes()) {
        json e = {{"label", label_json(s.space(), label)}};
        e.update(complex_pair(amp));
        amps.push_back(std::move(e));
    }
    return {{"space", space_json(s.space())}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const json& j) {
    try {
        std::vector<Subsystem> subs;
        for (const auto& sj : j.at("space")) subs.push_back({sj.at("id"), sj.at("levels")});
        const Space space(std::move(subs));
        std::map<BasisLabel, cplx> amps;
        for (const auto& e : j.at("amplitudes")) {
            LabelFactors f;
            for (const auto& pair : e.at("label")) f.emplace_back(pair.at(0), pair.at(1));
            amps[space.label(f)] += cplx(e.at("re").get<double>(), e.at("im").get<double>());
        }
        return StateVector(space, std::move(amps));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed state JSON: ") + e.what());
    }
}

json density_to_json(const DensityMatrix& rho) {
    json entries = json::array();
    for (const auto& [rc, v] : rho.entries()) {
        json e = {{"row", label_json(rho.space(), rc.first)}, {"col", label_json(rho.space(), rc.second)}};
        e.update(complex_pair(v));
        entries.push_back(std::move(e));
    }
    return {{"space", space_json(rho.space())}, {"entries", std::move(entries)}};
}

json report_to_json(const CloneReport& r) {
    const auto& d = r.detection;
    json configs = json::array();
    for (const auto& [c, w] : r.configs)
        configs.push_back({{"counts", c}, {"probability", rounded(w)}, {"coincidence", optics::is_coincidence(c)}});
    json out = {
        {"mode", to_string(r.mode)},
        {"input", {{"a", complex_pair(r.input.a())}, {"b", complex_pair(r.input.b())}}},
        {"clone_fidelity_1", rounded(r.clone_fidelity_1)},
        {"clone_fidelity_2", rounded(r.clone_fidelity_2)},
        {"telenot_fidelity", rounded(r.telenot_fidelity)},
        {"p_symmetric", rounded(r.p_symmetric)},
        {"p_operational", rounded(r.p_operational)},
        {"p_detected", rounded(r.p_detected)},
        {"overlap_visibility", rounded(r.overlap_visibility)},
        {"detection",
         {{"p_symmetric", rounded(d.p_symmetric)},
          {"p_bunch_mode1", rounded(d.p_bunch_mode1)},
          {"p_bunch_mode2", rounded(d.p_bunch_mode2)},
          {"p_coinc_d1d2", rounded(d.p_coinc_d1d2)},
          {"p_coinc_d3d4", rounded(d.p_coinc_d3d4)},
          {"p_operational_indistinguishable", rounded(d.p_operational)},
          {"p_quoted", rounded(optics::kQuotedSuccessProbability)},
          {"configs", std::move(configs)}}},
        {"detector",
         {{"eta", rounded(r.detector.eta)},
          {"dark_rate", rounded(r.detector.dark_rate)},
          {"window", rounded(r.detector.window)},
          {"p_dark", rounded(r.detector_stats.p_dark)},
          {"false_coincidences", rounded(r.detector_stats.false_coincidences)},
          {"false_fraction", rounded(r.detector_stats.false_fraction)},
          {"mc_trials", r.detector_stats.trials},
          {"p_detected_mc", rounded(r.detector_stats.p_detected_mc)},
          {"false_fraction_mc", rounded(r.detector_stats.false_fraction_mc)},
          {"false_fraction_mc_sigma", rounded(r.detector_stats.false_fraction_mc_sigma)}}},
    };
    out["post_state"] = r.post_state ? state_to_json(*r.post_state) : json(nullptr);
    out["post_rho"] = density_to_json(r.post_rho);
    if (r.alice_dynamics) out["alice_dynamics"] = dynamics_json(*r.alice_dynamics);
    if (r.bob_dynamics) out["bob_dynamics"] = dynamics_json(*r.bob_dynamics);
    out["warnings"] = r.warnings;
    return out;
}

const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols = {
        "schema",          "mode",           "a_re",           "a_im",
        "b_re",            "b_im",           "clone_fidelity_1", "clone_fidelity_2",
        "telenot_fidelity", "p_symmetric",   "p_operational",  "p_detected",
        "p_quoted",        "overlap_visibility", "eta",        "dark_rate",
        "window",          "false_fraction", "emission_prob_alice", "emission_prob_bob",
        "excited_pop_max_alice", "excited_pop_max_bob", "warnings"};
    return cols;
}

std::string summary_csv_header() { return csv_join(summary_columns()); }
std::string summary_csv_row(const CloneReport& r) { return csv_join(summary_cells(r)); }
std::string summary_csv(const CloneReport& r) { return summary_csv_header() + "\n" + summary_csv_row(r) + "\n"; }

std::string sweep_csv(const std::string& param, const std::vector<SweepPoint>& points) {
    std::string out = "index," + param + "," + summary_csv_header() + "\n";
    for (const auto& p : points)
        out += std::to_string(p.index) + "," + format_number(p.value) + "," + summary_csv_row(p.report) + "\n";
    return out;
}

json manifest_to_json(const RunManifest& m) {
    json cfg = json::object();
    const ConfigMap kv = config_to_map(m.config);
    for (const auto& k : config_keys()) cfg[k] = kv.at(k);
    json out = {{"command", m.command},     {"config_path", m.config_path}, {"config", std::move(cfg)},
                {"version", m.version},     {"seed", m.seed},               {"timestamp", m.timestamp},
                {"outputs", m.outputs}};
    if (!m.sweep_param.empty()) {
        out["sweep"] = {{"param", m.sweep_param}, {"values", json::array()}};
        // Values are stored as text at round-trip precision.
        for (double v : m.sweep_values) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out["sweep"]["values"].push_back(buf);
        }
    }
    return out;
}

RunManifest manifest_from_json(const json& j) {
    try {
        RunManifest m;
        m.command = j.at("command");
        m.config_path = j.value("config_path", "");
        ConfigMap kv;
        for (const auto& [k, v] : j.at("config").items()) kv[k] = v.get<std::string>();
        m.config = config_from_map(kv);
        m.version = j.value("version", "");
        m.seed = j.at("seed").get<std::uint64_t>();
        m.config.seed = m.seed;
        m.timestamp = j.value("timestamp", "");
        m.outputs = j.value("outputs", std::vector<std::string>{});
        if (j.contains("sweep")) {
            m.sweep_param = j["sweep"].at("param");
            for (const auto& v : j["sweep"].at("values")) m.sweep_values.push_back(std::stod(v.get<std::string>()));
        }
        return m;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed manifest: ") + e.what());
    }
}

RunManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("manifest '" + path + "' is not valid JSON: " + e.what());
    }
    return manifest_from_json(j);
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace clonesim
