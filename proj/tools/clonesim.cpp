// clonesim: command-line front end.
//
//   clonesim ideal --a 0.6 --b 0.8 [--out DIR]
//   clonesim dynamics CONFIG|MANIFEST [--out DIR]
//   clonesim sweep --param eta --from 0 --to 1 --steps 11 [--config FILE] [--out DIR]
//   clonesim verify [--seed N] [--report FILE]
//
// Exit codes: 0 ok, 1 runtime failure, 2 config error, 3 verification failure.

#include <cmath>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "clonesim/config.hpp"
#include "clonesim/errors.hpp"
#include "clonesim/format.hpp"
#include "clonesim/protocol.hpp"
#include "clonesim/report_io.hpp"
#include "clonesim/verification.hpp"

namespace fs = std::filesystem;
using namespace clonesim;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

std::string version() { return CLONESIM_VERSION; }

bool is_manifest(const std::string& path) { return fs::path(path).extension() == ".json"; }

void print_summary(const CloneReport& r) {
    auto line = [](const char* key, double v) { std::cout << "  " << key << " = " << format_number(v) << "\n"; };
    std::cout << "mode " << to_string(r.mode) << "\n";
    line("clone_fidelity_1", r.clone_fidelity_1);
    line("clone_fidelity_2", r.clone_fidelity_2);
    line("telenot_fidelity", r.telenot_fidelity);
    line("p_symmetric", r.p_symmetric);
    line("p_operational", r.p_operational);
    line("p_quoted", optics::kQuotedSuccessProbability);
    line("p_detected", r.p_detected);
    line("overlap_visibility", r.overlap_visibility);
    for (const auto* d : {&r.alice_dynamics, &r.bob_dynamics}) {
        if (!*d) continue;
        const char* who = (*d)->side == Side::Alice ? "alice" : "bob";
        std::cout << "  " << who << ": emission_prob = " << format_number((*d)->emission_prob)
                  << ", spont_loss = " << format_number((*d)->spont_loss)
                  << ", excited_pop_max = " << format_number((*d)->excited_pop_max) << "\n";
    }
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

std::string write_output(const fs::path& dir, const std::string& name, const std::string& text,
                         std::vector<std::string>& written) {
    const fs::path p = dir / name;
    write_text_file(p.string(), text);
    written.push_back(p.string());
    return p.string();
}

void write_report(const fs::path& dir, const CloneReport& r, RunManifest& m) {
    fs::create_directories(dir);
    write_output(dir, "report.json", report_to_json(r).dump(2) + "\n", m.outputs);
    write_output(dir, "summary.csv", summary_csv(r), m.outputs);
}

void write_manifest(const fs::path& dir, RunManifest& m) {
    m.version = version();
    m.seed = m.config.seed;
    m.timestamp = utc_timestamp();
    const fs::path p = dir / "manifest.json";
    write_text_file(p.string(), manifest_to_json(m).dump(2) + "\n");
    std::cout << "wrote " << p.string() << "\n";
}

int cmd_ideal(const std::string& a_text, const std::string& b_text, const std::string& manifest_path,
              const fs::path& out) {
    RunManifest m;
    m.command = "ideal";
    if (!manifest_path.empty()) {
        m = load_manifest(manifest_path);
        m.outputs.clear();
        m.config_path = manifest_path;
    } else {
        cplx a, b;
        try {
            a = parse_complex(a_text);
            b = parse_complex(b_text);
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("--a/--b: ") + e.what());
        }
        const double n2 = std::norm(a) + std::norm(b);
        if (!(n2 > 0.0)) throw ConfigError("--a/--b: both amplitudes are zero");
        if (std::abs(n2 - 1.0) > 1e-6)
            std::cerr << "warning: |a|^2 + |b|^2 = " << format_number(n2) << "; renormalizing\n";
        const double n = std::sqrt(n2);
        m.config = default_config();
        m.config.input = InputQubit(a / n, b / n);
    }
    m.config.mode = Mode::Analytic;
    apply_seed_override(m.config);
    const CloneReport r = run(m.config);
    print_summary(r);
    write_report(out, r, m);
    write_manifest(out, m);
    return 0;
}

int cmd_dynamics(const std::string& path, const fs::path& out) {
    RunManifest m;
    m.command = "dynamics";
    m.config_path = path;
    m.config = is_manifest(path) ? load_manifest(path).config : load_config(path);
    if (m.config.mode != Mode::Dynamic) throw ConfigError("key 'mode' must be 'dynamic' for the dynamics command");
    apply_seed_override(m.config);
    const CloneReport r = run(m.config);
    print_summary(r);
    write_report(out, r, m);
    write_output(out, "pulse_alice.csv", pulse_csv(r.alice_dynamics->pulse_shape), m.outputs);
    write_output(out, "pulse_bob.csv", pulse_csv(r.bob_dynamics->pulse_shape), m.outputs);
    write_manifest(out, m);
    bool violated = false;
    for (const auto* d : {&*r.alice_dynamics, &*r.bob_dynamics}) {
        if (!d->adiabaticity_warning) continue;
        violated = true;
        std::cerr << "adiabaticity violated on " << (d->side == Side::Alice ? "alice" : "bob")
                  << ": excited-state population reached " << format_number(d->excited_pop_max) << " (limit "
                  << format_number(kExcitedPopulationWarning) << "); lengthen t_total or raise omega_max\n";
    }
    return violated ? kExitVerify : 0;
}

int cmd_sweep(std::string param, double from, double to, int steps, const std::string& config_path,
              const std::string& manifest_path, const fs::path& out) {
    RunManifest m;
    m.command = "sweep";
    if (!manifest_path.empty()) {
        m = load_manifest(manifest_path);
        m.outputs.clear();
        m.config_path = manifest_path;
    } else {
        m.config_path = config_path;
        m.config = config_path.empty() ? default_config() : load_config(config_path);
        if (steps < 1) throw ConfigError("--steps must be >= 1");
        m.sweep_param = param;
        for (int i = 0; i < steps; ++i)
            m.sweep_values.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    }
    const auto& known = sweepable_params();
    if (std::find(known.begin(), known.end(), m.sweep_param) == known.end()) {
        std::string list;
        for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
        throw ConfigError("parameter '" + m.sweep_param + "' is not sweepable (choose from: " + list + ")");
    }
    apply_seed_override(m.config);
    const auto points = run_sweep(m.config, m.sweep_param, m.sweep_values);
    fs::create_directories(out);
    const std::string csv = sweep_csv(m.sweep_param, points);
    std::cout << csv;
    write_output(out, "sweep.csv", csv, m.outputs);
    write_manifest(out, m);
    return 0;
}

int cmd_verify(std::uint64_t seed, const std::string& report_path) {
    if (const char* env = std::getenv("CLONESIM_SEED"); env && *env) {
        ProtocolConfig tmp;
        apply_seed_override(tmp);
        seed = tmp.seed;
    }
    std::cout << "acceptance suite, seed " << seed << "\n";
    const auto results =
        run_acceptance(seed, [](const CriterionResult& r) { std::cout << format_result_line(r) << std::endl; });
    int passed = 0;
    for (const auto& r : results) passed += r.passed ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    if (!report_path.empty()) write_text_file(report_path, acceptance_report(seed, results));
    return passed == static_cast<int>(results.size()) ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for remote 1->2 qubit cloning with two cavity nodes"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    std::string a_text = "1", b_text = "0", manifest, config_path, report_path, param;
    std::string out_dir = "clonesim_out";
    double from = 0.0, to = 1.0;
    int steps = 11;
    std::uint64_t seed = default_config().seed;

    auto* ideal = app.add_subcommand("ideal", "Perfect adiabatic limit for one input qubit");
    ideal->add_option("--a", a_text, "Amplitude of |0>, e.g. 0.6 or 0.6+0.8i");
    ideal->add_option("--b", b_text, "Amplitude of |1>");
    ideal->add_option("--manifest", manifest, "Replay a manifest.json");
    ideal->add_option("--out", out_dir, "Output directory");

    auto* dyn = app.add_subcommand("dynamics", "Time-resolved emission from both nodes");
    dyn->add_option("config", config_path, "Config file, or a manifest.json to replay")->required();
    dyn->add_option("--out", out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter; one CSV row per point");
    sweep->add_option("--param", param, "Parameter name");
    sweep->add_option("--from", from);
    sweep->add_option("--to", to);
    sweep->add_option("--steps", steps);
    sweep->add_option("--config", config_path, "Base config (default: built-in defaults)");
    sweep->add_option("--manifest", manifest, "Replay a manifest.json");
    sweep->add_option("--out", out_dir, "Output directory");

    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--seed", seed);
    verify->add_option("--report", report_path, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*ideal) return cmd_ideal(a_text, b_text, manifest, out_dir);
        if (*dyn) return cmd_dynamics(config_path, out_dir);
        if (*sweep) {
            if (manifest.empty() && param.empty()) throw ConfigError("--param is required");
            return cmd_sweep(param, from, to, steps, config_path, manifest, out_dir);
        }
        if (*verify) return cmd_verify(seed, report_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
