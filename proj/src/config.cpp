#include "clonesim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "clonesim/errors.hpp"

namespace clonesim {

namespace {

const std::vector<std::string> kNodeFields = {"g",     "kappa",     "gamma",   "delta",        "epsilon",
                                              "nu",    "shape",     "omega_max", "t_total",    "hold_fraction"};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigError("key '" + key + "': expected a finite number, got '" + text + "'");
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || text.empty())
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + text + "'");
    return v;
}

std::string exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k = {"mode", "input.a", "input.b"};
        for (const char* node : {"alice", "bob"})
            for (const auto& f : kNodeFields) k.push_back(std::string(node) + "." + f);
        for (const char* f : {"detector.eta", "detector.dark_rate", "detector.window", "seed", "dt", "mc_trials",
                              "emission_floor"})
            k.emplace_back(f);
        return k;
    }();
    return keys;
}

std::vector<std::string> required_keys(Mode mode) {
    std::vector<std::string> req = {"mode", "input.a", "input.b"};
    if (mode == Mode::Dynamic) {
        for (const char* node : {"alice", "bob"})
            for (const char* f : {"g", "kappa", "gamma", "delta", "omega_max", "t_total"})
                req.push_back(std::string(node) + "." + f);
        req.emplace_back("dt");
    }
    return req;
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.empty()) throw ConfigError("key '" + key + "': empty value");
        if (!kv.emplace(key, value).second) throw ConfigError("key '" + key + "' given twice");
    }
    return kv;
}

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ConfigError("empty complex number");
    auto real_of = [&](const std::string& t) { return parse_real("complex '" + raw + "'", t); };
    if (s.back() != 'i') return {real_of(s), 0.0};
    s.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_of = [&](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        if (t.front() == '+') t.erase(0, 1);
        return real_of(t);
    };
    if (split == std::string::npos) return {0.0, imag_of(s)};
    return {real_of(s.substr(0, split)), imag_of(s.substr(split))};
}

std::string format_complex_exact(cplx z) {
    if (z.imag() == 0.0) return exact(z.real());
    std::string im = exact(z.imag());
    if (im.front() != '-') im = "+" + im;
    return exact(z.real()) + im + "i";
}

ProtocolConfig config_from_map(const ConfigMap& kv) {
    const std::set<std::string> known(config_keys().begin(), config_keys().end());
    for (const auto& [k, v] : kv)
        if (!known.count(k)) throw ConfigError("unknown key '" + k + "'");
    auto mode_it = kv.find("mode");
    if (mode_it == kv.end()) throw ConfigError("missing key 'mode'");
    const Mode mode = mode_from_string(mode_it->second);
    for (const auto& k : required_keys(mode))
        if (!kv.count(k)) throw ConfigError("missing key '" + k + "'");

    ProtocolConfig cfg = default_config();
    cfg.mode = mode;
    auto real = [&](const std::string& key, double& target) {
        if (auto it = kv.find(key); it != kv.end()) target = parse_real(key, it->second);
    };

    cplx a, b;
    try {
        a = parse_complex(kv.at("input.a"));
        b = parse_complex(kv.at("input.b"));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("input amplitudes: ") + e.what());
    }
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (std::abs(n - 1.0) > 1e-6)
        throw ConfigError("input.a/input.b: |a|^2 + |b|^2 = " + exact(n * n) + " (must be 1 within 1e-6)");
    // Near-unit inputs are kept bit-exact so canonical text replays unchanged.
    cfg.input = std::abs(n - 1.0) <= 1e-13 ? InputQubit(a, b) : InputQubit(a / n, b / n);

    for (auto* node : {&cfg.alice, &cfg.bob}) {
        const std::string pre = node == &cfg.alice ? "alice." : "bob.";
        real(pre + "g", node->params.g);
        real(pre + "kappa", node->params.kappa);
        real(pre + "gamma", node->params.gamma);
        real(pre + "delta", node->params.delta);
        real(pre + "epsilon", node->params.modulation.epsilon);
        real(pre + "nu", node->params.modulation.nu);
        real(pre + "omega_max", node->pulse.omega_max);
        real(pre + "t_total", node->pulse.t_total);
        real(pre + "hold_fraction", node->pulse.hold_fraction);
        if (auto it = kv.find(pre + "shape"); it != kv.end()) {
            try {
                node->pulse.shape = ramp_shape_from_string(it->second);
            } catch (const Error& e) {
                throw ConfigError("key '" + pre + "shape': " + e.what());
            }
        }
    }
    real("detector.eta", cfg.detector.eta);
    real("detector.dark_rate", cfg.detector.dark_rate);
    real("detector.window", cfg.detector.window);
    real("dt", cfg.dt);
    real("emission_floor", cfg.emission_floor);
    if (auto it = kv.find("seed"); it != kv.end()) cfg.seed = parse_unsigned("seed", it->second);
    if (auto it = kv.find("mc_trials"); it != kv.end())
        cfg.mc_trials = static_cast<std::size_t>(parse_unsigned("mc_trials", it->second));

    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ProtocolConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_map(parse_config_text(buf.str()));
}

ConfigMap config_to_map(const ProtocolConfig& cfg) {
    ConfigMap kv;
    kv["mode"] = to_string(cfg.mode);
    kv["input.a"] = format_complex_exact(cfg.input.a());
    kv["input.b"] = format_complex_exact(cfg.input.b());
    for (const auto* node : {&cfg.alice, &cfg.bob}) {
        const std::string pre = node == &cfg.alice ? "alice." : "bob.";
        kv[pre + "g"] = exact(node->params.g);
        kv[pre + "kappa"] = exact(node->params.kappa);
        kv[pre + "gamma"] = exact(node->params.gamma);
        kv[pre + "delta"] = exact(node->params.delta);
        kv[pre + "epsilon"] = exact(node->params.modulation.epsilon);
        kv[pre + "nu"] = exact(node->params.modulation.nu);
        kv[pre + "shape"] = to_string(node->pulse.shape);
        kv[pre + "omega_max"] = exact(node->pulse.omega_max);
        kv[pre + "t_total"] = exact(node->pulse.t_total);
        kv[pre + "hold_fraction"] = exact(node->pulse.hold_fraction);
    }
    kv["detector.eta"] = exact(cfg.detector.eta);
    kv["detector.dark_rate"] = exact(cfg.detector.dark_rate);
    kv["detector.window"] = exact(cfg.detector.window);
    kv["seed"] = std::to_string(cfg.seed);
    kv["dt"] = exact(cfg.dt);
    kv["mc_trials"] = std::to_string(cfg.mc_trials);
    kv["emission_floor"] = exact(cfg.emission_floor);
    return kv;
}

std::string config_to_text(const ProtocolConfig& cfg) {
    const ConfigMap kv = config_to_map(cfg);
    std::string out;
    for (const auto& k : config_keys()) out += k + " = " + kv.at(k) + "\n";
    return out;
}

void apply_seed_override(ProtocolConfig& cfg) {
    if (const char* env = std::getenv("CLONESIM_SEED"); env && *env)
        cfg.seed = parse_unsigned("CLONESIM_SEED", trim(env));
}

}  // namespace clonesim
