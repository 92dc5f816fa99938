// Flat "key = value" configuration with dotted keys, '#' comments.
//
//   mode = dynamic
//   input.a = 0.6
//   input.b = 0.8i
//   alice.kappa = 1
//   detector.eta = 0.9
//
// Keys not listed in config_keys() are rejected. required_keys(mode) must
// all be present; everything else falls back to default_config().

#pragma once

#include <map>
#include <string>
#include <vector>

#include "clonesim/protocol.hpp"

namespace clonesim {

using ConfigMap = std::map<std::string, std::string>;

// Every accepted key, in serialization order.
const std::vector<std::string>& config_keys();
std::vector<std::string> required_keys(Mode mode);

// Lines to key/value pairs. Throws ConfigError on malformed lines and
// duplicate keys.
ConfigMap parse_config_text(const std::string& text);

ProtocolConfig config_from_map(const ConfigMap& kv);
ProtocolConfig load_config(const std::string& path);

// Canonical text form with round-trip precision; parsing it back yields an
// identical ProtocolConfig.
ConfigMap config_to_map(const ProtocolConfig& cfg);
std::string config_to_text(const ProtocolConfig& cfg);

// "0.6", "-1e-3", "0.8i", "0.6+0.8i", "0.5-0.5i".
cplx parse_complex(const std::string& text);
std::string format_complex_exact(cplx z);

// CLONESIM_SEED, when set, replaces cfg.seed. Throws ConfigError if it is not
// an unsigned integer.
void apply_seed_override(ProtocolConfig& cfg);

}  // namespace clonesim
