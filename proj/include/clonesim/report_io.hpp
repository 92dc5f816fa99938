// JSON / CSV serialization of states, reports and run manifests.
//
// Numbers are rounded to 12 significant digits on output. State labels are
// written as [[subsystem, level], ...] in space order, amplitudes sorted by
// label, so equal inputs give byte-identical files.

#pragma once

#include <string>
#include <vector>

#include "clonesim/config.hpp"
#include "clonesim/protocol.hpp"
#include "json.hpp"

namespace clonesim {

using json = nlohmann::ordered_json;

// Value as it appears in every output file.
double rounded(double x);

json state_to_json(const StateVector& s);
// Inverse of state_to_json. Throws ConfigError on malformed input.
StateVector state_from_json(const json& j);

json density_to_json(const DensityMatrix& rho);
json report_to_json(const CloneReport& r);

// Bump kSummaryVersion whenever the column set changes.
inline constexpr int kSummaryVersion = 1;
const std::vector<std::string>& summary_columns();
std::string summary_csv_header();
std::string summary_csv_row(const CloneReport& r);
std::string summary_csv(const CloneReport& r);

// Sweep table: the swept value first, then the summary columns.
std::string sweep_csv(const std::string& param, const std::vector<SweepPoint>& points);

struct RunManifest {
    std::string command;  // ideal | dynamics | sweep
    std::string config_path;
    ProtocolConfig config;
    std::string version;
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<std::string> outputs;
    // sweep only
    std::string sweep_param;
    std::vector<double> sweep_values;
};

json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
RunManifest load_manifest(const std::string& path);
// UTC, ISO 8601.
std::string utc_timestamp();

void write_text_file(const std::string& path, const std::string& text);

}  // namespace clonesim
