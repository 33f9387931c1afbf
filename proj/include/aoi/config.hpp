// JSON configuration document and report serialization.
//
// Config schema (flags mirror it; missing fields keep defaults):
// {
//   "n_sources": 2, "lambda": [0.5, 0.5], "eta": 1.5, "mu": 1.0,
//   "battery": 2, "discipline": "wp", "source": 1, "method": "closed",
//   "mgf_at": [0, 0.05],
//   "sim": { "horizon": 1e6, "seed": 42, "replications": 8,
//            "warmup_fraction": 0.01, "batches": 30 }
// }
#pragma once

#include "aoi/analysis.hpp"
#include "aoi/params.hpp"
#include "aoi/simulator.hpp"

#include <json.hpp>

#include <string>

namespace aoi {

struct RunConfig {
    SystemParams params;
    Discipline discipline = Discipline::WP;
    int source = 1;
    Method method = Method::closed;
    std::vector<double> mgf_at;  // normalized exponents sbar
    SimConfig sim;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

nlohmann::json to_json(const AoiReport& r);
nlohmann::json to_json(const CompareResult& c, const SystemParams& params);

// Locale-independent shortest-round-trip rendering of a double.
std::string format_double(double v);

}  // namespace aoi
