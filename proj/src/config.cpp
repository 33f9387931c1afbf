#include "aoi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace aoi {

using nlohmann::json;

std::string format_double(double v) {
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite value in report output");
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    if (j.contains("lambda")) {
        if (j["lambda"].is_array())
            c.params.arrival_rates = j["lambda"].get<std::vector<double>>();
        else
            c.params.arrival_rates = {j["lambda"].get<double>()};
    }
    c.params.n_sources = j.value(
        "n_sources", static_cast<int>(std::max<size_t>(
                         c.params.arrival_rates.size(), 1)));
    if (c.params.arrival_rates.empty())
        c.params.arrival_rates.assign(c.params.n_sources, 1.0);
    c.params.energy_rate = j.value("eta", c.params.energy_rate);
    c.params.service_rate = j.value("mu", c.params.service_rate);
    c.params.battery_capacity = j.value("battery", c.params.battery_capacity);
    if (j.contains("discipline"))
        c.discipline = discipline_from_string(j["discipline"].get<std::string>());
    c.source = j.value("source", 1);
    if (j.contains("method"))
        c.method = method_from_string(j["method"].get<std::string>());
    if (j.contains("mgf_at"))
        c.mgf_at = j["mgf_at"].get<std::vector<double>>();
    if (j.contains("sim")) {
        const json& s = j["sim"];
        c.sim.horizon = s.value("horizon", c.sim.horizon);
        c.sim.seed = s.value("seed", c.sim.seed);
        c.sim.replications = s.value("replications", c.sim.replications);
        c.sim.warmup_fraction =
            s.value("warmup_fraction", c.sim.warmup_fraction);
        c.sim.batches = s.value("batches", c.sim.batches);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return config_from_json(j);
}

json to_json(const RunConfig& c) {
    return json{
        {"n_sources", c.params.n_sources},
        {"lambda", c.params.arrival_rates},
        {"eta", c.params.energy_rate},
        {"mu", c.params.service_rate},
        {"battery", c.params.battery_capacity},
        {"discipline", to_string(c.discipline)},
        {"source", c.source},
        {"method", to_string(c.method)},
        {"mgf_at", c.mgf_at},
        {"sim",
         {{"horizon", c.sim.horizon},
          {"seed", c.sim.seed},
          {"replications", c.sim.replications},
          {"warmup_fraction", c.sim.warmup_fraction},
          {"batches", c.sim.batches}}}};
}

json to_json(const AoiReport& r) {
    json samples = json::array();
    for (const auto& [sbar, value] : r.mgf_samples)
        samples.push_back({{"sbar", sbar}, {"mgf", value}});
    return json{{"discipline", to_string(r.discipline)},
                {"source", r.source},
                {"mean", r.mean},
                {"second_moment", r.second_moment},
                {"std", r.std_dev},
                {"mgf", samples},
                {"domain_bound", r.domain_bound}};
}

json to_json(const CompareResult& c, const SystemParams& params) {
    json rows = json::array();
    for (const auto& row : c.rows) {
        json per_source = json::array();
        for (const auto& r : row.per_source) per_source.push_back(to_json(r));
        rows.push_back({{"discipline", to_string(row.discipline)},
                        {"per_source", per_source},
                        {"sum_aoi", row.sum_aoi},
                        {"jfi", row.jfi}});
    }
    return json{{"n_sources", params.n_sources},
                {"rows", rows},
                {"gaps",
                 {{"wp_minus_ps", c.gap_wp_ps},
                  {"wp_minus_sa", c.gap_wp_sa},
                  {"sa_minus_ps", c.gap_sa_ps}}}};
}

}  // namespace aoi
