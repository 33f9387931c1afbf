// Parameter sweeps over the analytical evaluators (with an optional
// simulation overlay), emitted as CSV or JSON tables.
#pragma once

#include "aoi/analysis.hpp"
#include "aoi/simulator.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace aoi {

enum class SweepParam { beta, battery, rho_split, rho };

SweepParam sweep_param_from_string(const std::string& s);
const char* to_string(SweepParam p);

struct SweepSpec {
    SweepParam param = SweepParam::beta;
    double from = 0.0, to = 0.0;      // real-valued sweeps
    int points = 0;
    std::vector<int> battery_values;  // battery sweep

    SystemParams base;
    int source = 1;
    Method method = Method::closed;
    std::vector<Discipline> disciplines{Discipline::WP, Discipline::PS,
                                        Discipline::SA};
    // mean | second_moment | std | mgf@<sbar> | jfi | sum_aoi
    std::vector<std::string> outputs{"mean"};

    bool with_sim = false;  // adds sim_delta1 (+ CI) overlay columns
    SimConfig sim;

    void validate() const;
    // Grid of swept values and the system parameters for one grid point.
    std::vector<double> grid() const;
    SystemParams params_at(double value) const;
};

struct SweepTable {
    std::vector<std::string> header;        // swept name + output columns
    std::vector<std::vector<double>> rows;  // one row per grid point
};

SweepTable run_sweep(const SweepSpec& spec);

std::string to_csv(const SweepTable& table);
nlohmann::json to_json(const SweepTable& table);

}  // namespace aoi
