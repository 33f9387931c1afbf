#include "aoi/sweep.hpp"

#include "aoi/config.hpp"
#include "aoi/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace aoi {

SweepParam sweep_param_from_string(const std::string& s) {
    if (s == "beta") return SweepParam::beta;
    if (s == "battery") return SweepParam::battery;
    if (s == "rho_split") return SweepParam::rho_split;
    if (s == "rho") return SweepParam::rho;
    throw std::invalid_argument(
        "unknown sweep parameter '" + s +
        "' (expected beta|battery|rho_split|rho)");
}

const char* to_string(SweepParam p) {
    switch (p) {
        case SweepParam::beta: return "beta";
        case SweepParam::battery: return "battery";
        case SweepParam::rho_split: return "rho1";
        case SweepParam::rho: return "rho";
    }
    return "?";
}

void SweepSpec::validate() const {
    base.validate();
    if (param == SweepParam::battery) {
        if (battery_values.empty())
            throw std::invalid_argument("battery sweep needs a value list");
        for (int b : battery_values)
            if (b < 1)
                throw std::invalid_argument("battery values must be >= 1");
    } else {
        if (!(from < to)) throw std::invalid_argument("sweep needs from < to");
        if (points < 2) throw std::invalid_argument("sweep needs points >= 2");
    }
    if (param == SweepParam::rho_split && base.n_sources < 2)
        throw std::invalid_argument("rho_split sweep needs n_sources >= 2");
    if (disciplines.empty())
        throw std::invalid_argument("sweep needs at least one discipline");
    if (outputs.empty())
        throw std::invalid_argument("sweep needs at least one output");
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> g;
    if (param == SweepParam::battery) {
        for (int b : battery_values) g.push_back(b);
    } else {
        for (int i = 0; i < points; ++i)
            g.push_back(from + (to - from) * i / (points - 1));
    }
    return g;
}

SystemParams SweepSpec::params_at(double value) const {
    SystemParams p = base;
    const double mu = p.service_rate;
    switch (param) {
        case SweepParam::beta:
            p.energy_rate = value * mu;
            break;
        case SweepParam::battery:
            p.battery_capacity = static_cast<int>(value);
            break;
        case SweepParam::rho: {
            // Scale all sources, keeping the base split proportions.
            const double base_total = p.total_arrival_rate();
            for (double& l : p.arrival_rates)
                l *= value * mu / base_total;
            break;
        }
        case SweepParam::rho_split: {
            // Source 1 takes rho1 = value; of the remainder, source 2
            // takes 10% and the rest split evenly (everything, for N = 2).
            const double rho_total = p.total_arrival_rate() / mu;
            const double rest = rho_total - value;
            if (!(value > 0.0) || !(rest > 0.0))
                throw std::invalid_argument(
                    "rho_split value must be in (0, rho)");
            p.arrival_rates[0] = value * mu;
            if (p.n_sources == 2) {
                p.arrival_rates[1] = rest * mu;
            } else {
                p.arrival_rates[1] = 0.1 * rest * mu;
                for (int i = 2; i < p.n_sources; ++i)
                    p.arrival_rates[i] =
                        0.9 * rest * mu / (p.n_sources - 2);
            }
            break;
        }
    }
    return p;
}

namespace {

std::string column_name(const std::string& output, Discipline d, int src) {
    std::string metric = output;
    if (output == "mean") metric = "delta1";
    if (output == "second_moment") metric = "delta2";
    if (output.rfind("mgf@", 0) == 0) metric = "mgf" + output.substr(4);
    std::string name = metric + "_" + to_string(d);
    if (src > 0) name += "_src" + std::to_string(src);
    return name;
}

bool per_source_output(const std::string& output) {
    return output != "jfi" && output != "sum_aoi";
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepTable table;
    table.header.push_back(to_string(spec.param));
    for (const auto& out : spec.outputs)
        for (Discipline d : spec.disciplines) {
            if (per_source_output(out)) {
                for (int i = 1; i <= spec.base.n_sources; ++i)
                    table.header.push_back(column_name(out, d, i));
            } else {
                table.header.push_back(column_name(out, d, 0));
            }
        }
    if (spec.with_sim)
        for (Discipline d : spec.disciplines)
            for (int i = 1; i <= spec.base.n_sources; ++i) {
                table.header.push_back(column_name("sim_delta1", d, i));
                table.header.push_back(column_name("sim_delta1_ci", d, i));
            }

    std::vector<double> mgf_at;
    for (const auto& out : spec.outputs)
        if (out.rfind("mgf@", 0) == 0) mgf_at.push_back(std::stod(out.substr(4)));

    for (double value : spec.grid()) {
        SystemParams p;
        std::vector<double> row{value};
        try {
            p = spec.params_at(value);
            for (const auto& out : spec.outputs)
                for (Discipline d : spec.disciplines) {
                    std::vector<AoiReport> reports;
                    for (int i = 1; i <= spec.base.n_sources; ++i)
                        reports.push_back(
                            analyze(p, d, i, spec.method, mgf_at));
                    if (out == "jfi" || out == "sum_aoi") {
                        std::vector<double> means;
                        for (const auto& r : reports) means.push_back(r.mean);
                        row.push_back(out == "jfi" ? jfi(means)
                                                   : sum_aoi(means));
                        continue;
                    }
                    for (const auto& r : reports) {
                        if (out == "mean") row.push_back(r.mean);
                        else if (out == "second_moment")
                            row.push_back(r.second_moment);
                        else if (out == "std") row.push_back(r.std_dev);
                        else if (out.rfind("mgf@", 0) == 0) {
                            const double want = std::stod(out.substr(4));
                            double got = NAN;
                            for (const auto& [sbar, m] : r.mgf_samples)
                                if (sbar == want) got = m;
                            row.push_back(got);
                        } else {
                            throw std::invalid_argument(
                                "unknown sweep output '" + out + "'");
                        }
                    }
                }
            if (spec.with_sim)
                for (Discipline d : spec.disciplines) {
                    SimResult sr = replicate(p, d, spec.sim);
                    for (int i = 0; i < spec.base.n_sources; ++i) {
                        row.push_back(sr.mean[i].estimate);
                        row.push_back(sr.mean[i].ci_half_width);
                    }
                }
        } catch (const std::exception& e) {
            throw std::runtime_error(
                "sweep cell " + std::string(to_string(spec.param)) + "=" +
                format_double(value) + " failed: " + e.what());
        }
        for (double v : row)
            if (!std::isfinite(v))
                throw std::runtime_error(
                    "sweep cell " + std::string(to_string(spec.param)) + "=" +
                    format_double(value) + " produced a non-finite value");
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string to_csv(const SweepTable& table) {
    std::string out;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const SweepTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj;
        for (size_t i = 0; i < row.size(); ++i)
            obj[table.header[i]] = row[i];
        rows.push_back(obj);
    }
    return rows;
}

}  // namespace aoi
