// aoi: exact and simulated Age-of-Information statistics for a
// multi-source status-update system with an energy-harvesting transmitter.
//
// Subcommands:
//   analyze   one discipline, closed-form or SHS-engine evaluation
//   compare   all three disciplines side by side (+ gaps, JFI, sum-AoI)
//   simulate  discrete-event simulation with closed-form cross-checks
//   sweep     parameter sweep emitted as CSV/JSON
#include "aoi/analysis.hpp"
#include "aoi/config.hpp"
#include "aoi/metrics.hpp"
#include "aoi/shs.hpp"
#include "aoi/simulator.hpp"
#include "aoi/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using nlohmann::json;

namespace {

struct CommonFlags {
    std::string config_path, lambda_csv, discipline, method, mgf_csv;
    double eta = 0, mu = 0;
    int battery = 0, source = 0;
    std::string out, format;
};

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> v;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return v;
}

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path,
                    "JSON config file (flags override it)");
    cmd->add_option("--lambda", f.lambda_csv,
                    "per-source update rates, comma separated");
    cmd->add_option("--eta", f.eta, "energy packet arrival rate");
    cmd->add_option("--mu", f.mu, "service rate");
    cmd->add_option("--battery", f.battery, "battery capacity (packets)");
    cmd->add_option("--source", f.source, "source of interest (1-based)");
    cmd->add_option("--discipline", f.discipline, "wp|ps|sa");
    cmd->add_option("--method", f.method, "closed|shs");
    cmd->add_option("--mgf-at", f.mgf_csv,
                    "MGF exponents sbar = s/mu, comma separated");
    cmd->add_option("--out", f.out, "output path (default: stdout)");
    cmd->add_option("--format", f.format, "csv|json");
}

aoi::RunConfig resolve(const CLI::App* cmd, const CommonFlags& f) {
    aoi::RunConfig cfg;
    if (!f.config_path.empty()) cfg = aoi::load_config(f.config_path);
    if (cmd->count("--lambda")) {
        cfg.params.arrival_rates = parse_double_list(f.lambda_csv);
        cfg.params.n_sources =
            static_cast<int>(cfg.params.arrival_rates.size());
    }
    if (cmd->count("--eta")) cfg.params.energy_rate = f.eta;
    if (cmd->count("--mu")) cfg.params.service_rate = f.mu;
    if (cmd->count("--battery")) cfg.params.battery_capacity = f.battery;
    if (cmd->count("--source")) cfg.source = f.source;
    if (cmd->count("--discipline"))
        cfg.discipline = aoi::discipline_from_string(f.discipline);
    if (cmd->count("--method"))
        cfg.method = aoi::method_from_string(f.method);
    if (cmd->count("--mgf-at")) cfg.mgf_at = parse_double_list(f.mgf_csv);
    cfg.params.validate();
    return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output: " + out_path);
    out << text;
}

std::string compare_csv(const aoi::CompareResult& r, int n_sources) {
    std::string csv = "discipline";
    for (const char* metric : {"delta1", "delta2", "std"})
        for (int i = 1; i <= n_sources; ++i)
            csv += "," + std::string(metric) + "_src" + std::to_string(i);
    csv += ",sum_aoi,jfi,gap_wp_ps,gap_wp_sa,gap_sa_ps\n";
    for (const auto& row : r.rows) {
        csv += aoi::to_string(row.discipline);
        for (const auto& rep : row.per_source)
            csv += "," + aoi::format_double(rep.mean);
        for (const auto& rep : row.per_source)
            csv += "," + aoi::format_double(rep.second_moment);
        for (const auto& rep : row.per_source)
            csv += "," + aoi::format_double(rep.std_dev);
        csv += "," + aoi::format_double(row.sum_aoi);
        csv += "," + aoi::format_double(row.jfi);
        csv += "," + aoi::format_double(r.gap_wp_ps);
        csv += "," + aoi::format_double(r.gap_wp_sa);
        csv += "," + aoi::format_double(r.gap_sa_ps);
        csv += "\n";
    }
    return csv;
}

// Closed-form reference for one simulated metric.
struct Reference {
    double mean, second;
    std::vector<double> mgf;  // aligned with the requested sbar list
};

Reference closed_reference(const aoi::SystemParams& p, aoi::Discipline d,
                           int source, const std::vector<double>& sbars) {
    Reference ref{};
    ref.mean = aoi::avg_aoi_closed(d, p, source);
    if (p.battery_capacity == 2) {
        ref.second = aoi::moments_b2(d, p, source).second;
    } else {
        const double bound = aoi::mgf_domain_bound(d, p, source);
        ref.second = aoi::moment_from_mgf(
            [&](double sbar) { return aoi::mgf_closed(d, p, source, sbar); },
            2, p.service_rate, std::min(0.02, bound / 4));
    }
    for (double sbar : sbars)
        ref.mgf.push_back(aoi::mgf_closed(d, p, source, sbar));
    return ref;
}

json metric_json(const aoi::SimMetric& m, double closed) {
    return json{{"estimate", m.estimate},
                {"stderr", m.stderr_mean},
                {"ci95", m.ci_half_width},
                {"closed", closed},
                {"pass", std::abs(m.estimate - closed) <=
                             3.0 * m.stderr_mean}};
}

int run_simulate(const aoi::RunConfig& cfg, const CommonFlags& flags,
                 const std::string& trace_path) {
    aoi::SimConfig sim = cfg.sim;
    sim.mgf_s_values.clear();
    for (double sbar : cfg.mgf_at)
        sim.mgf_s_values.push_back(sbar * cfg.params.service_rate);

    std::optional<std::ofstream> trace;
    if (!trace_path.empty()) {
        trace.emplace(trace_path, std::ios::binary);
        if (!*trace)
            throw std::runtime_error("cannot open trace: " + trace_path);
        if (sim.replications != 1)
            throw std::runtime_error("event trace requires replications=1");
    }

    aoi::SimResult r =
        trace ? aoi::simulate(cfg.params, cfg.discipline, sim, &*trace)
              : aoi::replicate(cfg.params, cfg.discipline, sim);

    json sources = json::array();
    for (int i = 1; i <= cfg.params.n_sources; ++i) {
        Reference ref =
            closed_reference(cfg.params, cfg.discipline, i, cfg.mgf_at);
        json mgf = json::array();
        for (size_t j = 0; j < cfg.mgf_at.size(); ++j) {
            json entry = metric_json(r.mgf[i - 1][j], ref.mgf[j]);
            entry["sbar"] = cfg.mgf_at[j];
            mgf.push_back(entry);
        }
        sources.push_back({{"source", i},
                           {"mean", metric_json(r.mean[i - 1], ref.mean)},
                           {"second_moment",
                            metric_json(r.second_moment[i - 1], ref.second)},
                           {"mgf", mgf},
                           {"counts",
                            {{"generated", r.counts[i - 1].generated},
                             {"served", r.counts[i - 1].served},
                             {"preempted", r.counts[i - 1].preempted},
                             {"discarded", r.counts[i - 1].discarded}}}});
    }
    aoi::RunConfig echo = cfg;
    json doc{{"config", to_json(echo)},
             {"measured_time_per_replication", r.measured_time},
             {"sources", sources},
             {"occupancy", r.occupancy},
             {"energy",
              {{"harvested", r.energy_harvested},
               {"discarded", r.energy_discarded}}}};
    emit(doc.dump(2) + "\n", flags.out);
    return 0;
}

aoi::SweepSpec parse_sweep_spec(const std::string& text) {
    aoi::SweepSpec spec;
    std::stringstream ss(text);
    std::string head;
    std::getline(ss, head, ':');
    spec.param = aoi::sweep_param_from_string(head);
    std::string rest;
    std::getline(ss, rest);
    if (spec.param == aoi::SweepParam::battery) {
        // "1-8" or "1,2,5"
        if (rest.find('-') != std::string::npos) {
            const int lo = std::stoi(rest.substr(0, rest.find('-')));
            const int hi = std::stoi(rest.substr(rest.find('-') + 1));
            for (int b = lo; b <= hi; ++b) spec.battery_values.push_back(b);
        } else {
            for (double v : parse_double_list(rest))
                spec.battery_values.push_back(static_cast<int>(v));
        }
    } else {
        std::vector<double> parts = parse_double_list(rest);
        if (parts.size() != 3)
            throw std::runtime_error(
                "sweep spec needs <param>:<from>:<to>:<points>");
        spec.from = parts[0];
        spec.to = parts[1];
        spec.points = static_cast<int>(parts[2]);
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Age-of-Information statistics for a multi-source updating system "
        "powered by energy harvesting"};
    app.require_subcommand(1);

    CommonFlags fa, fc, fs, fw;
    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "evaluate one discipline");
    add_common(analyze_cmd, fa);

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "all disciplines side by side");
    add_common(compare_cmd, fc);

    CLI::App* simulate_cmd = app.add_subcommand(
        "simulate", "discrete-event simulation with closed-form checks");
    add_common(simulate_cmd, fs);
    double horizon = 0, warmup = 0;
    std::uint64_t seed = 0;
    int replications = 0, batches = 0;
    std::string trace_path;
    simulate_cmd->add_option("--horizon", horizon, "simulated time units");
    simulate_cmd->add_option("--seed", seed, "RNG seed");
    simulate_cmd->add_option("--replications", replications,
                             "independent replications");
    simulate_cmd->add_option("--warmup-fraction", warmup,
                             "fraction of the horizon to discard");
    simulate_cmd->add_option("--batches", batches, "batch-means batches");
    simulate_cmd->add_option("--trace", trace_path,
                             "write an event trace (replications=1)");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "grid sweep, CSV or JSON");
    add_common(sweep_cmd, fw);
    std::string sweep_text, outputs_csv = "mean", disciplines_csv = "wp,ps,sa";
    bool with_sim = false;
    sweep_cmd
        ->add_option("--sweep", sweep_text,
                     "beta:<from>:<to>:<points> | battery:<lo>-<hi> | "
                     "battery:<list> | rho:<f>:<t>:<p> | rho_split:<f>:<t>:<p>")
        ->required();
    sweep_cmd->add_option("--outputs", outputs_csv,
                          "comma list of mean|second_moment|std|mgf@<sbar>|"
                          "jfi|sum_aoi");
    sweep_cmd->add_option("--disciplines", disciplines_csv,
                          "comma list of wp|ps|sa");
    sweep_cmd->add_flag("--with-sim", with_sim,
                        "overlay simulated means and CIs");
    sweep_cmd->add_option("--horizon", horizon, "overlay horizon");
    sweep_cmd->add_option("--seed", seed, "overlay seed");
    sweep_cmd->add_option("--replications", replications,
                          "overlay replications");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze_cmd) {
            aoi::RunConfig cfg = resolve(analyze_cmd, fa);
            aoi::AoiReport r = aoi::analyze(cfg.params, cfg.discipline,
                                            cfg.source, cfg.method, cfg.mgf_at);
            json doc{{"config", to_json(cfg)}, {"report", to_json(r)}};
            emit(doc.dump(2) + "\n", fa.out);
        } else if (*compare_cmd) {
            aoi::RunConfig cfg = resolve(compare_cmd, fc);
            aoi::CompareResult r =
                aoi::compare(cfg.params, cfg.source, cfg.method, cfg.mgf_at);
            if (fc.format == "json")
                emit(to_json(r, cfg.params).dump(2) + "\n", fc.out);
            else
                emit(compare_csv(r, cfg.params.n_sources), fc.out);
        } else if (*simulate_cmd) {
            aoi::RunConfig cfg = resolve(simulate_cmd, fs);
            if (simulate_cmd->count("--horizon")) cfg.sim.horizon = horizon;
            if (simulate_cmd->count("--seed")) cfg.sim.seed = seed;
            if (simulate_cmd->count("--replications"))
                cfg.sim.replications = replications;
            if (simulate_cmd->count("--warmup-fraction"))
                cfg.sim.warmup_fraction = warmup;
            if (simulate_cmd->count("--batches")) cfg.sim.batches = batches;
            return run_simulate(cfg, fs, trace_path);
        } else if (*sweep_cmd) {
            aoi::RunConfig cfg = resolve(sweep_cmd, fw);
            aoi::SweepSpec spec = parse_sweep_spec(sweep_text);
            spec.base = cfg.params;
            spec.source = cfg.source;
            spec.method = cfg.method;
            spec.outputs.clear();
            {
                std::stringstream ss(outputs_csv);
                std::string item;
                while (std::getline(ss, item, ','))
                    spec.outputs.push_back(item);
            }
            spec.disciplines.clear();
            {
                std::stringstream ss(disciplines_csv);
                std::string item;
                while (std::getline(ss, item, ','))
                    spec.disciplines.push_back(
                        aoi::discipline_from_string(item));
            }
            spec.with_sim = with_sim;
            spec.sim = cfg.sim;
            if (sweep_cmd->count("--horizon")) spec.sim.horizon = horizon;
            if (sweep_cmd->count("--seed")) spec.sim.seed = seed;
            if (sweep_cmd->count("--replications"))
                spec.sim.replications = replications;
            aoi::SweepTable t = aoi::run_sweep(spec);
            if (fw.format == "json")
                emit(to_json(t).dump(2) + "\n", fw.out);
            else
                emit(to_csv(t), fw.out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
