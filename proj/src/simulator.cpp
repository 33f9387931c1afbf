#include "aoi/simulator.hpp"

#include "aoi/kahan.hpp"
#include "aoi/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace aoi {

void SimConfig::validate() const {
    if (!(horizon > 0.0))
        throw std::invalid_argument("horizon must be > 0");
    if (!(warmup_fraction >= 0.0) || warmup_fraction >= 1.0)
        throw std::invalid_argument("warmup_fraction must be in [0, 1)");
    if (replications < 1)
        throw std::invalid_argument("replications must be >= 1");
    if (batches < 2) throw std::invalid_argument("batches must be >= 2");
}

namespace {

enum class Ev { arrival, harvest, delivery };

// Per-source, per-batch piecewise integrals of the sawtooth AoI.
struct Integrals {
    int batches;
    double warmup_end, batch_len, horizon;
    const std::vector<double>& s_values;
    // [source][batch] and [source][s][batch]
    std::vector<std::vector<KahanSum>> int_age, int_age2;
    std::vector<std::vector<std::vector<KahanSum>>> int_exp;

    Integrals(int n_sources, int n_batches, double warmup, double horizon_t,
              const std::vector<double>& s)
        : batches(n_batches),
          warmup_end(warmup),
          batch_len((horizon_t - warmup) / n_batches),
          horizon(horizon_t),
          s_values(s),
          int_age(n_sources, std::vector<KahanSum>(n_batches)),
          int_age2(n_sources, std::vector<KahanSum>(n_batches)),
          int_exp(n_sources,
                  std::vector<std::vector<KahanSum>>(
                      s.size(), std::vector<KahanSum>(n_batches))) {}

    // Age grows linearly from age_at_from over [from, to].
    void add_segment(int src, double from, double to, double age_at_from) {
        double lo = std::max(from, warmup_end);
        while (lo < to) {
            int k = std::min(batches - 1,
                             static_cast<int>((lo - warmup_end) / batch_len));
            double hi = std::min(to, warmup_end + (k + 1) * batch_len);
            // Rounding can land the last boundary a few ulps short of the
            // horizon; fold any sliver into the current batch.
            if (hi <= lo) hi = to;
            const double a = age_at_from + (lo - from);
            const double b = age_at_from + (hi - from);
            const double dt = hi - lo;
            int_age[src][k].add(0.5 * dt * (a + b));
            int_age2[src][k].add((b * b * b - a * a * a) / 3.0);
            for (size_t j = 0; j < s_values.size(); ++j) {
                const double s = s_values[j];
                int_exp[src][j][k].add(
                    s == 0.0 ? dt : (std::exp(s * b) - std::exp(s * a)) / s);
            }
            lo = hi;
        }
    }
};

struct RawBatches {
    // Batch means (integral / batch length), one vector per metric.
    std::vector<std::vector<double>> mean, second;
    std::vector<std::vector<std::vector<double>>> mgf;
    std::vector<double> occupancy;
    std::vector<SourceCounts> counts;
    std::uint64_t energy_harvested = 0, energy_discarded = 0;
};

RawBatches run_one(const SystemParams& params, Discipline d,
                   const SimConfig& config, int stream,
                   std::ostream* trace) {
    const int n = params.n_sources;
    const int b_cap = params.battery_capacity;
    const double mu = params.service_rate;
    const double eta = params.energy_rate;
    const double lambda = params.total_arrival_rate();
    const double horizon = config.horizon;
    const double warmup_end = config.warmup_fraction * horizon;

    Rng rng = Rng::split(config.seed, stream);
    Integrals integrals(n, config.batches, warmup_end, horizon,
                        config.mgf_s_values);

    std::vector<double> occ_time(state_count(d, n, b_cap), 0.0);
    std::vector<SourceCounts> counts(n);
    std::uint64_t harvested = 0, e_discarded = 0;

    double t = 0.0;
    int battery = 0;
    int serving = 0;  // 0 = idle, i = source in service
    double gen_time = 0.0;
    // AoI of source i is age[i] + (t - reset_time[i]).
    std::vector<double> age(n, 0.0), reset_time(n, 0.0);

    auto occupy = [&](double from, double to) {
        const double lo = std::max(from, warmup_end);
        if (lo < to)
            occ_time[state_id(d, n, battery, serving) - 1] += to - lo;
    };
    auto emit_trace = [&](const char* ev, int src) {
        if (!trace) return;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "t=%.9f", t);
        *trace << buf << " event=" << ev << " source=" << src
               << " battery=" << battery << " aoi=[";
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%s%.9f", i ? "," : "",
                          age[i] + (t - reset_time[i]));
            *trace << buf;
        }
        *trace << "]\n";
    };

    while (true) {
        const double rate = lambda + (serving ? mu : eta);
        const double t_next = t + rng.exponential(rate);
        if (t_next >= horizon) {
            occupy(t, horizon);
            break;
        }
        occupy(t, t_next);
        t = t_next;

        double u = rng.u01() * rate;
        if (u < lambda) {
            int src = 0;
            double acc = params.arrival_rates[0];
            while (u >= acc && src + 1 < n)
                acc += params.arrival_rates[++src];
            counts[src].generated++;
            if (serving == 0) {
                if (battery >= 1) {
                    serving = src + 1;
                    gen_time = t;
                } else {
                    counts[src].discarded++;
                }
            } else if (d == Discipline::WP) {
                counts[src].discarded++;
            } else if (d == Discipline::PS || serving == src + 1) {
                counts[serving - 1].preempted++;
                serving = src + 1;
                gen_time = t;
            } else {
                counts[src].discarded++;
            }
            emit_trace("arrival", src + 1);
        } else if (serving) {
            // Delivery: battery pays here, AoI of the served source resets
            // to the delivered packet's age.
            const int src = serving - 1;
            battery--;
            counts[src].served++;
            integrals.add_segment(src, reset_time[src], t, age[src]);
            age[src] = t - gen_time;
            reset_time[src] = t;
            serving = 0;
            emit_trace("delivery", src + 1);
        } else {
            if (battery < b_cap) {
                battery++;
                harvested++;
            } else {
                e_discarded++;
            }
            emit_trace("harvest", 0);
        }
    }
    t = horizon;
    for (int i = 0; i < n; ++i)
        integrals.add_segment(i, reset_time[i], horizon, age[i]);
    // A packet still in service never resolves; book it as discarded so
    // the per-source count balance stays exact.
    if (serving) counts[serving - 1].discarded++;

    RawBatches rb;
    rb.counts = std::move(counts);
    rb.energy_harvested = harvested;
    rb.energy_discarded = e_discarded;
    const double measured = horizon - warmup_end;
    rb.occupancy.resize(occ_time.size());
    for (size_t q = 0; q < occ_time.size(); ++q)
        rb.occupancy[q] = occ_time[q] / measured;

    const double len = integrals.batch_len;
    rb.mean.resize(n);
    rb.second.resize(n);
    rb.mgf.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < config.batches; ++k) {
            rb.mean[i].push_back(integrals.int_age[i][k].value() / len);
            rb.second[i].push_back(integrals.int_age2[i][k].value() / len);
        }
        rb.mgf[i].resize(config.mgf_s_values.size());
        for (size_t j = 0; j < config.mgf_s_values.size(); ++j)
            for (int k = 0; k < config.batches; ++k)
                rb.mgf[i][j].push_back(integrals.int_exp[i][j][k].value() /
                                       len);
    }
    return rb;
}

SimMetric summarize(std::vector<double> batch_values) {
    SimMetric m;
    const size_t nb = batch_values.size();
    KahanSum sum;
    for (double v : batch_values) sum.add(v);
    m.estimate = sum.value() / nb;
    KahanSum sq;
    for (double v : batch_values)
        sq.add((v - m.estimate) * (v - m.estimate));
    const double var = sq.value() / (nb - 1);
    m.stderr_mean = std::sqrt(var / nb);
    boost::math::students_t_distribution<double> dist(
        static_cast<double>(nb - 1));
    m.ci_half_width = boost::math::quantile(dist, 0.975) * m.stderr_mean;
    m.batch_values = std::move(batch_values);
    return m;
}

SimResult assemble(const SystemParams& params, Discipline d,
                   const SimConfig& config,
                   const std::vector<RawBatches>& reps) {
    const int n = params.n_sources;
    SimResult out;
    out.discipline = d;
    out.replications = static_cast<int>(reps.size());
    out.measured_time = config.horizon * (1.0 - config.warmup_fraction);
    out.counts.assign(n, SourceCounts{});
    out.occupancy.assign(reps[0].occupancy.size(), 0.0);

    for (const auto& r : reps) {
        out.energy_harvested += r.energy_harvested;
        out.energy_discarded += r.energy_discarded;
        for (int i = 0; i < n; ++i) {
            out.counts[i].generated += r.counts[i].generated;
            out.counts[i].served += r.counts[i].served;
            out.counts[i].preempted += r.counts[i].preempted;
            out.counts[i].discarded += r.counts[i].discarded;
        }
        for (size_t q = 0; q < out.occupancy.size(); ++q)
            out.occupancy[q] += r.occupancy[q] / reps.size();
    }

    auto pooled = [&](auto&& get) {
        std::vector<double> all;
        for (const auto& r : reps) {
            const std::vector<double>& b = get(r);
            all.insert(all.end(), b.begin(), b.end());
        }
        return summarize(std::move(all));
    };
    out.mgf.resize(n);
    for (int i = 0; i < n; ++i) {
        out.mean.push_back(
            pooled([&](const RawBatches& r) -> const std::vector<double>& {
                return r.mean[i];
            }));
        out.second_moment.push_back(
            pooled([&](const RawBatches& r) -> const std::vector<double>& {
                return r.second[i];
            }));
        for (size_t j = 0; j < config.mgf_s_values.size(); ++j)
            out.mgf[i].push_back(pooled(
                [&](const RawBatches& r) -> const std::vector<double>& {
                    return r.mgf[i][j];
                }));
    }
    return out;
}

}  // namespace

SimResult simulate(const SystemParams& params, Discipline d,
                   const SimConfig& config, std::ostream* trace) {
    params.validate();
    config.validate();
    std::vector<RawBatches> reps;
    reps.push_back(run_one(params, d, config, 0, trace));
    return assemble(params, d, config, reps);
}

SimResult replicate_serial(const SystemParams& params, Discipline d,
                           const SimConfig& config) {
    params.validate();
    config.validate();
    std::vector<RawBatches> reps(config.replications);
    for (int r = 0; r < config.replications; ++r)
        reps[r] = run_one(params, d, config, r, nullptr);
    return assemble(params, d, config, reps);
}

SimResult replicate(const SystemParams& params, Discipline d,
                    const SimConfig& config) {
    params.validate();
    config.validate();
    std::vector<RawBatches> reps(config.replications);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < config.replications; ++r)
        reps[r] = run_one(params, d, config, r, nullptr);
    return assemble(params, d, config, reps);
}

}  // namespace aoi
