// Discrete-event Monte Carlo simulation of the physical system: Poisson
// update/energy arrivals, exponential service, finite battery, and the
// three LCFS disciplines. Serves as the model-independent oracle for the
// analytical results.
//
// Event rules: energy is harvested only while the server is idle and is
// discarded at a full battery; a delivery consumes one energy packet; an
// update arriving at an idle server with an empty battery is discarded
// under every discipline; WP discards arrivals while busy; PS preempts
// unconditionally; SA preempts on same-source arrivals only. Preemption
// consumes no energy. Each source's AoI resets to the delivered packet's
// age at its delivery and grows at slope 1 otherwise.
#pragma once

#include "aoi/chains.hpp"
#include "aoi/params.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace aoi {

struct SimConfig {
    double horizon = 1e6;          // simulated time units per replication
    double warmup_fraction = 0.01; // excluded from all integrals
    std::uint64_t seed = 1;
    int replications = 1;
    int batches = 30;              // batch-means batches per replication
    std::vector<double> mgf_s_values;  // raw exponents s for empirical MGF

    void validate() const;  // throws std::invalid_argument
};

// One estimated quantity with its batch-means uncertainty.
struct SimMetric {
    double estimate = 0.0;
    double stderr_mean = 0.0;  // standard error of the pooled mean
    double ci_half_width = 0.0;  // Student-t at 0.975
    std::vector<double> batch_values;  // one per batch (pooled over reps)
};

struct SourceCounts {
    std::uint64_t generated = 0;
    std::uint64_t served = 0;
    std::uint64_t preempted = 0;
    std::uint64_t discarded = 0;  // includes a packet cut off at horizon
};

struct SimResult {
    Discipline discipline = Discipline::WP;
    int replications = 0;
    double measured_time = 0.0;  // post-warmup time per replication

    std::vector<SimMetric> mean;            // per source
    std::vector<SimMetric> second_moment;   // per source
    // mgf[i][j]: source i, exponent mgf_s_values[j]
    std::vector<std::vector<SimMetric>> mgf;

    // Post-warmup occupancy fraction of each discrete (battery, occupant)
    // state, indexed like the matching chain's states.
    std::vector<double> occupancy;

    std::vector<SourceCounts> counts;  // per source
    std::uint64_t energy_harvested = 0;
    std::uint64_t energy_discarded = 0;
};

// Single replication. `trace` (optional) receives one line per event:
// time, event, source, battery, per-source AoI.
SimResult simulate(const SystemParams& params, Discipline d,
                   const SimConfig& config, std::ostream* trace = nullptr);

// `replications` independent runs with seeds split from config.seed,
// pooled into one SimResult (batch values concatenated in replication
// order, occupancy averaged, counts summed). The parallel version runs
// replications across OpenMP threads; results are identical to the
// serial reference regardless of scheduling.
SimResult replicate(const SystemParams& params, Discipline d,
                    const SimConfig& config);
SimResult replicate_serial(const SystemParams& params, Discipline d,
                           const SimConfig& config);

}  // namespace aoi
