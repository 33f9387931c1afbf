// System parameters of the multi-source energy-harvesting status-update
// system and the derived rate/utilization quantities used everywhere else.
#pragma once

#include <vector>

namespace aoi {

// Validated inputs: N sources with Poisson update rates lambda_i, Poisson
// energy-packet arrivals at rate eta into a battery of capacity B, and
// exponential service at rate mu. All rates share one time unit.
struct SystemParams {
    int n_sources = 1;
    std::vector<double> arrival_rates;  // lambda_i, one per source
    double energy_rate = 1.0;           // eta
    double service_rate = 1.0;          // mu
    int battery_capacity = 1;           // B

    // Throws std::invalid_argument on non-positive/non-finite rates,
    // N < 1, B < 1, or a rate list whose length differs from n_sources.
    void validate() const;

    double total_arrival_rate() const;  // lambda = sum of lambda_i
};

// Rates and utilizations for a chosen source of interest.
struct DerivedRates {
    int source = 1;               // 1-based index of the source of interest
    double total_rate = 0.0;      // lambda
    double other_rate = 0.0;      // lambda_{-i}
    double server_utilization = 0.0;   // rho = lambda/mu
    double source_utilization = 0.0;   // rho_i
    double other_utilization = 0.0;    // rho_{-i}
    double energy_utilization = 0.0;   // beta = eta/mu
};

// Computes all derived quantities for the given source (1-based).
// Validates params and the index.
DerivedRates derive(const SystemParams& params, int source_index);

}  // namespace aoi
