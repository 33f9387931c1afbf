#include "aoi/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace aoi {

void SystemParams::validate() const {
    if (n_sources < 1)
        throw std::invalid_argument("n_sources must be >= 1");
    if (battery_capacity < 1)
        throw std::invalid_argument("battery_capacity must be >= 1");
    if (static_cast<int>(arrival_rates.size()) != n_sources)
        throw std::invalid_argument(
            "arrival_rates has " + std::to_string(arrival_rates.size()) +
            " entries, expected n_sources = " + std::to_string(n_sources));
    auto check_rate = [](double r, const char* name) {
        if (!std::isfinite(r) || r <= 0.0)
            throw std::invalid_argument(std::string(name) +
                                        " must be finite and > 0");
    };
    for (double r : arrival_rates) check_rate(r, "arrival rate");
    check_rate(energy_rate, "energy_rate");
    check_rate(service_rate, "service_rate");
}

double SystemParams::total_arrival_rate() const {
    double sum = 0.0;
    for (double r : arrival_rates) sum += r;
    return sum;
}

DerivedRates derive(const SystemParams& params, int source_index) {
    params.validate();
    if (source_index < 1 || source_index > params.n_sources)
        throw std::invalid_argument("source index " +
                                    std::to_string(source_index) +
                                    " out of range [1.." +
                                    std::to_string(params.n_sources) + "]");
    DerivedRates d;
    d.source = source_index;
    d.total_rate = params.total_arrival_rate();
    d.other_rate = d.total_rate - params.arrival_rates[source_index - 1];
    const double mu = params.service_rate;
    d.server_utilization = d.total_rate / mu;
    d.source_utilization = params.arrival_rates[source_index - 1] / mu;
    d.other_utilization = d.other_rate / mu;
    d.energy_utilization = params.energy_rate / mu;
    return d;
}

}  // namespace aoi
