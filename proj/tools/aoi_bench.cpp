// Timing harness: OpenMP replication throughput against the serial
// reference, plus the cost of the analytical paths for scale.
#include "aoi/analysis.hpp"
#include "aoi/simulator.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>

using namespace aoi;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
}

std::uint64_t event_count(const SimResult& r) {
    std::uint64_t e = r.energy_harvested + r.energy_discarded;
    for (const auto& c : r.counts) e += c.generated + c.served;
    return e;
}

}  // namespace

int main() {
    SystemParams params{2, {1.8, 1.2}, 5.0, 1.0, 5};
    SimConfig cfg;
    cfg.horizon = 2e5;
    cfg.seed = 42;
    cfg.mgf_s_values = {0.05, 0.1, 0.2};

    std::printf("threads available: %d\n\n", omp_get_max_threads());
    std::printf("%-14s %10s %10s %8s %12s\n", "replications", "serial_s",
                "openmp_s", "speedup", "events/s");
    for (int reps : {2, 4, 8, 16}) {
        cfg.replications = reps;
        auto t0 = std::chrono::steady_clock::now();
        SimResult serial = replicate_serial(params, Discipline::SA, cfg);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        SimResult parallel = replicate(params, Discipline::SA, cfg);
        const double tp = seconds_since(t0);
        if (serial.mean[0].estimate != parallel.mean[0].estimate) {
            std::fprintf(stderr, "serial/parallel results diverged\n");
            return 1;
        }
        std::printf("%-14d %10.3f %10.3f %8.2f %12.3e\n", reps, ts, tp,
                    ts / tp, event_count(parallel) / tp);
    }

    std::printf("\nanalytical paths (single call):\n");
    auto t0 = std::chrono::steady_clock::now();
    const int n_eval = 1000;
    double sink = 0.0;
    for (int i = 0; i < n_eval; ++i)
        sink += avg_aoi_closed(Discipline::SA, params, 1);
    std::printf("  closed-form average: %8.2f us\n",
                seconds_since(t0) / n_eval * 1e6);
    t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 100; ++i)
        sink += analyze(params, Discipline::SA, 1, Method::shs).mean;
    std::printf("  SHS-engine analyze:  %8.2f us\n",
                seconds_since(t0) / 100 * 1e6);
    (void)sink;
    return 0;
}
