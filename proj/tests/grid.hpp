// Shared parameter grid for cross-oracle tests: every combination of
// N in {1,2,3}, B in {1,2,3,5}, rho in {0.5,1,3}, beta in {0.5,1.5,5}
// at mu = 1, with unequal source splits for N > 1.
#pragma once

#include "aoi/params.hpp"

#include <vector>

struct GridCell {
    aoi::SystemParams params;
    double rho, beta;
};

inline std::vector<GridCell> test_grid() {
    static const double kSplits[3][3] = {
        {1.0, 0.0, 0.0}, {0.6, 0.4, 0.0}, {0.5, 0.3, 0.2}};
    std::vector<GridCell> grid;
    for (int n : {1, 2, 3})
        for (int b : {1, 2, 3, 5})
            for (double rho : {0.5, 1.0, 3.0})
                for (double beta : {0.5, 1.5, 5.0}) {
                    GridCell c;
                    c.rho = rho;
                    c.beta = beta;
                    c.params.n_sources = n;
                    c.params.battery_capacity = b;
                    c.params.service_rate = 1.0;
                    c.params.energy_rate = beta;
                    for (int i = 0; i < n; ++i)
                        c.params.arrival_rates.push_back(rho *
                                                         kSplits[n - 1][i]);
                    grid.push_back(std::move(c));
                }
    return grid;
}
