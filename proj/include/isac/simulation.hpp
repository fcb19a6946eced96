// SPDX-License-Identifier: Apache-2.0

#ifndef isac_simulation_H
#define isac_simulation_H

#include "isac/config.hpp"
#include "isac/realization.hpp"

#include <cstddef>
#include <vector>

namespace isac
{
    // Outcome of one drop: per-link realizations plus the global mergence trace.
    struct DropResult
    {
        std::vector<ChannelRealization> realizations;
        std::vector<SensingCluster> merged;   // Global population after mergence (UT targets excluded)
        std::vector<double> merge_linkages;   // Linkage of every merge step
        std::size_t cap = 0;
        std::size_t clusters_before_merge = 0;
    };

    // Runs one drop. Links are processed by `workers` threads; results do not depend on it.
    DropResult simulate_drop(const RunConfig &config, int drop, int workers = 1);

    // All drops in order. workers <= 0 uses config.run.parallel.
    std::vector<ChannelRealization> run_simulation(const RunConfig &config, int workers = 0);
}

#endif
