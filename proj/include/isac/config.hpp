// SPDX-License-Identifier: Apache-2.0

#ifndef isac_config_H
#define isac_config_H

#include "isac/pathloss.hpp"
#include "isac/rcs.hpp"
#include "isac/scenario.hpp"
#include "isac/sensing.hpp"
#include "isac/spatial_mapper.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isac
{
    struct ModelConfig
    {
        EvolutionModel evolution;
        NewbornDistribution newborn;
        double sensing_ratio = default_sensing_ratio;
        double d_min = 1.0;
        int max_retries = 8;
        RcsModel rcs;
        RcsClass ut_rcs_class = RcsClass::pedestrian;
        std::map<std::string, double> lsp_overrides;
        PathlossModel pathloss = PathlossModel::free_space;
        MappingMode mapping = MappingMode::per_cluster;
        PerceptionAnchor perception_anchor = PerceptionAnchor::fbs;
        bool cross_link_perception = true;
        std::optional<int> global_cap;             // Default: largest sensing budget over the links
        std::optional<LinkCondition> condition;    // Forces LOS or NLOS on every link
        double tx_power_dbm = 28.0;
        double snapshot_time_s = 0.0;
    };

    struct RunOptions
    {
        std::uint64_t seed = 1;
        int drops = 1;
        int parallel = 1;
        std::vector<std::string> emit{"clusters", "cir", "stats", "cdf"};
    };

    struct ValidationOptions
    {
        int drops = 500;
        double ds_p90_min_s = 10e-9;
        double ds_p90_max_s = 500e-9;
    };

    struct RunConfig
    {
        Scenario scenario;
        NetworkLayout layout;
        ModelConfig model;
        RunOptions run;
        ValidationOptions validation;

        // Throws ConfigError on non-physical values.
        void validate() const;
    };

    // Parses JSON text. Unknown keys, missing required blocks and non-physical values raise
    // ConfigError naming the offending key. Omitted entries take their defaults.
    RunConfig parse_config(const std::string &text);

    // Throws IoError if the file cannot be read.
    RunConfig load_config(const std::string &path);

    // Fully resolved configuration as JSON with sorted keys.
    std::string canonical_json(const RunConfig &config);

    // FNV-1a 64 of the canonical JSON without the seed, worker count and output selection.
    std::uint64_t config_hash(const RunConfig &config);
    std::string hash_string(std::uint64_t hash);

    // Single UMi link at 28 GHz: TX (0, 0, 5), RX (8, 8, 1.5), seed 2024, 500 drops.
    RunConfig preset_validation();

    // Two base stations and three terminals, 3GPP pathloss, seed 7, 10 drops.
    RunConfig preset_multilink(ScenarioKind kind = ScenarioKind::UMi);
}

#endif
