// SPDX-License-Identifier: Apache-2.0

#ifndef isac_realization_H
#define isac_realization_H

#include "isac/antenna.hpp"
#include "isac/comm_generator.hpp"
#include "isac/pathloss.hpp"
#include "isac/random.hpp"
#include "isac/rcs.hpp"
#include "isac/scenario.hpp"
#include "isac/sensing.hpp"
#include "isac/spatial_mapper.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace isac
{
    struct CommTap
    {
        int cluster = -1;                 // -1 for the direct path
        int ray = -1;                     // -1 for the direct path
        double delay = 0.0;               // Excess delay, seconds
        std::complex<double> amplitude;   // First element pair, pathloss and shadowing applied
        std::vector<std::complex<double>> coefficients; // All element pairs, rx-major, without power scaling
        double power = 0.0;               // Linear power share of this tap
        double pathloss_db = 0.0;         // Link pathloss plus shadow fading
        double doppler = 0.0;
        SphericalAngles arrival;
        SphericalAngles departure;
    };

    struct SensingTap
    {
        int cluster_id = 0;
        SensingKind kind = SensingKind::shared;
        Vec3 position;
        RcsClass rcs_class = RcsClass::environment;
        double rcs_dbsm = 0.0;
        int ray = 0;
        double delay = 0.0;               // (d1 + d2) / c
        std::complex<double> amplitude;   // First element pair, echo pathloss applied
        std::vector<std::complex<double>> coefficients;
        double pathloss_db = 0.0;
        double doppler = 0.0;
        LinkCondition condition = LinkCondition::NLOS;
    };

    // One row of the cluster table.
    struct ClusterRecord
    {
        int cluster_id = 0;
        std::string kind;                 // comm | shared | newborn | ut_target
        Vec3 position;                    // NaN when the cluster has no scatterer
        double delay = 0.0;
        double power = 0.0;
        double rcs_dbsm = 0.0;            // NaN for communication clusters
        SphericalAngles arrival;
        SphericalAngles departure;
    };

    struct StageMark
    {
        std::string stage;
        std::uint64_t sequence = 0;
    };

    struct RealizationMetadata
    {
        std::uint64_t seed = 0;
        std::uint64_t config_hash = 0;
        std::vector<StageMark> stages;
    };

    struct ChannelRealization
    {
        int link_id = 0;
        int drop = 0;
        int bs = 0;
        int ut = 0;
        LinkCondition condition = LinkCondition::LOS;
        LspSet lsp{};
        double pathloss_db = 0.0;         // Communication pathloss without shadowing
        std::vector<CommTap> comm_taps;
        std::vector<SensingTap> sensing_taps;
        std::vector<ClusterRecord> clusters;
        RealizationMetadata metadata;

        // Sequence number of a stage mark, or throws std::out_of_range if absent.
        std::uint64_t stage_sequence(const std::string &stage) const;
    };

    struct LinkAssemblyInput
    {
        int link_id = 0;
        int drop = 0;
        int bs = 0;
        int ut = 0;
        Scenario scenario;
        LinkCondition condition = LinkCondition::LOS;
        LspSet lsp{};
        Vec3 tx;
        Vec3 rx;
        Vec3 sx;
        Vec3 ut_velocity;
        AntennaArray tx_array = AntennaArray::single();
        AntennaArray rx_array = AntennaArray::single();
        AntennaArray sx_array = AntennaArray::single();
        std::vector<CommCluster> comm_clusters;
        std::vector<MappedCluster> mapped;
        std::vector<SensingCluster> sensing;      // Targets perceived on this link
        PathlossModel pathloss_model = PathlossModel::free_space;
        double time = 0.0;                        // Snapshot time for the Doppler phase
    };

    // Communication taps (direct path plus 20 rays per cluster) and one sensing tap per echo ray.
    // Sensing leg conditions are drawn from rng. Taps are sorted by delay.
    ChannelRealization assemble_link(const LinkAssemblyInput &in, RandomStream &rng);

    // Total received power in dBm summed over taps (first element pair).
    double received_comm_power_dbm(const ChannelRealization &r, double tx_power_dbm);
    double received_sensing_power_dbm(const ChannelRealization &r, double tx_power_dbm);
}

#endif
