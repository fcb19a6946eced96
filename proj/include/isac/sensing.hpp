// SPDX-License-Identifier: Apache-2.0

#ifndef isac_sensing_H
#define isac_sensing_H

#include "isac/comm_generator.hpp"
#include "isac/geometry.hpp"
#include "isac/random.hpp"
#include "isac/rcs.hpp"
#include "isac/spatial_mapper.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace isac
{
    // Probability that a communication cluster is also seen by the sensing receiver:
    // 1 up to the knee, a * exp(-b * r) beyond it, clamped to 1.
    struct EvolutionModel
    {
        double a = 2.664;
        double b = 2.208;
        double knee = 0.441;

        void validate() const;
    };

    // Proportion of newborn clusters: normal distribution truncated to [lower, upper].
    struct NewbornDistribution
    {
        double mean = 0.578;
        double variance = 0.021;
        double lower = 0.0;
        double upper = 1.0;

        void validate() const;
    };

    enum class SensingKind
    {
        shared,
        newborn,
        ut_target
    };

    std::string to_string(SensingKind kind);
    SensingKind parse_sensing_kind(const std::string &name);

    // Scatterer point used for the perception distance of a shared cluster.
    enum class PerceptionAnchor
    {
        fbs,
        lbs
    };

    struct SensingCluster
    {
        SensingKind kind = SensingKind::shared;
        Vec3 position;                   // Global coordinates
        std::vector<Vec3> samples;       // Points used by the mergence linkage
        double power = 0.0;              // Linear weight for centroid updates and dominance
        RcsClass rcs_class = RcsClass::environment;
        std::vector<Ray> rays;           // Angle offsets, XPR and phases of the echo rays
        std::vector<double> ray_rcs_dbsm;
        int source_link = 0;
        std::vector<int> member_links;   // Links whose clusters were merged into this one
        int source_cluster = -1;         // Communication cluster index for shared clusters
        Vec3 velocity;
        int id = 0;
    };

    double evolution_probability(double normalized_distance, const EvolutionModel &model = {});

    // Normalized distance (r / d) * (L / d).
    // r: scatterer to sensing receiver, L: cluster path length, d: TX to RX distance.
    double evolution_probability(double r, double path_length, double d, const EvolutionModel &model = {});

    // Draws RCS class and per-ray values for a cluster.
    void assign_rcs(SensingCluster &cluster, const RcsModel &model, RandomStream &rng);

    struct SharingContext
    {
        Vec3 tx;
        Vec3 rx;
        Vec3 sx;
        int link = 0;
        PerceptionAnchor anchor = PerceptionAnchor::fbs;
    };

    // Each mapped cluster independently becomes a shared sensing cluster with its evolution probability.
    std::vector<SensingCluster> assign_shared_clusters(const std::vector<MappedCluster> &mapped,
                                                       const SharingContext &ctx, const EvolutionModel &model,
                                                       const RcsModel &rcs, RandomStream &rng);

    // Inverse-CDF sample of the truncated normal.
    double draw_newborn_proportion(const NewbornDistribution &dist, RandomStream &rng);

    // round(proportion * budget)
    int requested_newborn_count(double proportion, int budget);

    // Produces the requested number of newborn clusters.
    using NewbornFactory = std::function<std::vector<SensingCluster>(int count)>;

    // Combines shared, newborn and UT-target clusters. Shared plus newborn equals the budget:
    // surplus shared clusters are dropped weakest first, a deficit is filled with extra newborn clusters.
    std::vector<SensingCluster> build_sensing_set(std::vector<SensingCluster> shared, int budget,
                                                  double newborn_proportion, const NewbornFactory &factory,
                                                  std::optional<SensingCluster> ut_target);

    // Mean squared Euclidean distance over all sample pairs.
    double pair_similarity(const std::vector<Vec3> &r, const std::vector<Vec3> &s);

    struct MergeResult
    {
        std::vector<SensingCluster> clusters;
        std::vector<double> linkages; // Linkage of each merge, in merge order
    };

    // Agglomerative average-linkage merging until at most cap clusters remain.
    // Ties are resolved toward the lowest index pair.
    MergeResult merge_global_scatterers(std::vector<SensingCluster> clusters, std::size_t cap,
                                        const RcsModel &rcs, RandomStream &rng);
}

#endif
