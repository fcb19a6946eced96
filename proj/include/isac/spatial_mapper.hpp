// SPDX-License-Identifier: Apache-2.0

#ifndef isac_spatial_mapper_H
#define isac_spatial_mapper_H

#include "isac/comm_generator.hpp"
#include "isac/geometry.hpp"
#include "isac/random.hpp"

#include <optional>
#include <vector>

namespace isac
{
    struct MappingContext
    {
        Vec3 tx;
        Vec3 rx;
        double d_min = 1.0; // Minimum distance between a terminal and its nearest scatterer (m)
        int max_retries = 8;

        Vec3 r() const { return tx - rx; } // Points from RX to TX
        void validate() const;
    };

    // Scatterer positions relative to TX.
    struct ScattererPath
    {
        Vec3 fbs;                   // First-bounce scatterer
        Vec3 lbs;                   // Last-bounce scatterer
        double len_b = 0.0;         // TX to FBS
        double len_c = 0.0;         // FBS to LBS
        double len_a = 0.0;         // LBS to RX
        bool single_bounce = false; // fbs == lbs, len_c == 0
    };

    enum class MappingMode
    {
        per_cluster,
        per_ray
    };

    struct MappedCluster
    {
        CommCluster base;
        std::size_t cluster_index = 0;
        double path_length = 0.0;            // Total propagation length d_l
        ScattererPath path;                  // From the cluster mean angles
        std::vector<ScattererPath> ray_paths; // Filled in per-ray mode
        Vec3 origin;                         // TX position

        Vec3 fbs_global() const { return origin + path.fbs; }
        Vec3 lbs_global() const { return origin + path.lbs; }
    };

    // delay * c + |TX - RX|
    double total_path_length(double delay, const MappingContext &ctx);

    // Places the FBS at |b| along b_hat and solves for the LBS along a_hat so that the total
    // length is d_l. Returns std::nullopt when no such LBS exists (non-positive denominator).
    // Falls back to a single bounce when the LBS ends up closer than d_min to RX.
    std::optional<ScattererPath> place_scatterers(const MappingContext &ctx, double path_length,
                                                  const Vec3 &b_hat, const Vec3 &a_hat, double len_b);

    // Single scatterer on the departure ray at the delay ellipsoid.
    std::optional<ScattererPath> single_bounce_path(const MappingContext &ctx, double path_length, const Vec3 &b_hat);

    // Draws |b| ~ U(d_min, d_l / 2) and retries infeasible draws before falling back to a single bounce.
    ScattererPath map_path(const MappingContext &ctx, double path_length, const SphericalAngles &departure,
                           const SphericalAngles &arrival, RandomStream &rng);

    // Returns std::nullopt for the zero-delay cluster, which has no scatterer.
    // Throws std::invalid_argument for negative delays.
    std::optional<MappedCluster> map_cluster(const CommCluster &cluster, std::size_t index, const MappingContext &ctx,
                                             RandomStream &rng, MappingMode mode = MappingMode::per_cluster);

    std::vector<MappedCluster> map_clusters(const std::vector<CommCluster> &clusters, const MappingContext &ctx,
                                            RandomStream &rng, MappingMode mode = MappingMode::per_cluster);
}

#endif
