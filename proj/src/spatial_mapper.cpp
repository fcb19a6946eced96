// SPDX-License-Identifier: Apache-2.0

#include "isac/spatial_mapper.hpp"
#include "isac/error.hpp"

#include <cmath>
#include <stdexcept>

void isac::MappingContext::validate() const
{
    if (!is_finite(tx) || !is_finite(rx))
        throw std::invalid_argument("Mapping endpoints must be finite.");
    double d = norm(r());
    if (!(d > 0.0))
        throw DegenerateGeometry("TX and RX must not coincide.");
    if (!(d_min > 0.0))
        throw std::invalid_argument("Minimum scatterer distance must be positive.");
    if (!(d_min < 0.5 * d))
        throw std::invalid_argument("Minimum scatterer distance must be below half the TX-RX distance.");
    if (max_retries < 0)
        throw std::invalid_argument("Retry count cannot be negative.");
}

double isac::total_path_length(double delay, const MappingContext &ctx)
{
    if (!(delay >= 0.0))
        throw std::invalid_argument("Cluster delay cannot be negative.");
    return delay * speed_of_light + norm(ctx.r());
}

std::optional<isac::ScattererPath> isac::single_bounce_path(const MappingContext &ctx, double path_length,
                                                            const Vec3 &b_hat)
{
    const Vec3 r = ctx.r();
    double den = 2.0 * (path_length + dot(b_hat, r));
    if (!(den > 0.0))
        return std::nullopt;
    double t = (path_length * path_length - dot(r, r)) / den;
    if (!(t >= 0.0))
        return std::nullopt;

    ScattererPath p;
    p.fbs = b_hat * t;
    p.lbs = p.fbs;
    p.len_b = t;
    p.len_c = 0.0;
    p.len_a = path_length - t;
    p.single_bounce = true;
    return p;
}

std::optional<isac::ScattererPath> isac::place_scatterers(const MappingContext &ctx, double path_length,
                                                          const Vec3 &b_hat, const Vec3 &a_hat, double len_b)
{
    const Vec3 r = ctx.r();
    const Vec3 d = r + b_hat * len_b;     // RX to FBS
    const double d_rest = path_length - len_b;
    const double den = 2.0 * (d_rest - dot(d, a_hat));
    if (!(den > 0.0))
        return std::nullopt;

    const double len_a = (d_rest * d_rest - dot(d, d)) / den;
    if (!(len_a >= ctx.d_min))
        return single_bounce_path(ctx, path_length, b_hat);

    ScattererPath p;
    p.fbs = b_hat * len_b;
    p.lbs = -r + a_hat * len_a;
    p.len_b = len_b;
    p.len_a = len_a;
    p.len_c = d_rest - len_a;
    p.single_bounce = false;
    return p;
}

isac::ScattererPath isac::map_path(const MappingContext &ctx, double path_length, const SphericalAngles &departure,
                                   const SphericalAngles &arrival, RandomStream &rng)
{
    if (!(path_length >= norm(ctx.r()) * (1.0 - 1e-12)))
        throw std::invalid_argument("Path length is shorter than the direct distance.");
    const Vec3 b_hat = direction_vector(departure);
    const Vec3 a_hat = direction_vector(arrival);

    if (path_length / 2.0 > ctx.d_min)
    {
        for (int attempt = 0; attempt <= ctx.max_retries; ++attempt)
        {
            double len_b = rng.uniform(ctx.d_min, path_length / 2.0);
            if (auto p = place_scatterers(ctx, path_length, b_hat, a_hat, len_b))
                return *p;
        }
    }

    auto p = single_bounce_path(ctx, path_length, b_hat);
    if (!p)
        throw DegenerateGeometry("No scatterer position is consistent with the cluster delay and departure angle.");
    return *p;
}

std::optional<isac::MappedCluster> isac::map_cluster(const CommCluster &cluster, std::size_t index,
                                                     const MappingContext &ctx, RandomStream &rng, MappingMode mode)
{
    if (!(cluster.delay >= 0.0) || !std::isfinite(cluster.delay))
        throw std::invalid_argument("Cluster delay must be finite and non-negative.");
    if (cluster.delay == 0.0)
        return std::nullopt;

    MappedCluster m;
    m.base = cluster;
    m.cluster_index = index;
    m.origin = ctx.tx;
    m.path_length = total_path_length(cluster.delay, ctx);
    m.path = map_path(ctx, m.path_length, cluster.departure, cluster.arrival, rng);

    if (mode == MappingMode::per_ray)
    {
        m.ray_paths.reserve(cluster.rays.size());
        for (std::size_t i = 0; i < cluster.rays.size(); ++i)
            m.ray_paths.push_back(map_path(ctx, m.path_length, cluster.ray_departure(i), cluster.ray_arrival(i), rng));
    }
    return m;
}

std::vector<isac::MappedCluster> isac::map_clusters(const std::vector<CommCluster> &clusters,
                                                    const MappingContext &ctx, RandomStream &rng, MappingMode mode)
{
    ctx.validate();
    std::vector<MappedCluster> out;
    out.reserve(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (auto m = map_cluster(clusters[i], i, ctx, rng, mode))
            out.push_back(std::move(*m));
    return out;
}
