// SPDX-License-Identifier: Apache-2.0

#include "isac/sensing.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

void isac::EvolutionModel::validate() const
{
    if (!(a > 0.0) || !(b > 0.0) || !(knee > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(knee))
        throw std::invalid_argument("Evolution model constants must be positive.");
}

void isac::NewbornDistribution::validate() const
{
    if (!(upper > lower))
        throw std::invalid_argument("Newborn proportion support must satisfy lower < upper.");
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw std::invalid_argument("Newborn proportion variance must be positive.");
    if (!(mean >= lower && mean <= upper))
        throw std::invalid_argument("Newborn proportion mean must lie within its support.");
}

std::string isac::to_string(SensingKind kind)
{
    switch (kind)
    {
    case SensingKind::shared:
        return "shared";
    case SensingKind::newborn:
        return "newborn";
    case SensingKind::ut_target:
        return "ut_target";
    }
    return "?";
}

isac::SensingKind isac::parse_sensing_kind(const std::string &name)
{
    if (name == "shared")
        return SensingKind::shared;
    if (name == "newborn")
        return SensingKind::newborn;
    if (name == "ut_target")
        return SensingKind::ut_target;
    throw std::invalid_argument("Unknown sensing cluster kind '" + name + "'.");
}

double isac::evolution_probability(double normalized_distance, const EvolutionModel &model)
{
    if (!(normalized_distance >= 0.0))
        throw std::invalid_argument("Normalized perception distance cannot be negative.");
    if (normalized_distance <= model.knee)
        return 1.0;
    return std::min(1.0, model.a * std::exp(-model.b * normalized_distance));
}

double isac::evolution_probability(double r, double path_length, double d, const EvolutionModel &model)
{
    if (!(d > 0.0))
        throw std::invalid_argument("TX-RX distance must be positive.");
    if (!(r >= 0.0) || !(path_length >= 0.0))
        throw std::invalid_argument("Perception distance and path length cannot be negative.");
    if (std::isinf(r))
        return 0.0;
    return evolution_probability((r / d) * (path_length / d), model);
}

void isac::assign_rcs(SensingCluster &cluster, const RcsModel &model, RandomStream &rng)
{
    cluster.rcs_class = sample_rcs_class(model, rng);
    cluster.ray_rcs_dbsm.resize(cluster.rays.size());
    for (auto &v : cluster.ray_rcs_dbsm)
        v = sample_rcs(model, cluster.rcs_class, rng);
}

std::vector<isac::SensingCluster> isac::assign_shared_clusters(const std::vector<MappedCluster> &mapped,
                                                               const SharingContext &ctx,
                                                               const EvolutionModel &model, const RcsModel &rcs,
                                                               RandomStream &rng)
{
    const double d = distance(ctx.tx, ctx.rx);
    std::vector<SensingCluster> out;
    for (const auto &m : mapped)
    {
        Vec3 anchor = ctx.anchor == PerceptionAnchor::fbs ? m.fbs_global() : m.lbs_global();
        double p = evolution_probability(distance(anchor, ctx.sx), m.path_length, d, model);
        if (!rng.bernoulli(p))
            continue;

        SensingCluster c;
        c.kind = SensingKind::shared;
        c.position = anchor;
        c.samples = {anchor};
        c.power = m.base.power;
        c.rays = m.base.rays;
        c.source_link = ctx.link;
        c.member_links = {ctx.link};
        c.source_cluster = static_cast<int>(m.cluster_index);
        assign_rcs(c, rcs, rng);
        out.push_back(std::move(c));
    }
    return out;
}

double isac::draw_newborn_proportion(const NewbornDistribution &dist, RandomStream &rng)
{
    boost::math::normal_distribution<double> n(dist.mean, std::sqrt(dist.variance));
    const double f_lo = boost::math::cdf(n, dist.lower);
    const double f_hi = boost::math::cdf(n, dist.upper);
    double u = f_lo + (f_hi - f_lo) * rng.uniform_positive();
    u = std::clamp(u, std::nextafter(0.0, 1.0), std::nextafter(1.0, 0.0));
    return std::clamp(boost::math::quantile(n, u), dist.lower, dist.upper);
}

int isac::requested_newborn_count(double proportion, int budget)
{
    if (!(proportion >= 0.0 && proportion <= 1.0))
        throw std::invalid_argument("Newborn proportion must lie in [0, 1].");
    if (budget < 0)
        throw std::invalid_argument("Sensing cluster budget cannot be negative.");
    return static_cast<int>(std::lround(proportion * budget));
}

std::vector<isac::SensingCluster> isac::build_sensing_set(std::vector<SensingCluster> shared, int budget,
                                                          double newborn_proportion, const NewbornFactory &factory,
                                                          std::optional<SensingCluster> ut_target)
{
    int n_newborn = requested_newborn_count(newborn_proportion, budget);
    const int shared_room = std::max(budget - n_newborn, 0);

    if (static_cast<int>(shared.size()) > shared_room)
    {
        // Keep the strongest shared clusters, preserving their original order
        std::vector<std::size_t> idx(shared.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b)
                         { return shared[a].power > shared[b].power; });
        idx.resize(static_cast<std::size_t>(shared_room));
        std::sort(idx.begin(), idx.end());
        std::vector<SensingCluster> kept;
        kept.reserve(idx.size());
        for (auto i : idx)
            kept.push_back(std::move(shared[i]));
        shared = std::move(kept);
    }
    else
        n_newborn = budget - static_cast<int>(shared.size());

    std::vector<SensingCluster> out = std::move(shared);
    if (n_newborn > 0)
    {
        auto born = factory(n_newborn);
        if (static_cast<int>(born.size()) != n_newborn)
            throw std::logic_error("Newborn factory returned the wrong number of clusters.");
        for (auto &c : born)
        {
            c.kind = SensingKind::newborn;
            out.push_back(std::move(c));
        }
    }
    if (ut_target)
    {
        ut_target->kind = SensingKind::ut_target;
        out.push_back(std::move(*ut_target));
    }
    return out;
}

double isac::pair_similarity(const std::vector<Vec3> &r, const std::vector<Vec3> &s)
{
    if (r.empty() || s.empty())
        throw std::invalid_argument("Linkage requires two non-empty point sets.");
    double sum = 0.0;
    for (const auto &x : r)
        for (const auto &y : s)
        {
            Vec3 d = x - y;
            sum += dot(d, d);
        }
    return sum / (double(r.size()) * double(s.size()));
}

isac::MergeResult isac::merge_global_scatterers(std::vector<SensingCluster> clusters, std::size_t cap,
                                                const RcsModel &rcs, RandomStream &rng)
{
    if (cap < 1)
        throw std::invalid_argument("Global cluster cap must be at least 1.");

    MergeResult result;
    const std::size_t n = clusters.size();
    if (n <= cap)
    {
        result.clusters = std::move(clusters);
        return result;
    }

    for (const auto &c : clusters)
        if (c.samples.empty())
            throw std::invalid_argument("Every sensing cluster needs at least one sample point.");

    // Pairwise linkage matrix, updated with the average-linkage recurrence
    std::vector<double> link(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            link[i * n + j] = link[j * n + i] = pair_similarity(clusters[i].samples, clusters[j].samples);

    std::vector<bool> alive(n, true);
    std::size_t count = n;
    while (count > cap)
    {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i)
        {
            if (!alive[i])
                continue;
            for (std::size_t j = i + 1; j < n; ++j)
                if (alive[j] && link[i * n + j] < best)
                {
                    best = link[i * n + j];
                    bi = i;
                    bj = j;
                }
        }

        auto &a = clusters[bi];
        auto &b = clusters[bj];
        const double na = double(a.samples.size());
        const double nb = double(b.samples.size());

        for (std::size_t k = 0; k < n; ++k)
            if (alive[k] && k != bi && k != bj)
                link[bi * n + k] = link[k * n + bi] = (na * link[bi * n + k] + nb * link[bj * n + k]) / (na + nb);

        const double wa = a.power, wb = b.power;
        const double w = wa + wb;
        Vec3 centroid = w > 0.0 ? (a.position * wa + b.position * wb) / w : (a.position + b.position) * 0.5;

        const bool a_dominant = wa >= wb;
        SensingCluster merged = a_dominant ? a : b;
        const SensingCluster &minor = a_dominant ? b : a;
        merged.position = centroid;
        merged.power = w;
        merged.samples.insert(merged.samples.end(), minor.samples.begin(), minor.samples.end());
        merged.id = std::min(a.id, b.id);
        for (int l : minor.member_links)
            if (std::find(merged.member_links.begin(), merged.member_links.end(), l) == merged.member_links.end())
                merged.member_links.push_back(l);
        std::sort(merged.member_links.begin(), merged.member_links.end());

        RcsClass cls = higher_rcs_class(rcs, a.rcs_class, b.rcs_class);
        if (cls != merged.rcs_class)
        {
            merged.rcs_class = cls;
            merged.ray_rcs_dbsm.resize(merged.rays.size());
            for (auto &v : merged.ray_rcs_dbsm)
                v = sample_rcs(rcs, cls, rng);
        }

        clusters[bi] = std::move(merged);
        alive[bj] = false;
        --count;
        result.linkages.push_back(best);
    }

    for (std::size_t i = 0; i < n; ++i)
        if (alive[i])
            result.clusters.push_back(std::move(clusters[i]));
    return result;
}
