// SPDX-License-Identifier: Apache-2.0

#include "isac/comm_generator.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <stdexcept>

isac::SphericalAngles isac::CommCluster::ray_arrival(std::size_t m) const
{
    const auto &o = rays.at(m).arrival_offset;
    return SphericalAngles::wrapped(arrival.azimuth + o.azimuth, arrival.zenith + o.zenith);
}

isac::SphericalAngles isac::CommCluster::ray_departure(std::size_t m) const
{
    const auto &o = rays.at(m).departure_offset;
    return SphericalAngles::wrapped(departure.azimuth + o.azimuth, departure.zenith + o.zenith);
}

isac::LosDirections isac::LosDirections::between(const Vec3 &tx, const Vec3 &rx)
{
    return {angles_from_vector(tx - rx), angles_from_vector(rx - tx)};
}

std::vector<double> isac::raw_cluster_delays(double ds, double r_tau, int n, RandomStream &rng)
{
    if (!(ds > 0.0) || !std::isfinite(ds))
        throw std::invalid_argument("Delay spread must be positive.");
    if (!(r_tau > 1.0))
        throw std::invalid_argument("Delay distribution proportionality factor must exceed 1.");
    if (n < 1)
        throw std::invalid_argument("Number of clusters must be at least 1.");

    std::vector<double> tau(static_cast<std::size_t>(n));
    for (auto &t : tau)
        t = -r_tau * ds * std::log(rng.uniform_positive());
    return tau;
}

std::vector<double> isac::generate_cluster_delays(double ds, double r_tau, int n, RandomStream &rng)
{
    auto tau = raw_cluster_delays(ds, r_tau, n, rng);
    std::sort(tau.begin(), tau.end());
    const double t0 = tau.front();
    for (auto &t : tau)
        t -= t0;
    return tau;
}

double isac::los_delay_scaling(double k)
{
    return 0.7705 - 0.0433 * k + 0.0002 * k * k + 0.000017 * k * k * k;
}

std::vector<double> isac::generate_cluster_powers(const std::vector<double> &delays, double ds, double r_tau,
                                                  double cluster_shadowing_db, RandomStream &rng)
{
    if (delays.empty())
        throw std::invalid_argument("At least one cluster delay is required.");
    if (!(ds > 0.0) || !(r_tau > 1.0))
        throw std::invalid_argument("Delay spread must be positive and r_tau must exceed 1.");
    if (cluster_shadowing_db < 0.0)
        throw std::invalid_argument("Per-cluster shadowing cannot be negative.");

    std::vector<double> p(delays.size());
    for (std::size_t n = 0; n < p.size(); ++n)
    {
        double z = cluster_shadowing_db * rng.normal();
        p[n] = std::exp(-delays[n] * (r_tau - 1.0) / (r_tau * ds)) * std::pow(10.0, -z / 10.0);
    }
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto &x : p)
        x /= sum;
    return p;
}

namespace
{
    // Piecewise-linear lookup in a table keyed by cluster count, clamped at both ends.
    double table_lookup(const std::map<int, double> &table, int n)
    {
        n = std::max(n, 2);
        auto hi = table.lower_bound(n);
        if (hi == table.end())
            return std::prev(hi)->second;
        if (hi->first == n || hi == table.begin())
            return hi->second;
        auto lo = std::prev(hi);
        double w = double(n - lo->first) / double(hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    }

    const std::map<int, double> azimuth_table = {
        {2, 0.501}, {3, 0.680}, {4, 0.779}, {5, 0.860}, {8, 1.018}, {10, 1.090}, {11, 1.123},
        {12, 1.146}, {14, 1.190}, {15, 1.221}, {16, 1.226}, {19, 1.273}, {20, 1.289}, {25, 1.358}};

    const std::map<int, double> zenith_table = {
        {2, 0.430}, {3, 0.594}, {4, 0.697}, {8, 0.889}, {10, 0.957}, {11, 1.031},
        {12, 1.104}, {15, 1.1088}, {19, 1.184}, {20, 1.178}, {25, 1.282}};
}

double isac::azimuth_scaling(int n, std::optional<double> k_db)
{
    double c = table_lookup(azimuth_table, n);
    if (k_db)
    {
        double k = *k_db;
        c *= 1.1035 - 0.028 * k - 0.002 * k * k + 0.0001 * k * k * k;
    }
    return c;
}

double isac::zenith_scaling(int n, std::optional<double> k_db)
{
    double c = table_lookup(zenith_table, n);
    if (k_db)
    {
        double k = *k_db;
        c *= 1.3086 + 0.0339 * k - 0.0077 * k * k + 0.0002 * k * k * k;
    }
    return c;
}

isac::ClusterAngles isac::generate_cluster_angles(const std::vector<double> &powers, const AngularSpreads &spreads,
                                                  const LosDirections &los, std::optional<double> k_db,
                                                  double zod_offset_deg, RandomStream &rng)
{
    if (powers.empty())
        throw std::invalid_argument("At least one cluster power is required.");
    if (spreads.asa_deg < 0.0 || spreads.asd_deg < 0.0 || spreads.zsa_deg < 0.0 || spreads.zsd_deg < 0.0)
        throw std::invalid_argument("Angular spreads cannot be negative.");

    const std::size_t n_clusters = powers.size();
    const int n = static_cast<int>(n_clusters);

    // Powers used for the angle mapping include the direct path in LOS
    std::vector<double> p = powers;
    if (k_db)
    {
        double k = std::pow(10.0, *k_db / 10.0);
        for (auto &x : p)
            x /= (k + 1.0);
        p[0] += k / (k + 1.0);
    }
    const double p_max = *std::max_element(p.begin(), p.end());

    const double c_az = azimuth_scaling(n, k_db);
    const double c_zen = zenith_scaling(n, k_db);

    // Returns cluster offsets (degrees) relative to the reference direction
    auto azimuths = [&](double spread)
    {
        std::vector<double> a(n_clusters);
        for (std::size_t i = 0; i < n_clusters; ++i)
        {
            double ratio = std::max(p[i] / p_max, 1e-300);
            double base = 2.0 * (spread / 1.4) * std::sqrt(-std::log(ratio)) / c_az;
            double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
            a[i] = sign * base + rng.normal(0.0, spread / 7.0);
        }
        if (k_db)
        {
            double first = a[0];
            for (auto &x : a)
                x -= first;
        }
        return a;
    };

    auto zeniths = [&](double spread)
    {
        std::vector<double> z(n_clusters);
        for (std::size_t i = 0; i < n_clusters; ++i)
        {
            double ratio = std::max(p[i] / p_max, 1e-300);
            double base = -spread * std::log(ratio) / c_zen;
            double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
            z[i] = sign * base + rng.normal(0.0, spread / 7.0);
        }
        if (k_db)
        {
            double first = z[0];
            for (auto &x : z)
                x -= first;
        }
        return z;
    };

    auto aoa = azimuths(spreads.asa_deg);
    auto aod = azimuths(spreads.asd_deg);
    auto zoa = zeniths(spreads.zsa_deg);
    auto zod = zeniths(spreads.zsd_deg);
    const double zod_offset = k_db ? 0.0 : zod_offset_deg;

    ClusterAngles out;
    out.arrival.reserve(n_clusters);
    out.departure.reserve(n_clusters);
    for (std::size_t i = 0; i < n_clusters; ++i)
    {
        out.arrival.push_back(SphericalAngles::wrapped(los.arrival.azimuth + deg_to_rad(aoa[i]),
                                                       los.arrival.zenith + deg_to_rad(zoa[i])));
        out.departure.push_back(SphericalAngles::wrapped(los.departure.azimuth + deg_to_rad(aod[i]),
                                                         los.departure.zenith + deg_to_rad(zod[i] + zod_offset)));
    }
    return out;
}

const std::array<double, isac::rays_per_cluster> &isac::ray_offset_basis()
{
    static const std::array<double, rays_per_cluster> basis = {
        0.0447, -0.0447, 0.1413, -0.1413, 0.2492, -0.2492, 0.3715, -0.3715, 0.5129, -0.5129,
        0.6797, -0.6797, 0.8844, -0.8844, 1.1481, -1.1481, 1.5195, -1.5195, 2.1551, -2.1551};
    return basis;
}

std::vector<isac::Ray> isac::make_rays(const IntraClusterSpreads &s)
{
    const auto &basis = ray_offset_basis();
    std::vector<Ray> rays(rays_per_cluster);
    for (std::size_t m = 0; m < rays.size(); ++m)
    {
        double a = basis[m];
        rays[m].arrival_offset = {deg_to_rad(s.c_asa_deg * a), deg_to_rad(s.c_zsa_deg * a)};
        rays[m].departure_offset = {deg_to_rad(s.c_asd_deg * a), deg_to_rad(s.c_zsd_deg * a)};
    }
    return rays;
}

void isac::couple_rays_and_xpr(CommCluster &cluster, double xpr_mu_db, double xpr_sigma_db, RandomStream &rng)
{
    if (cluster.rays.empty())
        throw std::invalid_argument("Cluster has no rays to couple.");
    if (xpr_sigma_db < 0.0)
        throw std::invalid_argument("XPR spread cannot be negative.");

    auto &rays = cluster.rays;
    const std::size_t n = rays.size();
    std::vector<double> aoa(n), zoa(n), aod(n), zod(n);
    for (std::size_t m = 0; m < n; ++m)
    {
        aoa[m] = rays[m].arrival_offset.azimuth;
        zoa[m] = rays[m].arrival_offset.zenith;
        aod[m] = rays[m].departure_offset.azimuth;
        zod[m] = rays[m].departure_offset.zenith;
    }
    rng.shuffle(aoa.begin(), aoa.end());
    rng.shuffle(zoa.begin(), zoa.end());
    rng.shuffle(aod.begin(), aod.end());
    rng.shuffle(zod.begin(), zod.end());

    for (std::size_t m = 0; m < n; ++m)
    {
        auto &r = rays[m];
        r.arrival_offset = {aoa[m], zoa[m]};
        r.departure_offset = {aod[m], zod[m]};
        r.xpr = std::pow(10.0, rng.normal(xpr_mu_db, xpr_sigma_db) / 10.0);
        for (auto &ph : r.phases)
            ph = rng.uniform(0.0, two_pi);
    }
}

std::vector<isac::CommCluster> isac::generate_comm_clusters(const LspSet &lsp, const LspStatistics &stats,
                                                            LinkCondition cond, const LosDirections &los,
                                                            RandomStream &rng, int num_clusters)
{
    const int n = num_clusters > 0 ? num_clusters : stats.num_clusters;
    const bool is_los = cond == LinkCondition::LOS;

    auto delays = generate_cluster_delays(lsp.ds_s, stats.r_tau, n, rng);
    auto powers = generate_cluster_powers(delays, lsp.ds_s, stats.r_tau, stats.cluster_shadowing_db, rng);
    if (is_los)
    {
        double c = los_delay_scaling(lsp.k_db);
        for (auto &t : delays)
            t /= c;
    }

    AngularSpreads spreads{lsp.asa_deg, lsp.asd_deg, lsp.zsa_deg, lsp.zsd_deg};
    auto angles = generate_cluster_angles(powers, spreads, los, is_los ? std::optional<double>(lsp.k_db) : std::nullopt,
                                          stats.zod_offset_deg, rng);

    IntraClusterSpreads intra{stats.c_asa_deg, stats.c_asd_deg, stats.c_zsa_deg,
                              0.375 * std::pow(10.0, stats.mu_lg_zsd)};

    std::vector<CommCluster> clusters(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < clusters.size(); ++i)
    {
        auto &c = clusters[i];
        c.delay = delays[i];
        c.power = powers[i];
        c.arrival = angles.arrival[i];
        c.departure = angles.departure[i];
        c.rays = make_rays(intra);
        couple_rays_and_xpr(c, stats.mu_xpr_db, stats.sigma_xpr_db, rng);
    }
    return clusters;
}
