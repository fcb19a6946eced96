// SPDX-License-Identifier: Apache-2.0

#include "isac/coefficients.hpp"
#include "isac/error.hpp"
#include "isac/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

std::uint64_t isac::ChannelRealization::stage_sequence(const std::string &stage) const
{
    for (const auto &m : metadata.stages)
        if (m.stage == stage)
            return m.sequence;
    throw std::out_of_range("Stage '" + stage + "' was not recorded.");
}

namespace
{
    using cd = std::complex<double>;

    // Evaluates a path function for every element pair, rx-major
    template <class F>
    std::vector<cd> element_pairs(const isac::AntennaArray &rx, const isac::AntennaArray &tx, F &&f)
    {
        std::vector<cd> out;
        out.reserve(rx.size() * tx.size());
        for (const auto &u : rx.elements)
            for (const auto &s : tx.elements)
                out.push_back(f(u, s));
        return out;
    }

    isac::LinkCondition draw_leg(isac::ScenarioKind kind, const isac::Vec3 &a, const isac::Vec3 &b,
                                 isac::RandomStream &rng)
    {
        double h = std::max(std::min(a.z, b.z), 1.0);
        return isac::assign_propagation_condition(kind, isac::distance_2d(a, b), h, rng);
    }
}

isac::ChannelRealization isac::assemble_link(const LinkAssemblyInput &in, RandomStream &rng)
{
    const double lambda = in.scenario.wavelength();
    const bool los = in.condition == LinkCondition::LOS;
    const double k_lin = los ? std::pow(10.0, in.lsp.k_db / 10.0) : 0.0;

    ChannelRealization out;
    out.link_id = in.link_id;
    out.drop = in.drop;
    out.bs = in.bs;
    out.ut = in.ut;
    out.condition = in.condition;
    out.lsp = in.lsp;

    const double d3 = distance(in.tx, in.rx);
    auto comm_pl = make_pathloss_function(in.pathloss_model, in.scenario, in.condition, in.tx.z, in.rx.z);
    out.pathloss_db = comm_pl(d3);
    const double link_loss_db = out.pathloss_db + in.lsp.sf_db;
    const double link_gain = std::pow(10.0, -link_loss_db / 20.0);

    // Communication channel
    if (los)
    {
        CommTap tap;
        tap.power = k_lin / (k_lin + 1.0);
        tap.coefficients = element_pairs(in.rx_array, in.tx_array, [&](const AntennaElement &u, const AntennaElement &s)
                                         { return comm_los_coefficient(u, s, in.tx, in.rx, in.ut_velocity, in.time, lambda).value; });
        auto c0 = comm_los_coefficient(in.rx_array.elements.at(0), in.tx_array.elements.at(0), in.tx, in.rx,
                                       in.ut_velocity, in.time, lambda);
        tap.doppler = c0.doppler;
        tap.amplitude = std::sqrt(tap.power) * link_gain * tap.coefficients.at(0);
        tap.pathloss_db = link_loss_db;
        auto dirs = LosDirections::between(in.tx, in.rx);
        tap.arrival = dirs.arrival;
        tap.departure = dirs.departure;
        out.comm_taps.push_back(std::move(tap));
    }

    const double scatter_share = 1.0 / (k_lin + 1.0);
    for (std::size_t n = 0; n < in.comm_clusters.size(); ++n)
    {
        const auto &cl = in.comm_clusters[n];
        const double ray_power = cl.power * scatter_share / double(cl.rays.size());
        for (std::size_t m = 0; m < cl.rays.size(); ++m)
        {
            const auto &ray = cl.rays[m];
            auto dep = cl.ray_departure(m);
            auto arr = cl.ray_arrival(m);
            CommTap tap;
            tap.cluster = static_cast<int>(n);
            tap.ray = static_cast<int>(m);
            tap.delay = cl.delay;
            tap.power = ray_power;
            tap.coefficients = element_pairs(in.rx_array, in.tx_array, [&](const AntennaElement &u, const AntennaElement &s)
                                             { return comm_nlos_coefficient(u, s, dep, arr, ray, in.ut_velocity, in.time, lambda, cl.delay).value; });
            tap.doppler = dot(direction_vector(dep) + direction_vector(arr), in.ut_velocity) / lambda;
            tap.amplitude = std::sqrt(ray_power) * link_gain * tap.coefficients.at(0);
            tap.pathloss_db = link_loss_db;
            tap.arrival = arr;
            tap.departure = dep;
            out.comm_taps.push_back(std::move(tap));
        }

        // Cluster table: power includes the share taken by the direct path
        ClusterRecord rec;
        rec.cluster_id = static_cast<int>(n);
        rec.kind = "comm";
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.position = {nan, nan, nan};
        for (const auto &m : in.mapped)
            if (m.cluster_index == n)
                rec.position = m.fbs_global();
        rec.delay = cl.delay;
        rec.power = cl.power * scatter_share + (n == 0 ? k_lin / (k_lin + 1.0) : 0.0);
        rec.rcs_dbsm = nan;
        rec.arrival = cl.arrival;
        rec.departure = cl.departure;
        out.clusters.push_back(rec);
    }

    // Sensing channel
    for (const auto &sc : in.sensing)
    {
        const double d1 = distance(sc.position, in.tx);
        const double d2 = distance(sc.position, in.sx);
        if (!(d1 > 0.0) || !(d2 > 0.0))
            throw DegenerateGeometry("Sensing cluster " + std::to_string(sc.id) +
                                     " coincides with the transmitter or sensing receiver.");
        const double delay = (d1 + d2) / speed_of_light;
        const Vec3 r_tx = (sc.position - in.tx) / d1;
        const Vec3 r_sx = (sc.position - in.sx) / d2;
        const auto dir_tx = angles_from_vector(r_tx);
        const auto dir_sx = angles_from_vector(r_sx);

        LinkCondition leg1, leg2;
        if (sc.kind == SensingKind::ut_target)
        {
            leg1 = in.condition;
            leg2 = distance(in.sx, in.tx) == 0.0 ? in.condition : draw_leg(in.scenario.kind, in.sx, sc.position, rng);
        }
        else
        {
            leg1 = draw_leg(in.scenario.kind, in.tx, sc.position, rng);
            leg2 = distance(in.sx, in.tx) == 0.0 ? leg1 : draw_leg(in.scenario.kind, in.sx, sc.position, rng);
        }
        const LinkCondition cond = sensing_condition(leg1, leg2);

        auto pl1 = make_pathloss_function(in.pathloss_model, in.scenario, leg1, in.tx.z, std::max(sc.position.z, 1.0));
        auto pl2 = make_pathloss_function(in.pathloss_model, in.scenario, leg2, in.sx.z, std::max(sc.position.z, 1.0));
        const double one_way_db = pl1(d1) + pl2(d2);

        const std::size_t n_rays = sc.rays.size();
        if (n_rays == 0 || sc.ray_rcs_dbsm.size() != n_rays)
            throw std::invalid_argument("Sensing cluster " + std::to_string(sc.id) + " needs one RCS value per ray.");

        double mean_rcs = 0.0;
        for (std::size_t m = 0; m < n_rays; ++m)
        {
            const auto &ray = sc.rays[m];
            const double rcs = sc.ray_rcs_dbsm[m];
            mean_rcs += rcs / double(n_rays);
            auto tx_dir = SphericalAngles::wrapped(dir_tx.azimuth + ray.departure_offset.azimuth,
                                                   dir_tx.zenith + ray.departure_offset.zenith);
            auto sx_dir = SphericalAngles::wrapped(dir_sx.azimuth + ray.arrival_offset.azimuth,
                                                   dir_sx.zenith + ray.arrival_offset.zenith);
            const Vec3 u_tx = direction_vector(tx_dir);
            const Vec3 u_sx = direction_vector(sx_dir);

            SensingTap tap;
            tap.cluster_id = sc.id;
            tap.kind = sc.kind;
            tap.position = sc.position;
            tap.rcs_class = sc.rcs_class;
            tap.rcs_dbsm = rcs;
            tap.ray = static_cast<int>(m);
            tap.delay = delay;
            tap.condition = cond;
            tap.pathloss_db = one_way_db - rcs + 10.0 * std::log10(lambda * lambda / (4.0 * pi));
            tap.coefficients = element_pairs(in.sx_array, in.tx_array, [&](const AntennaElement &u, const AntennaElement &s)
                                             {
                                                 if (cond == LinkCondition::LOS)
                                                     return los_path_coefficient(u, s, u_tx, u_sx, sc.velocity, in.time, lambda, delay).value;
                                                 return nlos_path_coefficient(u, s, u_tx, u_sx, ray, sc.velocity, in.time, lambda, delay).value; });
            tap.doppler = dot(u_tx + u_sx, sc.velocity) / lambda;
            tap.amplitude = std::sqrt(std::pow(10.0, -tap.pathloss_db / 10.0) / double(n_rays)) * tap.coefficients.at(0);
            out.sensing_taps.push_back(std::move(tap));
        }

        ClusterRecord rec;
        rec.cluster_id = sc.id;
        rec.kind = to_string(sc.kind);
        rec.position = sc.position;
        rec.delay = delay;
        rec.power = sc.power;
        rec.rcs_dbsm = mean_rcs;
        rec.arrival = dir_sx;
        rec.departure = dir_tx;
        out.clusters.push_back(rec);
    }

    std::stable_sort(out.comm_taps.begin(), out.comm_taps.end(), [](const CommTap &a, const CommTap &b)
                     { return a.delay < b.delay; });
    std::stable_sort(out.sensing_taps.begin(), out.sensing_taps.end(), [](const SensingTap &a, const SensingTap &b)
                     { return a.delay < b.delay; });
    return out;
}

double isac::received_comm_power_dbm(const ChannelRealization &r, double tx_power_dbm)
{
    double p = 0.0;
    for (const auto &t : r.comm_taps)
        p += std::norm(t.amplitude);
    return tx_power_dbm + 10.0 * std::log10(p);
}

double isac::received_sensing_power_dbm(const ChannelRealization &r, double tx_power_dbm)
{
    double p = 0.0;
    for (const auto &t : r.sensing_taps)
        p += std::norm(t.amplitude);
    return tx_power_dbm + 10.0 * std::log10(p);
}
