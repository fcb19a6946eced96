// SPDX-License-Identifier: Apache-2.0

#include "isac/scenario.hpp"
#include "isac/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

std::string isac::to_string(ScenarioKind kind)
{
    switch (kind)
    {
    case ScenarioKind::UMi:
        return "UMi";
    case ScenarioKind::UMa:
        return "UMa";
    case ScenarioKind::RMa:
        return "RMa";
    }
    return "?";
}

std::string isac::to_string(LinkCondition cond)
{
    return cond == LinkCondition::LOS ? "LOS" : "NLOS";
}

isac::ScenarioKind isac::parse_scenario_kind(const std::string &name)
{
    if (name == "UMi")
        return ScenarioKind::UMi;
    if (name == "UMa")
        return ScenarioKind::UMa;
    if (name == "RMa")
        return ScenarioKind::RMa;
    throw std::invalid_argument("Unknown scenario '" + name + "', expected UMi, UMa or RMa.");
}

isac::LinkCondition isac::parse_link_condition(const std::string &name)
{
    if (name == "LOS")
        return LinkCondition::LOS;
    if (name == "NLOS")
        return LinkCondition::NLOS;
    throw std::invalid_argument("Unknown propagation condition '" + name + "', expected LOS or NLOS.");
}

void isac::Scenario::validate() const
{
    if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
        throw std::invalid_argument("Carrier frequency must be positive.");
    if (!(bandwidth_hz > 0.0) || bandwidth_hz > carrier_frequency_hz)
        throw std::invalid_argument("Bandwidth must be positive and not exceed the carrier frequency.");
}

void isac::NetworkLayout::validate() const
{
    auto check = [](const Station &s, const std::string &what)
    {
        if (!is_finite(s.position) || !is_finite(s.velocity))
            throw std::invalid_argument(what + " position and velocity must be finite.");
        if (!(s.position.z > 0.0))
            throw std::invalid_argument(what + " height must be positive.");
        if (s.sensing_position && (!is_finite(*s.sensing_position) || !(s.sensing_position->z > 0.0)))
            throw std::invalid_argument(what + " sensing receiver must be finite with positive height.");
    };
    for (const auto &bs : base_stations)
        check(bs, "BS");
    for (const auto &ut : terminals)
        check(ut, "UT");
    for (const auto &bs : base_stations)
        for (const auto &ut : terminals)
            if (distance(bs.position, ut.position) <= 0.0)
                throw std::invalid_argument("BS and UT positions must differ on every link.");
}

double isac::los_probability(ScenarioKind kind, double distance_2d, double h_ut)
{
    if (!(distance_2d >= 0.0))
        throw std::invalid_argument("2D distance cannot be negative.");

    const double d = distance_2d;
    switch (kind)
    {
    case ScenarioKind::UMi:
        if (d <= 18.0)
            return 1.0;
        return 18.0 / d + std::exp(-d / 36.0) * (1.0 - 18.0 / d);

    case ScenarioKind::UMa:
    {
        if (d <= 18.0)
            return 1.0;
        double c = h_ut <= 13.0 ? 0.0 : std::pow((h_ut - 13.0) / 10.0, 1.5);
        double p = (18.0 / d + std::exp(-d / 63.0) * (1.0 - 18.0 / d)) *
                   (1.0 + c * 1.25 * std::pow(d / 100.0, 3) * std::exp(-d / 150.0));
        return std::min(p, 1.0);
    }

    case ScenarioKind::RMa:
        if (d <= 10.0)
            return 1.0;
        return std::exp(-(d - 10.0) / 1000.0);
    }
    return 0.0;
}

isac::LinkCondition isac::assign_propagation_condition(ScenarioKind kind, double distance_2d, double h_ut,
                                                       RandomStream &rng)
{
    double p = los_probability(kind, distance_2d, h_ut);
    return rng.uniform() < p ? LinkCondition::LOS : LinkCondition::NLOS;
}

isac::LinkCondition isac::sensing_condition(LinkCondition tx_to_target, LinkCondition target_to_sx)
{
    return (tx_to_target == LinkCondition::LOS && target_to_sx == LinkCondition::LOS) ? LinkCondition::LOS
                                                                                      : LinkCondition::NLOS;
}

int isac::cluster_count(ScenarioKind kind, LinkCondition cond, ClusterKind which, double sensing_ratio)
{
    const bool los = cond == LinkCondition::LOS;
    int comm = 0;
    switch (kind)
    {
    case ScenarioKind::UMi:
        comm = los ? 12 : 19;
        break;
    case ScenarioKind::UMa:
        comm = los ? 12 : 20;
        break;
    case ScenarioKind::RMa:
        comm = los ? 11 : 10;
        break;
    }
    if (which == ClusterKind::communication)
        return comm;
    return sensing_cluster_count(comm, sensing_ratio);
}

int isac::sensing_cluster_count(int communication_count, double sensing_ratio)
{
    if (!(sensing_ratio > 0.0) || !std::isfinite(sensing_ratio))
        throw std::invalid_argument("Sensing-to-communication cluster ratio must be positive.");
    if (communication_count < 1)
        throw std::invalid_argument("Communication cluster count must be positive.");

    // The small tolerance keeps exact products (e.g. 1.25 * 12) from rounding up.
    return std::max(1, static_cast<int>(std::ceil(sensing_ratio * communication_count - 1e-9)));
}

isac::LspStatistics isac::lsp_statistics(const Scenario &scenario, LinkCondition cond, const LinkGeometry &geometry)
{
    scenario.validate();
    const bool los = cond == LinkCondition::LOS;
    const double d2d = geometry.distance_2d;
    const double h_ut = geometry.h_ut;
    const double h_bs = geometry.h_bs;

    LspStatistics t{};
    switch (scenario.kind)
    {
    case ScenarioKind::UMi:
    {
        // Frequencies below 2 GHz are evaluated at 2 GHz
        const double lg = std::log10(1.0 + std::max(scenario.carrier_frequency_hz / 1e9, 2.0));
        if (los)
        {
            t.num_clusters = 12;
            t.mu_lg_ds = -0.24 * lg - 7.14, t.sigma_lg_ds = 0.38;
            t.mu_lg_asd = -0.05 * lg + 1.21, t.sigma_lg_asd = 0.41;
            t.mu_lg_asa = -0.08 * lg + 1.73, t.sigma_lg_asa = 0.014 * lg + 0.28;
            t.mu_lg_zsa = -0.1 * lg + 0.73, t.sigma_lg_zsa = -0.04 * lg + 0.34;
            t.mu_lg_zsd = std::max(-0.21, -14.8 * d2d / 1000.0 + 0.01 * std::abs(h_ut - h_bs) + 0.83);
            t.sigma_lg_zsd = 0.35;
            t.zod_offset_deg = 0.0;
            t.sigma_sf_db = 4.0;
            t.mu_k_db = 9.0, t.sigma_k_db = 5.0;
            t.r_tau = 3.0;
            t.mu_xpr_db = 9.0, t.sigma_xpr_db = 3.0;
            t.c_asd_deg = 3.0, t.c_asa_deg = 17.0, t.c_zsa_deg = 7.0;
        }
        else
        {
            t.num_clusters = 19;
            t.mu_lg_ds = -0.24 * lg - 6.83, t.sigma_lg_ds = 0.16 * lg + 0.28;
            t.mu_lg_asd = -0.23 * lg + 1.53, t.sigma_lg_asd = 0.11 * lg + 0.33;
            t.mu_lg_asa = -0.08 * lg + 1.81, t.sigma_lg_asa = 0.05 * lg + 0.3;
            t.mu_lg_zsa = -0.04 * lg + 0.92, t.sigma_lg_zsa = -0.07 * lg + 0.41;
            t.mu_lg_zsd = std::max(-0.5, -3.1 * d2d / 1000.0 + 0.01 * std::max(h_ut - h_bs, 0.0) + 0.2);
            t.sigma_lg_zsd = 0.35;
            t.zod_offset_deg = -std::pow(10.0, -1.5 * std::log10(std::max(10.0, d2d)) + 3.3);
            t.sigma_sf_db = 7.82;
            t.mu_k_db = 0.0, t.sigma_k_db = 0.0;
            t.r_tau = 2.1;
            t.mu_xpr_db = 8.0, t.sigma_xpr_db = 3.0;
            t.c_asd_deg = 10.0, t.c_asa_deg = 22.0, t.c_zsa_deg = 7.0;
        }
        break;
    }
    case ScenarioKind::UMa:
    {
        // Frequencies below 6 GHz are evaluated at 6 GHz
        const double lg = std::log10(std::max(scenario.carrier_frequency_hz / 1e9, 6.0));
        if (los)
        {
            t.num_clusters = 12;
            t.mu_lg_ds = -6.955 - 0.0963 * lg, t.sigma_lg_ds = 0.66;
            t.mu_lg_asd = 1.06 + 0.1114 * lg, t.sigma_lg_asd = 0.28;
            t.mu_lg_asa = 1.81, t.sigma_lg_asa = 0.20;
            t.mu_lg_zsa = 0.95, t.sigma_lg_zsa = 0.16;
            t.mu_lg_zsd = std::max(-0.5, -2.1 * d2d / 1000.0 - 0.01 * (h_ut - 1.5) + 0.75);
            t.sigma_lg_zsd = 0.40;
            t.zod_offset_deg = 0.0;
            t.sigma_sf_db = 4.0;
            t.mu_k_db = 9.0, t.sigma_k_db = 3.5;
            t.r_tau = 2.5;
            t.mu_xpr_db = 8.0, t.sigma_xpr_db = 4.0;
            t.c_asd_deg = 5.0, t.c_asa_deg = 11.0, t.c_zsa_deg = 7.0;
        }
        else
        {
            t.num_clusters = 20;
            t.mu_lg_ds = -6.28 - 0.204 * lg, t.sigma_lg_ds = 0.39;
            t.mu_lg_asd = 1.5 - 0.1144 * lg, t.sigma_lg_asd = 0.28;
            t.mu_lg_asa = 2.08 - 0.27 * lg, t.sigma_lg_asa = 0.11;
            t.mu_lg_zsa = -0.3236 * lg + 1.512, t.sigma_lg_zsa = 0.16;
            t.mu_lg_zsd = std::max(-0.5, -2.1 * d2d / 1000.0 - 0.01 * (h_ut - 1.5) + 0.9);
            t.sigma_lg_zsd = 0.49;
            const double a = 0.208 * lg - 0.782, b = 25.0, c = -0.13 * lg + 2.03, e = 7.66 * lg - 5.96;
            t.zod_offset_deg = e - std::pow(10.0, a * std::log10(std::max(b, d2d)) + c);
            t.sigma_sf_db = 6.0;
            t.mu_k_db = 0.0, t.sigma_k_db = 0.0;
            t.r_tau = 2.3;
            t.mu_xpr_db = 7.0, t.sigma_xpr_db = 3.0;
            t.c_asd_deg = 2.0, t.c_asa_deg = 15.0, t.c_zsa_deg = 7.0;
        }
        break;
    }
    case ScenarioKind::RMa:
    {
        if (los)
        {
            t.num_clusters = 11;
            t.mu_lg_ds = -7.49, t.sigma_lg_ds = 0.55;
            t.mu_lg_asd = 0.90, t.sigma_lg_asd = 0.38;
            t.mu_lg_asa = 1.52, t.sigma_lg_asa = 0.24;
            t.mu_lg_zsa = 0.47, t.sigma_lg_zsa = 0.40;
            t.mu_lg_zsd = std::max(-1.0, -0.17 * d2d / 1000.0 - 0.01 * (h_ut - 1.5) + 0.22);
            t.sigma_lg_zsd = 0.34;
            t.zod_offset_deg = 0.0;
            t.sigma_sf_db = 4.0;
            t.mu_k_db = 7.0, t.sigma_k_db = 4.0;
            t.r_tau = 3.8;
            t.mu_xpr_db = 12.0, t.sigma_xpr_db = 4.0;
            t.c_asd_deg = 2.0, t.c_asa_deg = 3.0, t.c_zsa_deg = 3.0;
        }
        else
        {
            t.num_clusters = 10;
            t.mu_lg_ds = -7.43, t.sigma_lg_ds = 0.48;
            t.mu_lg_asd = 0.95, t.sigma_lg_asd = 0.45;
            t.mu_lg_asa = 1.52, t.sigma_lg_asa = 0.13;
            t.mu_lg_zsa = 0.58, t.sigma_lg_zsa = 0.37;
            t.mu_lg_zsd = std::max(-1.0, -0.19 * d2d / 1000.0 - 0.01 * (h_ut - 1.5) + 0.28);
            t.sigma_lg_zsd = 0.30;
            const double dd = std::max(d2d, 1.0);
            t.zod_offset_deg = rad_to_deg(std::atan((35.0 - 3.5) / dd) - std::atan((35.0 - 1.5) / dd));
            t.sigma_sf_db = 8.0;
            t.mu_k_db = 0.0, t.sigma_k_db = 0.0;
            t.r_tau = 1.7;
            t.mu_xpr_db = 7.0, t.sigma_xpr_db = 3.0;
            t.c_asd_deg = 2.0, t.c_asa_deg = 3.0, t.c_zsa_deg = 3.0;
        }
        break;
    }
    }
    t.cluster_shadowing_db = 3.0;
    return t;
}

namespace
{
    struct LspField
    {
        const char *name;
        double isac::LspStatistics::*member;
    };

    constexpr LspField lsp_fields[] = {
        {"mu_lg_ds", &isac::LspStatistics::mu_lg_ds},
        {"sigma_lg_ds", &isac::LspStatistics::sigma_lg_ds},
        {"mu_lg_asd", &isac::LspStatistics::mu_lg_asd},
        {"sigma_lg_asd", &isac::LspStatistics::sigma_lg_asd},
        {"mu_lg_asa", &isac::LspStatistics::mu_lg_asa},
        {"sigma_lg_asa", &isac::LspStatistics::sigma_lg_asa},
        {"mu_lg_zsa", &isac::LspStatistics::mu_lg_zsa},
        {"sigma_lg_zsa", &isac::LspStatistics::sigma_lg_zsa},
        {"mu_lg_zsd", &isac::LspStatistics::mu_lg_zsd},
        {"sigma_lg_zsd", &isac::LspStatistics::sigma_lg_zsd},
        {"zod_offset_deg", &isac::LspStatistics::zod_offset_deg},
        {"sigma_sf_db", &isac::LspStatistics::sigma_sf_db},
        {"mu_k_db", &isac::LspStatistics::mu_k_db},
        {"sigma_k_db", &isac::LspStatistics::sigma_k_db},
        {"r_tau", &isac::LspStatistics::r_tau},
        {"mu_xpr_db", &isac::LspStatistics::mu_xpr_db},
        {"sigma_xpr_db", &isac::LspStatistics::sigma_xpr_db},
        {"c_asd_deg", &isac::LspStatistics::c_asd_deg},
        {"c_asa_deg", &isac::LspStatistics::c_asa_deg},
        {"c_zsa_deg", &isac::LspStatistics::c_zsa_deg},
        {"cluster_shadowing_db", &isac::LspStatistics::cluster_shadowing_db},
    };
}

void isac::set_lsp_field(LspStatistics &stats, const std::string &name, double value)
{
    if (!std::isfinite(value))
        throw std::invalid_argument("LSP override '" + name + "' must be finite.");
    if (name == "num_clusters")
    {
        if (value < 1.0 || value != std::floor(value))
            throw std::invalid_argument("LSP override 'num_clusters' must be a positive integer.");
        stats.num_clusters = static_cast<int>(value);
        return;
    }
    for (const auto &f : lsp_fields)
        if (name == f.name)
        {
            stats.*(f.member) = value;
            return;
        }
    throw std::invalid_argument("Unknown LSP field '" + name + "'.");
}

const std::vector<std::string> &isac::lsp_field_names()
{
    static const std::vector<std::string> names = []
    {
        std::vector<std::string> n;
        for (const auto &f : lsp_fields)
            n.emplace_back(f.name);
        n.emplace_back("num_clusters");
        return n;
    }();
    return names;
}

isac::LspSet isac::default_lsps(const LspStatistics &s, LinkCondition cond, RandomStream &rng)
{
    if (s.sigma_lg_ds < 0.0 || s.sigma_lg_asa < 0.0 || s.sigma_lg_asd < 0.0 || s.sigma_lg_zsa < 0.0 ||
        s.sigma_lg_zsd < 0.0 || s.sigma_sf_db < 0.0 || s.sigma_k_db < 0.0)
        throw std::invalid_argument("LSP spreads cannot be negative.");

    auto lognormal = [&rng](double mu, double sigma)
    { return std::pow(10.0, mu + sigma * rng.normal()); };

    LspSet lsp{};
    lsp.ds_s = lognormal(s.mu_lg_ds, s.sigma_lg_ds);
    lsp.asd_deg = std::min(lognormal(s.mu_lg_asd, s.sigma_lg_asd), 104.0);
    lsp.asa_deg = std::min(lognormal(s.mu_lg_asa, s.sigma_lg_asa), 104.0);
    lsp.zsa_deg = std::min(lognormal(s.mu_lg_zsa, s.sigma_lg_zsa), 52.0);
    lsp.zsd_deg = std::min(lognormal(s.mu_lg_zsd, s.sigma_lg_zsd), 52.0);
    lsp.sf_db = s.sigma_sf_db * rng.normal();
    lsp.k_db = cond == LinkCondition::LOS ? s.mu_k_db + s.sigma_k_db * rng.normal() : 0.0;
    return lsp;
}

isac::LspSet isac::default_lsps(const Scenario &scenario, LinkCondition cond, const LinkGeometry &geometry,
                                RandomStream &rng)
{
    return default_lsps(lsp_statistics(scenario, cond, geometry), cond, rng);
}
