// SPDX-License-Identifier: Apache-2.0

#include "isac/pathloss.hpp"
#include "isac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

double isac::freespace_comm_pathloss(double distance, double wavelength)
{
    if (!(distance > 0.0) || !std::isfinite(distance))
        throw std::invalid_argument("Pathloss distance must be positive.");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("Wavelength must be positive.");
    return 20.0 * std::log10(4.0 * pi * distance / wavelength);
}

double isac::radar_equation_pathloss(double d1, double d2, double rcs_dbsm, double wavelength)
{
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::invalid_argument("Sensing leg lengths must be positive.");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("Wavelength must be positive.");
    double sigma = std::pow(10.0, rcs_dbsm / 10.0);
    return 10.0 * std::log10(64.0 * pi * pi * pi * d1 * d1 * d2 * d2 / (wavelength * wavelength * sigma));
}

double isac::sensing_pathloss(double d1, double d2, double rcs_dbsm, double wavelength,
                              const PathlossFunction &one_way)
{
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::invalid_argument("Sensing leg lengths must be positive.");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("Wavelength must be positive.");
    return one_way(d1) + one_way(d2) - rcs_dbsm + 10.0 * std::log10(wavelength * wavelength / (4.0 * pi));
}

double isac::sensing_pathloss(double d1, double d2, double rcs_dbsm, double wavelength)
{
    return sensing_pathloss(d1, d2, rcs_dbsm, wavelength,
                            [wavelength](double d)
                            { return freespace_comm_pathloss(d, wavelength); });
}

std::string isac::to_string(PathlossModel model)
{
    return model == PathlossModel::free_space ? "free_space" : "3gpp";
}

isac::PathlossModel isac::parse_pathloss_model(const std::string &name)
{
    if (name == "free_space")
        return PathlossModel::free_space;
    if (name == "3gpp")
        return PathlossModel::three_gpp;
    throw std::invalid_argument("Unknown pathloss model '" + name + "', expected free_space or 3gpp.");
}

namespace
{
    double rma_los_near(double d3, double fc_ghz, double h)
    {
        double hp = std::pow(h, 1.72);
        return 20.0 * std::log10(40.0 * isac::pi * d3 * fc_ghz / 3.0) + std::min(0.03 * hp, 10.0) * std::log10(d3) -
               std::min(0.044 * hp, 14.77) + 0.002 * std::log10(h) * d3;
    }
}

double isac::three_gpp_pathloss(ScenarioKind kind, LinkCondition cond, double distance_2d, double distance_3d,
                                double h_bs, double h_ut, double carrier_frequency_hz)
{
    if (!(distance_3d > 0.0) || !(distance_2d >= 0.0))
        throw std::invalid_argument("Pathloss distances must be positive.");
    if (!(h_bs > 0.0) || !(h_ut > 0.0))
        throw std::invalid_argument("Antenna heights must be positive.");
    if (!(carrier_frequency_hz > 0.0))
        throw std::invalid_argument("Carrier frequency must be positive.");

    const double d3 = std::max(distance_3d, 1.0);
    const double fc = carrier_frequency_hz / 1e9;
    const double lfc = std::log10(fc);
    const double dh2 = (h_bs - h_ut) * (h_bs - h_ut);
    const bool los = cond == LinkCondition::LOS;

    switch (kind)
    {
    case ScenarioKind::UMi:
    case ScenarioKind::UMa:
    {
        const bool umi = kind == ScenarioKind::UMi;
        const double d_bp = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * carrier_frequency_hz / speed_of_light;
        double pl_los;
        if (umi)
        {
            if (d_bp <= 0.0 || distance_2d <= d_bp)
                pl_los = 32.4 + 21.0 * std::log10(d3) + 20.0 * lfc;
            else
                pl_los = 32.4 + 40.0 * std::log10(d3) + 20.0 * lfc - 9.5 * std::log10(d_bp * d_bp + dh2);
        }
        else
        {
            if (d_bp <= 0.0 || distance_2d <= d_bp)
                pl_los = 28.0 + 22.0 * std::log10(d3) + 20.0 * lfc;
            else
                pl_los = 28.0 + 40.0 * std::log10(d3) + 20.0 * lfc - 9.0 * std::log10(d_bp * d_bp + dh2);
        }
        if (los)
            return pl_los;
        double pl_nlos = umi ? 22.4 + 35.3 * std::log10(d3) + 21.3 * lfc - 0.3 * (h_ut - 1.5)
                             : 13.54 + 39.08 * std::log10(d3) + 20.0 * lfc - 0.6 * (h_ut - 1.5);
        return std::max(pl_los, pl_nlos);
    }

    case ScenarioKind::RMa:
    {
        const double h = 5.0, w = 20.0;
        const double d_bp = 2.0 * pi * h_bs * h_ut * carrier_frequency_hz / speed_of_light;
        double pl_los = distance_2d <= d_bp ? rma_los_near(d3, fc, h)
                                            : rma_los_near(d_bp, fc, h) + 40.0 * std::log10(d3 / d_bp);
        if (los)
            return pl_los;
        double l11 = std::log10(11.75 * h_ut);
        double pl_nlos = 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
                         (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
                         (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d3) - 3.0) + 20.0 * lfc -
                         (3.2 * l11 * l11 - 4.97);
        return std::max(pl_los, pl_nlos);
    }
    }
    return 0.0;
}

isac::PathlossFunction isac::make_pathloss_function(PathlossModel model, const Scenario &scenario,
                                                    LinkCondition cond, double h_bs, double h_ut)
{
    const double lambda = scenario.wavelength();
    if (model == PathlossModel::free_space)
        return [lambda](double d)
        { return freespace_comm_pathloss(d, lambda); };

    const double dh = h_bs - h_ut;
    return [=](double d)
    {
        if (!(d > 0.0))
            throw std::invalid_argument("Pathloss distance must be positive.");
        double d2 = std::sqrt(std::max(d * d - dh * dh, 0.0));
        return three_gpp_pathloss(scenario.kind, cond, d2, d, h_bs, h_ut, scenario.carrier_frequency_hz);
    };
}
