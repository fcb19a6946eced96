// SPDX-License-Identifier: Apache-2.0

#include "isac/rcs.hpp"

#include <cmath>
#include <stdexcept>

std::string isac::to_string(RcsClass cls)
{
    switch (cls)
    {
    case RcsClass::pedestrian:
        return "pedestrian";
    case RcsClass::vehicle:
        return "vehicle";
    case RcsClass::environment:
        return "environment";
    }
    return "?";
}

isac::RcsClass isac::parse_rcs_class(const std::string &name)
{
    if (name == "pedestrian")
        return RcsClass::pedestrian;
    if (name == "vehicle")
        return RcsClass::vehicle;
    if (name == "environment")
        return RcsClass::environment;
    throw std::invalid_argument("Unknown RCS class '" + name + "'.");
}

void isac::RcsModel::validate() const
{
    double sum = 0.0;
    for (double p : mixture)
    {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("RCS mixture weights must be non-negative.");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("RCS mixture weights must sum to 1.");
    for (const auto &r : ranges)
        if (!std::isfinite(r.min_dbsm) || !std::isfinite(r.max_dbsm) || r.min_dbsm > r.max_dbsm)
            throw std::invalid_argument("RCS ranges must be finite and ordered (min <= max).");
}

isac::RcsClass isac::sample_rcs_class(const RcsModel &model, RandomStream &rng)
{
    double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
    {
        acc += model.mixture[i];
        if (u < acc)
            return static_cast<RcsClass>(i);
    }
    return RcsClass::environment;
}

double isac::sample_rcs(const RcsModel &model, RcsClass cls, RandomStream &rng)
{
    const auto &r = model.range(cls);
    return r.min_dbsm + (r.max_dbsm - r.min_dbsm) * rng.uniform();
}

isac::RcsDraw isac::sample_rcs(const RcsModel &model, RandomStream &rng)
{
    RcsClass cls = sample_rcs_class(model, rng);
    return {cls, sample_rcs(model, cls, rng)};
}

isac::RcsClass isac::higher_rcs_class(const RcsModel &model, RcsClass a, RcsClass b)
{
    const auto &ra = model.range(a);
    const auto &rb = model.range(b);
    if (ra.max_dbsm != rb.max_dbsm)
        return ra.max_dbsm > rb.max_dbsm ? a : b;
    return ra.min_dbsm >= rb.min_dbsm ? a : b;
}
