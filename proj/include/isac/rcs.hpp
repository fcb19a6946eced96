// SPDX-License-Identifier: Apache-2.0

#ifndef isac_rcs_H
#define isac_rcs_H

#include "isac/random.hpp"

#include <array>
#include <string>

namespace isac
{
    enum class RcsClass
    {
        pedestrian = 0,
        vehicle = 1,
        environment = 2
    };

    std::string to_string(RcsClass cls);
    RcsClass parse_rcs_class(const std::string &name);

    struct RcsRange
    {
        double min_dbsm;
        double max_dbsm;
    };

    // Radar cross section population: a class mixture with a uniform dBsm range per class.
    struct RcsModel
    {
        std::array<double, 3> mixture{0.20, 0.30, 0.50}; // pedestrian, vehicle, environment
        std::array<RcsRange, 3> ranges{RcsRange{-20.0, 0.0}, RcsRange{-5.0, 25.0}, RcsRange{-50.0, 50.0}};

        const RcsRange &range(RcsClass cls) const { return ranges[static_cast<std::size_t>(cls)]; }
        double probability(RcsClass cls) const { return mixture[static_cast<std::size_t>(cls)]; }
        void validate() const;
    };

    struct RcsDraw
    {
        RcsClass cls;
        double dbsm;
    };

    RcsClass sample_rcs_class(const RcsModel &model, RandomStream &rng);
    double sample_rcs(const RcsModel &model, RcsClass cls, RandomStream &rng);
    RcsDraw sample_rcs(const RcsModel &model, RandomStream &rng);

    // The class whose range reaches higher (upper bound first, then lower bound).
    RcsClass higher_rcs_class(const RcsModel &model, RcsClass a, RcsClass b);
}

#endif
