// SPDX-License-Identifier: Apache-2.0

#ifndef isac_pathloss_H
#define isac_pathloss_H

#include "isac/scenario.hpp"

#include <functional>

namespace isac
{
    // Maps a leg length in meters to a pathloss in dB.
    using PathlossFunction = std::function<double(double)>;

    // 20 log10(4 pi d / lambda). Throws std::invalid_argument for d <= 0.
    double freespace_comm_pathloss(double distance, double wavelength);

    // Bistatic radar equation evaluated directly: 10 log10(64 pi^3 d1^2 d2^2 / (lambda^2 sigma)).
    double radar_equation_pathloss(double d1, double d2, double rcs_dbsm, double wavelength);

    // Echo pathloss composed from a one-way model:
    // PL(d1) + PL(d2) - sigma[dBsm] + 10 log10(lambda^2 / 4 pi).
    // With the free-space model this equals radar_equation_pathloss.
    double sensing_pathloss(double d1, double d2, double rcs_dbsm, double wavelength, const PathlossFunction &one_way);
    double sensing_pathloss(double d1, double d2, double rcs_dbsm, double wavelength);

    enum class PathlossModel
    {
        free_space,
        three_gpp
    };

    std::string to_string(PathlossModel model);
    PathlossModel parse_pathloss_model(const std::string &name);

    // Urban micro street canyon, urban macro and rural macro pathloss (3GPP TR 38.901 Table 7.4.1-1).
    // Distances and heights in meters. 3D distances below 1 m are evaluated at 1 m. A breakpoint
    // distance <= 0 selects the near branch. Effective environment height is 1 m.
    // Rural macro uses h = 5 m, W = 20 m.
    double three_gpp_pathloss(ScenarioKind kind, LinkCondition cond, double distance_2d, double distance_3d,
                              double h_bs, double h_ut, double carrier_frequency_hz);

    PathlossFunction make_pathloss_function(PathlossModel model, const Scenario &scenario, LinkCondition cond,
                                            double h_bs, double h_ut);
}

#endif
