// SPDX-License-Identifier: Apache-2.0

#ifndef isac_comm_generator_H
#define isac_comm_generator_H

#include "isac/geometry.hpp"
#include "isac/random.hpp"
#include "isac/scenario.hpp"

#include <array>
#include <optional>
#include <vector>

namespace isac
{
    // Angular offset in radians.
    struct AngleDelta
    {
        double azimuth = 0.0;
        double zenith = 0.0;
    };

    struct Ray
    {
        AngleDelta arrival_offset;
        AngleDelta departure_offset;
        double xpr = 1.0;                     // Cross-polarization power ratio, linear
        std::array<double, 4> phases{};       // Initial phases theta-theta, theta-phi, phi-theta, phi-phi
    };

    struct CommCluster
    {
        double delay = 0.0;                   // Excess delay in seconds
        double power = 0.0;                   // Linear share of the scattered power
        SphericalAngles arrival;              // Mean AOA / ZOA
        SphericalAngles departure;            // Mean AOD / ZOD
        std::vector<Ray> rays;

        SphericalAngles ray_arrival(std::size_t m) const;
        SphericalAngles ray_departure(std::size_t m) const;
    };

    // Cluster spreads in degrees
    struct AngularSpreads
    {
        double asa_deg = 0.0;
        double asd_deg = 0.0;
        double zsa_deg = 0.0;
        double zsd_deg = 0.0;
    };

    // Intra-cluster ray spreads in degrees
    struct IntraClusterSpreads
    {
        double c_asa_deg = 0.0;
        double c_asd_deg = 0.0;
        double c_zsa_deg = 0.0;
        double c_zsd_deg = 0.0;
    };

    // Direct-path directions: arrival points from RX toward TX, departure from TX toward RX.
    struct LosDirections
    {
        SphericalAngles arrival;
        SphericalAngles departure;

        static LosDirections between(const Vec3 &tx, const Vec3 &rx);
    };

    struct ClusterAngles
    {
        std::vector<SphericalAngles> arrival;
        std::vector<SphericalAngles> departure;
    };

    // Unsorted exponential delays -r_tau * DS * ln U.
    std::vector<double> raw_cluster_delays(double ds, double r_tau, int n, RandomStream &rng);

    // Sorted delays with the first one at 0.
    std::vector<double> generate_cluster_delays(double ds, double r_tau, int n, RandomStream &rng);

    // Delay compression applied to LOS delays after the powers are computed.
    double los_delay_scaling(double k_db);

    // Exponential power-delay law with per-cluster log-normal shadowing, normalized to sum 1.
    std::vector<double> generate_cluster_powers(const std::vector<double> &delays, double ds, double r_tau,
                                                double cluster_shadowing_db, RandomStream &rng);

    // Scaling factors for the azimuth and zenith angle mapping (n clusters, optional K-factor in dB).
    double azimuth_scaling(int n, std::optional<double> k_db = std::nullopt);
    double zenith_scaling(int n, std::optional<double> k_db = std::nullopt);

    // Cluster mean angles. In LOS (k_db set) the angle powers include the direct path and the
    // first cluster is pinned to the LOS direction. zod_offset_deg applies to NLOS only.
    ClusterAngles generate_cluster_angles(const std::vector<double> &powers, const AngularSpreads &spreads,
                                          const LosDirections &los, std::optional<double> k_db,
                                          double zod_offset_deg, RandomStream &rng);

    // Normalized ray offsets (20 values, unit RMS spread).
    const std::array<double, rays_per_cluster> &ray_offset_basis();

    // Uncoupled rays: ray m carries offset m on all four angles.
    std::vector<Ray> make_rays(const IntraClusterSpreads &spreads);

    // Randomly pairs the four offset sets and draws XPR and initial phases per ray.
    void couple_rays_and_xpr(CommCluster &cluster, double xpr_mu_db, double xpr_sigma_db, RandomStream &rng);

    // Full small-scale generation for one link.
    // num_clusters <= 0 uses the table value.
    std::vector<CommCluster> generate_comm_clusters(const LspSet &lsp, const LspStatistics &stats,
                                                    LinkCondition cond, const LosDirections &los,
                                                    RandomStream &rng, int num_clusters = 0);
}

#endif
