// SPDX-License-Identifier: Apache-2.0

#ifndef isac_scenario_H
#define isac_scenario_H

#include "isac/antenna.hpp"
#include "isac/geometry.hpp"
#include "isac/random.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isac
{
    enum class ScenarioKind
    {
        UMi,
        UMa,
        RMa
    };

    enum class LinkCondition
    {
        LOS,
        NLOS
    };

    enum class ClusterKind
    {
        communication,
        sensing
    };

    std::string to_string(ScenarioKind kind);
    std::string to_string(LinkCondition cond);
    ScenarioKind parse_scenario_kind(const std::string &name);
    LinkCondition parse_link_condition(const std::string &name);

    inline constexpr int rays_per_cluster = 20;
    inline constexpr double default_sensing_ratio = 1.32;

    struct Scenario
    {
        ScenarioKind kind = ScenarioKind::UMi;
        double carrier_frequency_hz = 28.0e9;
        double bandwidth_hz = 1.0e9;

        double wavelength() const { return speed_of_light / carrier_frequency_hz; }
        void validate() const;
    };

    struct Station
    {
        Vec3 position{};
        Vec3 velocity{};
        ArraySpec array{};
        std::optional<Vec3> sensing_position; // BS only: sensing receiver, defaults to the BS (monostatic)

        Vec3 sx() const { return sensing_position.value_or(position); }
    };

    struct NetworkLayout
    {
        std::vector<Station> base_stations;
        std::vector<Station> terminals;

        std::size_t link_count() const { return base_stations.size() * terminals.size(); }
        void validate() const;
    };

    // Probability of a line-of-sight link for a 2D distance (m) and terminal height (m).
    double los_probability(ScenarioKind kind, double distance_2d, double h_ut);

    LinkCondition assign_propagation_condition(ScenarioKind kind, double distance_2d, double h_ut, RandomStream &rng);

    // Echo path is LOS only when both legs are LOS.
    LinkCondition sensing_condition(LinkCondition tx_to_target, LinkCondition target_to_sx);

    // Communication counts follow the standard tables. Sensing counts are ceil(ratio * communication).
    int cluster_count(ScenarioKind kind, LinkCondition cond, ClusterKind which,
                      double sensing_ratio = default_sensing_ratio);

    // ceil(ratio * communication_count), at least 1.
    int sensing_cluster_count(int communication_count, double sensing_ratio = default_sensing_ratio);

    struct LinkGeometry
    {
        double distance_2d = 0.0;
        double h_bs = 0.0;
        double h_ut = 0.0;
    };

    // One row of the large/small-scale parameter table. Spreads are log10 of seconds or degrees.
    struct LspStatistics
    {
        double mu_lg_ds, sigma_lg_ds;
        double mu_lg_asd, sigma_lg_asd;
        double mu_lg_asa, sigma_lg_asa;
        double mu_lg_zsa, sigma_lg_zsa;
        double mu_lg_zsd, sigma_lg_zsd;
        double zod_offset_deg;
        double sigma_sf_db;
        double mu_k_db, sigma_k_db;
        double r_tau;
        double mu_xpr_db, sigma_xpr_db;
        double c_asd_deg, c_asa_deg, c_zsa_deg;
        double cluster_shadowing_db;
        int num_clusters;
    };

    // Table values follow 3GPP TR 38.901 Table 7.5-6, evaluated at the scenario carrier frequency.
    LspStatistics lsp_statistics(const Scenario &scenario, LinkCondition cond, const LinkGeometry &geometry);

    // Overrides a table entry by field name (e.g. "mu_lg_ds"). Throws std::invalid_argument for unknown names.
    void set_lsp_field(LspStatistics &stats, const std::string &name, double value);
    const std::vector<std::string> &lsp_field_names();

    struct LspSet
    {
        double ds_s;    // Delay spread, seconds
        double asa_deg; // Azimuth spread of arrival
        double asd_deg; // Azimuth spread of departure
        double zsa_deg; // Zenith spread of arrival
        double zsd_deg; // Zenith spread of departure
        double sf_db;   // Shadow fading
        double k_db;    // Ricean K factor (LOS only, 0 otherwise)
    };

    // Independent log-normal draws around the table medians. Angular spreads are capped at
    // 104 deg (azimuth) and 52 deg (zenith).
    LspSet default_lsps(const LspStatistics &stats, LinkCondition cond, RandomStream &rng);
    LspSet default_lsps(const Scenario &scenario, LinkCondition cond, const LinkGeometry &geometry, RandomStream &rng);
}

#endif
