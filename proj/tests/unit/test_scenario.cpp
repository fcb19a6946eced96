// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isac/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace isac;

TEST_CASE("UMi line-of-sight probability")
{
    CHECK(los_probability(ScenarioKind::UMi, 10.0, 1.5) == 1.0);
    CHECK(los_probability(ScenarioKind::UMi, 18.0, 1.5) == 1.0);
    // Independent evaluation of 18/d + exp(-d/36)(1 - 18/d) at d = 36
    CHECK(los_probability(ScenarioKind::UMi, 36.0, 1.5) == doctest::Approx(0.5 + std::exp(-1.0) * 0.5).epsilon(1e-12));
    CHECK(los_probability(ScenarioKind::UMi, 36.0, 1.5) == doctest::Approx(0.6839).epsilon(1e-4));
    CHECK(los_probability(ScenarioKind::UMi, 1e7, 1.5) < 1e-5);

    for (auto kind : {ScenarioKind::UMi, ScenarioKind::UMa, ScenarioKind::RMa})
    {
        double prev = 1.0;
        for (double d = 1.0; d < 5000.0; d *= 1.3)
        {
            double p = los_probability(kind, d, 1.5);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            CHECK(p <= prev + 1e-12);
            prev = p;
        }
    }
}

TEST_CASE("propagation condition draws are deterministic and follow the probability")
{
    RandomStream a(9), b(9);
    int los = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
    {
        auto ca = assign_propagation_condition(ScenarioKind::UMi, 36.0, 1.5, a);
        auto cb = assign_propagation_condition(ScenarioKind::UMi, 36.0, 1.5, b);
        REQUIRE(ca == cb);
        los += ca == LinkCondition::LOS;
    }
    CHECK(double(los) / n == doctest::Approx(0.6839).epsilon(0.02));
    RandomStream c(1);
    for (int i = 0; i < 100; ++i)
        CHECK(assign_propagation_condition(ScenarioKind::UMi, 10.0, 1.5, c) == LinkCondition::LOS);
}

TEST_CASE("sensing condition table")
{
    using enum LinkCondition;
    CHECK(sensing_condition(LOS, LOS) == LOS);
    CHECK(sensing_condition(LOS, NLOS) == NLOS);
    CHECK(sensing_condition(NLOS, LOS) == NLOS);
    CHECK(sensing_condition(NLOS, NLOS) == NLOS);
}

TEST_CASE("cluster counts")
{
    using enum LinkCondition;
    const auto comm = ClusterKind::communication;
    const auto sens = ClusterKind::sensing;
    CHECK(cluster_count(ScenarioKind::UMi, LOS, comm) == 12);
    CHECK(cluster_count(ScenarioKind::UMi, NLOS, comm) == 19);
    CHECK(cluster_count(ScenarioKind::UMa, LOS, comm) == 12);
    CHECK(cluster_count(ScenarioKind::UMa, NLOS, comm) == 20);
    CHECK(cluster_count(ScenarioKind::RMa, LOS, comm) == 11);
    CHECK(cluster_count(ScenarioKind::RMa, NLOS, comm) == 10);

    CHECK(cluster_count(ScenarioKind::UMi, LOS, sens) == 16);
    CHECK(cluster_count(ScenarioKind::UMi, NLOS, sens) == 26);
    CHECK(cluster_count(ScenarioKind::UMa, LOS, sens) == 16);
    CHECK(cluster_count(ScenarioKind::UMa, NLOS, sens) == 27);
    CHECK(cluster_count(ScenarioKind::RMa, LOS, sens) == 15);
    CHECK(cluster_count(ScenarioKind::RMa, NLOS, sens) == 14);

    for (auto kind : {ScenarioKind::UMi, ScenarioKind::UMa, ScenarioKind::RMa})
        for (auto cond : {LOS, NLOS})
        {
            int n = cluster_count(kind, cond, comm);
            CHECK(cluster_count(kind, cond, sens) == int(std::ceil(1.32 * n - 1e-9)));
        }
    CHECK(sensing_cluster_count(10, 1.0) == 10);
    CHECK(sensing_cluster_count(1, 0.01) == 1);
    CHECK_THROWS_AS(sensing_cluster_count(0, 1.32), std::invalid_argument);
    CHECK(cluster_count(ScenarioKind::UMi, LOS, sens, 2.0) == 24);
    CHECK(rays_per_cluster == 20);
}

TEST_CASE("log-normal LSP draws")
{
    Scenario sc;
    LinkGeometry g{50.0, 10.0, 1.5};
    auto st = lsp_statistics(sc, LinkCondition::NLOS, g);

    RandomStream r1(4), r2(4);
    auto a = default_lsps(st, LinkCondition::NLOS, r1);
    auto b = default_lsps(st, LinkCondition::NLOS, r2);
    CHECK(a.ds_s == b.ds_s);
    CHECK(a.asa_deg == b.asa_deg);
    CHECK(a.zsd_deg == b.zsd_deg);
    CHECK(a.k_db == 0.0);

    std::vector<double> ds;
    RandomStream rng(17);
    for (int i = 0; i < 10000; ++i)
    {
        auto l = default_lsps(st, LinkCondition::NLOS, rng);
        REQUIRE(l.ds_s > 0.0);
        REQUIRE(l.asa_deg > 0.0);
        REQUIRE(l.asa_deg <= 104.0);
        REQUIRE(l.zsa_deg <= 52.0);
        ds.push_back(l.ds_s);
    }
    std::nth_element(ds.begin(), ds.begin() + 5000, ds.end());
    double median = std::pow(10.0, st.mu_lg_ds);
    CHECK(std::abs(ds[5000] / median - 1.0) < 0.10);

    auto flat = st;
    flat.sigma_lg_ds = 0.0;
    auto l = default_lsps(flat, LinkCondition::NLOS, rng);
    CHECK(l.ds_s == std::pow(10.0, st.mu_lg_ds));
}

TEST_CASE("table overrides and validation")
{
    Scenario sc;
    auto st = lsp_statistics(sc, LinkCondition::LOS, {30.0, 10.0, 1.5});
    set_lsp_field(st, "r_tau", 2.5);
    CHECK(st.r_tau == 2.5);
    CHECK_THROWS_AS(set_lsp_field(st, "no_such_field", 1.0), std::invalid_argument);
    CHECK(std::find(lsp_field_names().begin(), lsp_field_names().end(), "mu_lg_ds") != lsp_field_names().end());

    Scenario bad;
    bad.carrier_frequency_hz = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = Scenario{};
    bad.bandwidth_hz = 2.0 * bad.carrier_frequency_hz;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    NetworkLayout layout;
    layout.base_stations.push_back({{0, 0, 10}});
    layout.terminals.push_back({{10, 0, -1}});
    CHECK_THROWS_AS(layout.validate(), std::invalid_argument);
    layout.terminals[0].position = {0, 0, 10};
    CHECK_THROWS_AS(layout.validate(), std::invalid_argument);
    layout.terminals[0].position = {10, 0, 1.5};
    CHECK_NOTHROW(layout.validate());
    CHECK(layout.link_count() == 1);

    CHECK(parse_scenario_kind("UMa") == ScenarioKind::UMa);
    CHECK_THROWS_AS(parse_scenario_kind("InH"), std::invalid_argument);
    CHECK(parse_link_condition(to_string(LinkCondition::NLOS)) == LinkCondition::NLOS);
}
