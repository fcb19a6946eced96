// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isac/coefficients.hpp"
#include "isac/comm_generator.hpp"
#include "isac/error.hpp"
#include "isac/pathloss.hpp"
#include "isac/realization.hpp"

#include <cmath>
#include <complex>

using namespace isac;

namespace
{
    const double lambda28 = speed_of_light / 28e9;
}

TEST_CASE("free-space pathloss")
{
    CHECK(std::abs(freespace_comm_pathloss(lambda28 / (4.0 * pi), lambda28)) < 1e-12);
    CHECK(freespace_comm_pathloss(1.0, lambda28) == doctest::Approx(61.39).epsilon(1e-4));
    CHECK(freespace_comm_pathloss(20.0, lambda28) - freespace_comm_pathloss(10.0, lambda28) ==
          doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(freespace_comm_pathloss(0.0, lambda28), std::invalid_argument);
    CHECK_THROWS_AS(freespace_comm_pathloss(-1.0, lambda28), std::invalid_argument);
}

TEST_CASE("echo pathloss")
{
    CHECK(std::abs(sensing_pathloss(1.0, 1.0, 0.0, lambda28) - 72.38) < 0.01);
    CHECK(std::abs(radar_equation_pathloss(1.0, 1.0, 0.0, lambda28) - 72.38) < 0.01);
    // Independent closed form of 10 log10(64 pi^3 / lambda^2)
    CHECK(radar_equation_pathloss(1.0, 1.0, 0.0, lambda28) ==
          doctest::Approx(10.0 * std::log10(64.0 * pi * pi * pi / (lambda28 * lambda28))).epsilon(1e-12));

    double cancel = 10.0 * std::log10(lambda28 * lambda28 / (4.0 * pi));
    CHECK(sensing_pathloss(3.0, 7.0, cancel, lambda28) ==
          doctest::Approx(freespace_comm_pathloss(3.0, lambda28) + freespace_comm_pathloss(7.0, lambda28)).epsilon(1e-12));
    CHECK(sensing_pathloss(3.0, 7.0, 10.0, lambda28) - sensing_pathloss(3.0, 7.0, 0.0, lambda28) ==
          doctest::Approx(-10.0).epsilon(1e-12));

    RandomStream rng(4);
    for (int i = 0; i < 10000; ++i)
    {
        double d1 = rng.uniform(0.5, 1000.0), d2 = rng.uniform(0.5, 1000.0), s = rng.uniform(-50.0, 50.0);
        REQUIRE(std::abs(sensing_pathloss(d1, d2, s, lambda28) - radar_equation_pathloss(d1, d2, s, lambda28)) < 0.01);
        REQUIRE(sensing_pathloss(d1, d2, s, lambda28) == doctest::Approx(sensing_pathloss(d2, d1, s, lambda28)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(sensing_pathloss(0.0, 1.0, 0.0, lambda28), std::invalid_argument);
    CHECK_THROWS_AS(radar_equation_pathloss(1.0, -1.0, 0.0, lambda28), std::invalid_argument);
}

TEST_CASE("standard pathloss models")
{
    const double fc = 28e9, f = 28.0;
    double d2 = 100.0, hb = 10.0, hu = 1.5;
    double d3 = std::hypot(d2, hb - hu);
    double umi_los = 32.4 + 21.0 * std::log10(d3) + 20.0 * std::log10(f);
    CHECK(three_gpp_pathloss(ScenarioKind::UMi, LinkCondition::LOS, d2, d3, hb, hu, fc) ==
          doctest::Approx(umi_los).epsilon(1e-12));
    double umi_nlos = std::max(umi_los, 35.3 * std::log10(d3) + 22.4 + 21.3 * std::log10(f) - 0.3 * (hu - 1.5));
    CHECK(three_gpp_pathloss(ScenarioKind::UMi, LinkCondition::NLOS, d2, d3, hb, hu, fc) ==
          doctest::Approx(umi_nlos).epsilon(1e-12));

    hb = 25.0;
    d3 = std::hypot(d2, hb - hu);
    double uma_los = 28.0 + 22.0 * std::log10(d3) + 20.0 * std::log10(f);
    CHECK(three_gpp_pathloss(ScenarioKind::UMa, LinkCondition::LOS, d2, d3, hb, hu, fc) ==
          doctest::Approx(uma_los).epsilon(1e-12));
    double uma_nlos = std::max(uma_los, 13.54 + 39.08 * std::log10(d3) + 20.0 * std::log10(f) - 0.6 * (hu - 1.5));
    CHECK(three_gpp_pathloss(ScenarioKind::UMa, LinkCondition::NLOS, d2, d3, hb, hu, fc) ==
          doctest::Approx(uma_nlos).epsilon(1e-12));

    for (auto kind : {ScenarioKind::UMi, ScenarioKind::UMa, ScenarioKind::RMa})
    {
        double prev = 0.0;
        for (double d = 10.0; d < 5000.0; d *= 1.2)
        {
            double x = std::hypot(d, 20.0);
            double los = three_gpp_pathloss(kind, LinkCondition::LOS, d, x, 21.5, 1.5, fc);
            double nlos = three_gpp_pathloss(kind, LinkCondition::NLOS, d, x, 21.5, 1.5, fc);
            CHECK(std::isfinite(los));
            CHECK(nlos >= los - 1e-9);
            CHECK(los > prev);
            prev = los;
        }
    }

    Scenario sc;
    auto fs = make_pathloss_function(PathlossModel::free_space, sc, LinkCondition::LOS, 10.0, 1.5);
    CHECK(fs(25.0) == freespace_comm_pathloss(25.0, sc.wavelength()));
    auto gpp = make_pathloss_function(PathlossModel::three_gpp, sc, LinkCondition::LOS, 10.0, 1.5);
    CHECK(gpp(d3) > 0.0);
    CHECK(parse_pathloss_model("3gpp") == PathlossModel::three_gpp);
    CHECK(parse_pathloss_model(to_string(PathlossModel::free_space)) == PathlossModel::free_space);
    CHECK_THROWS_AS(parse_pathloss_model("hata"), std::invalid_argument);
}

TEST_CASE("LOS echo coefficient")
{
    AntennaElement iso;
    SensingGeometry g{{0, 0, 10}, {5, -3, 8}, {40, 20, 1.5}};
    auto c = los_sensing_coefficient(iso, iso, g, {0, 0, 0}, 0.0, lambda28);
    CHECK(std::abs(c.value - std::complex<double>(1.0, 0.0)) < 1e-12);
    CHECK(c.delay == doctest::Approx((distance(g.tx, g.target) + distance(g.target, g.sx)) / speed_of_light).epsilon(1e-15));

    RandomStream rng(5);
    for (int i = 0; i < 1000; ++i)
    {
        SensingGeometry r{{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(1, 30)},
                          {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(1, 30)},
                          {rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(1, 30)}};
        auto v = los_sensing_coefficient(iso, iso, r, {}, rng.uniform(0.0, 1.0), lambda28);
        REQUIRE(std::abs(std::abs(v.value) - 1.0) < 1e-12);
    }

    // Half-wavelength element offset along the departure direction gives a phase of pi
    Vec3 r_tx = unit(g.target - g.tx);
    AntennaElement shifted{r_tx * (lambda28 / 2.0)};
    auto p = los_sensing_coefficient(iso, shifted, g, {}, 0.0, lambda28);
    CHECK(std::abs(p.value - std::complex<double>(-1.0, 0.0)) < 1e-9);
    AntennaElement full{r_tx * lambda28};
    CHECK(std::abs(los_sensing_coefficient(iso, full, g, {}, 0.0, lambda28).value - 1.0) < 1e-9);

    // Monostatic receding target
    SensingGeometry mono{{0, 0, 0}, {0, 0, 0}, {10, 0, 0}};
    auto d = los_sensing_coefficient(iso, iso, mono, {1, 0, 0}, 0.0, lambda28);
    CHECK(std::abs(d.doppler - 186.8) < 0.1);
    CHECK(d.doppler == doctest::Approx(2.0 / lambda28).epsilon(1e-9));
    Vec3 dir = unit(Vec3{3, -4, 2});
    SensingGeometry oblique{{0, 0, 0}, {0, 0, 0}, dir * 25.0};
    CHECK(los_sensing_coefficient(iso, iso, oblique, dir * 2.5, 0.0, lambda28).doppler ==
          doctest::Approx(5.0 / lambda28).epsilon(1e-9));

    SensingGeometry bad{{0, 0, 0}, {1, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(los_sensing_coefficient(iso, iso, bad, {}, 0.0, lambda28), DegenerateGeometry);
}

TEST_CASE("NLOS echo coefficient polarization")
{
    AntennaElement iso;
    Ray ray;
    ray.phases = {0.3, 1.1, 2.0, 4.0};
    SphericalAngles dep{0.4, 1.2}, arr{2.0, 1.7};
    for (double k : {0.1, 1.0, 30.0})
    {
        ray.xpr = k;
        auto c = nlos_sensing_coefficient(iso, iso, dep, arr, ray, {}, 0.0, lambda28, 1e-7);
        CHECK(std::abs(std::abs(c.value) - 1.0) < 1e-12);
        CHECK(c.delay == 1e-7);
    }

    AntennaElement slant{{}, constant_pattern(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0))};
    Ray zero;
    zero.xpr = 1e300;
    CHECK(std::abs(nlos_sensing_coefficient(slant, slant, dep, arr, zero, {}, 0.0, lambda28, 0.0).value - 1.0) < 1e-12);
    zero.xpr = 1.0;
    CHECK(std::abs(nlos_sensing_coefficient(slant, slant, dep, arr, zero, {}, 0.0, lambda28, 0.0).value - 2.0) < 1e-12);

    zero.xpr = 0.0;
    CHECK_THROWS_AS(nlos_sensing_coefficient(slant, slant, dep, arr, zero, {}, 0.0, lambda28, 0.0), std::invalid_argument);
    zero.xpr = -1.0;
    CHECK_THROWS_AS(nlos_path_coefficient(slant, slant, {1, 0, 0}, {0, 1, 0}, zero, {}, 0.0, lambda28, 0.0),
                    std::invalid_argument);
}

TEST_CASE("communication coefficients")
{
    AntennaElement iso;
    auto c = comm_los_coefficient(iso, iso, {0, 0, 10}, {30, 40, 1.5}, {}, 0.0, lambda28);
    CHECK(std::abs(c.value - 1.0) < 1e-12);
    CHECK(c.delay == 0.0);
    // The sum of the two outward directions vanishes on a direct path
    auto m = comm_los_coefficient(iso, iso, {0, 0, 10}, {30, 40, 1.5}, {-3, -4, 0}, 0.5, lambda28);
    CHECK(std::abs(m.doppler) < 1e-9);

    Ray ray;
    ray.xpr = 2.0;
    auto n = comm_nlos_coefficient(iso, iso, {0.3, 1.4}, {2.5, 1.6}, ray, {}, 0.0, lambda28, 5e-8);
    CHECK(std::abs(std::abs(n.value) - 1.0) < 1e-12);
    CHECK(n.delay == 5e-8);
}

namespace
{
    LinkAssemblyInput basic_input(LinkCondition cond)
    {
        LinkAssemblyInput in;
        in.condition = cond;
        in.tx = {0, 0, 10};
        in.rx = {40, 30, 1.5};
        in.sx = in.tx;
        Scenario sc;
        in.scenario = sc;
        auto st = lsp_statistics(sc, cond, {50.0, 10.0, 1.5});
        RandomStream rng(21);
        in.lsp = default_lsps(st, cond, rng);
        in.comm_clusters = generate_comm_clusters(in.lsp, st, cond, LosDirections::between(in.tx, in.rx), rng);
        return in;
    }
}

TEST_CASE("link assembly bookkeeping")
{
    for (auto cond : {LinkCondition::LOS, LinkCondition::NLOS})
    {
        auto in = basic_input(cond);
        RandomStream rng(1);
        auto comm_only = assemble_link(in, rng);
        CHECK(comm_only.sensing_taps.empty());
        std::size_t expected = in.comm_clusters.size() * 20 + (cond == LinkCondition::LOS ? 1 : 0);
        CHECK(comm_only.comm_taps.size() == expected);
        for (std::size_t i = 1; i < comm_only.comm_taps.size(); ++i)
            CHECK(comm_only.comm_taps[i].delay >= comm_only.comm_taps[i - 1].delay);
        double share = 0.0;
        for (auto &t : comm_only.comm_taps)
            share += t.power;
        CHECK(share == doctest::Approx(1.0).epsilon(1e-9));

        SensingCluster a;
        a.kind = SensingKind::newborn;
        a.position = {20, -10, 5};
        a.rays.resize(20);
        a.ray_rcs_dbsm.assign(20, 3.0);
        SensingCluster b = a;
        b.position = {-15, 25, 3};
        b.rays.resize(7);
        b.ray_rcs_dbsm.assign(7, -4.0);
        in.sensing = {a, b};
        RandomStream rng2(1);
        auto full = assemble_link(in, rng2);
        CHECK(full.comm_taps.size() == expected);
        CHECK(full.sensing_taps.size() == 27);
        for (std::size_t i = 0; i < full.comm_taps.size(); ++i)
            CHECK(full.comm_taps[i].amplitude == comm_only.comm_taps[i].amplitude);
    }
}

TEST_CASE("received echo power equals transmit power minus echo pathloss")
{
    auto in = basic_input(LinkCondition::LOS);
    in.comm_clusters.clear();
    SensingCluster target;
    target.kind = SensingKind::ut_target;
    target.position = in.rx;
    target.rays.resize(1);
    target.ray_rcs_dbsm = {-7.5};
    in.sensing = {target};
    RandomStream rng(3);
    auto r = assemble_link(in, rng);
    REQUIRE(r.sensing_taps.size() == 1);
    double d = distance(in.tx, in.rx);
    double pl = sensing_pathloss(d, d, -7.5, in.scenario.wavelength());
    CHECK(r.sensing_taps[0].pathloss_db == doctest::Approx(pl).epsilon(1e-12));
    CHECK(std::abs(received_sensing_power_dbm(r, 28.0) - (28.0 - pl)) < 1e-9);
    CHECK(r.sensing_taps[0].delay == doctest::Approx(2.0 * d / speed_of_light).epsilon(1e-14));
}

TEST_CASE("array coefficients")
{
    auto in = basic_input(LinkCondition::NLOS);
    in.tx_array = AntennaArray::uniform_planar(2, 2, lambda28 / 2.0, isotropic_pattern());
    in.rx_array = AntennaArray::from_spec({"directional", 1, 2, 0.5, 45.0}, lambda28);
    RandomStream rng(2);
    auto r = assemble_link(in, rng);
    REQUIRE(!r.comm_taps.empty());
    for (auto &t : r.comm_taps)
        CHECK(t.coefficients.size() == 8);
    CHECK(AntennaArray::from_spec({"isotropic", 2, 3, 0.5, 0.0}, lambda28).size() == 6);
}
