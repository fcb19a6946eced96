// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isac/rcs.hpp"
#include "isac/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace isac;

namespace
{
    SensingCluster point(Vec3 p, double power = 1.0, int id = 0)
    {
        SensingCluster c;
        c.position = p;
        c.samples = {p};
        c.power = power;
        c.id = id;
        c.member_links = {id};
        c.rays.resize(20);
        c.ray_rcs_dbsm.assign(20, 0.0);
        return c;
    }

    // Independent O(n^3) agglomeration from the raw sample sets, no recurrence
    std::vector<std::vector<Vec3>> naive_merge(std::vector<std::vector<Vec3>> sets, std::size_t cap,
                                               std::vector<double> &linkages)
    {
        while (sets.size() > cap)
        {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < sets.size(); ++i)
                for (std::size_t j = i + 1; j < sets.size(); ++j)
                {
                    double s = 0.0;
                    for (auto &x : sets[i])
                        for (auto &y : sets[j])
                            s += dot(x - y, x - y);
                    s /= double(sets[i].size() * sets[j].size());
                    if (s < best)
                        best = s, bi = i, bj = j;
                }
            sets[bi].insert(sets[bi].end(), sets[bj].begin(), sets[bj].end());
            sets.erase(sets.begin() + long(bj));
            linkages.push_back(best);
        }
        return sets;
    }
}

TEST_CASE("evolution probability")
{
    EvolutionModel m;
    CHECK(evolution_probability(0.3) == 1.0);
    CHECK(evolution_probability(0.0) == 1.0);
    CHECK(evolution_probability(0.441) == 1.0);
    CHECK(evolution_probability(1.0) == doctest::Approx(2.664 * std::exp(-2.208)).epsilon(1e-15));
    CHECK(std::abs(evolution_probability(1.0) - 0.2928) < 1e-4);
    // Mismatch of the fitted exponential at the knee, before clamping
    CHECK(std::abs(m.a * std::exp(-m.b * m.knee) - 1.0) <= 0.0065);

    double prev = 1.0;
    for (double r = 0.0; r < 5.0; r += 0.01)
    {
        double p = evolution_probability(r);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(p <= prev);
        if (r > 0.45)
            CHECK(p < prev);
        prev = p;
    }
    CHECK_THROWS_AS(evolution_probability(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(evolution_probability(1.0, 10.0, 0.0), std::invalid_argument);
    CHECK(evolution_probability(std::numeric_limits<double>::infinity(), 10.0, 5.0) == 0.0);
    CHECK(evolution_probability(5.0, 20.0, 10.0) == evolution_probability(1.0));
    CHECK(evolution_probability(1e6, 20.0, 10.0) < 1e-12);
    for (double r = 0.0; r < 50.0; r += 0.5)
        CHECK(evolution_probability(r + 0.5, 20.0, 10.0) <= evolution_probability(r, 20.0, 10.0));
}

TEST_CASE("shared-cluster assignment rate")
{
    MappedCluster m;
    m.origin = {0, 0, 0};
    m.path.fbs = {0, 5, 0};
    m.path.lbs = {0, 5, 0};
    m.path_length = 20.0;
    m.base.power = 0.3;
    m.base.rays.resize(20);
    SharingContext ctx{{0, 0, 0}, {10, 0, 0}, {0, 0, 0}, 3};
    RcsModel rcs;
    RandomStream rng(11);
    std::vector<MappedCluster> batch(1000, m);
    long shared = 0;
    for (int t = 0; t < 100; ++t)
        shared += long(assign_shared_clusters(batch, ctx, {}, rcs, rng).size());
    CHECK(std::abs(shared / 1e5 - 0.2928) < 0.005);

    auto one = assign_shared_clusters({m}, {{0, 0, 0}, {10, 0, 0}, {0, 5, 0}, 3}, {}, rcs, rng);
    REQUIRE(one.size() == 1);
    CHECK(one[0].kind == SensingKind::shared);
    CHECK(one[0].position == Vec3{0, 5, 0});
    CHECK(one[0].source_link == 3);
    CHECK(one[0].ray_rcs_dbsm.size() == 20);
    for (double v : one[0].ray_rcs_dbsm)
    {
        CHECK(v >= rcs.range(one[0].rcs_class).min_dbsm);
        CHECK(v <= rcs.range(one[0].rcs_class).max_dbsm);
    }

    SharingContext far{{0, 0, 0}, {10, 0, 0}, {1e9, 0, 0}, 0};
    CHECK(assign_shared_clusters(batch, far, {}, rcs, rng).empty());
}

TEST_CASE("newborn proportion")
{
    NewbornDistribution d;
    RandomStream rng(12);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i)
    {
        double x = draw_newborn_proportion(d, rng);
        REQUIRE(x >= 0.0);
        REQUIRE(x <= 1.0);
        s += x;
        s2 += x * x;
    }
    double mean = s / n;
    CHECK(std::abs(mean - 0.578) < 0.005);
    CHECK(std::abs(s2 / n - mean * mean - 0.021) < 0.002);

    NewbornDistribution narrow{0.5, 1.0, 0.4, 0.6};
    for (int i = 0; i < 1000; ++i)
    {
        double x = draw_newborn_proportion(narrow, rng);
        CHECK(x >= 0.4);
        CHECK(x <= 0.6);
    }
    CHECK_THROWS_AS((NewbornDistribution{0.5, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((NewbornDistribution{1.5, 0.1}).validate(), std::invalid_argument);
}

TEST_CASE("sensing set composition")
{
    CHECK(requested_newborn_count(0.578, 16) == 9);
    CHECK(requested_newborn_count(0.0, 16) == 0);

    auto factory = [](int count) {
        std::vector<SensingCluster> v;
        for (int i = 0; i < count; ++i)
            v.push_back(point({double(i), 1, 0}, 0.01, 100 + i));
        return v;
    };
    std::vector<SensingCluster> shared;
    for (int i = 0; i < 5; ++i)
        shared.push_back(point({double(i), 0, 0}, 0.1 * (i + 1), i));

    auto exact = build_sensing_set(shared, 5, 0.0, factory, std::nullopt);
    REQUIRE(exact.size() == 5);
    for (int i = 0; i < 5; ++i)
        CHECK(exact[std::size_t(i)].id == i);

    SensingCluster ut = point({9, 9, 1.5}, 0.5, 99);
    auto with_ut = build_sensing_set(shared, 5, 0.0, factory, ut);
    REQUIRE(with_ut.size() == 6);
    CHECK(with_ut.back().kind == SensingKind::ut_target);
    CHECK(with_ut.back().position == Vec3{9, 9, 1.5});

    // Budget 16 with proportion 0.578: 9 newborn, 7 shared slots; only 5 shared exist so 11 newborn
    auto filled = build_sensing_set(shared, 16, 0.578, factory, std::nullopt);
    CHECK(filled.size() == 16);
    CHECK(std::count_if(filled.begin(), filled.end(), [](auto &c) { return c.kind == SensingKind::newborn; }) == 11);

    // Budget 6 with proportion 0.5: 3 newborn, the 3 strongest shared clusters kept in order
    auto trimmed = build_sensing_set(shared, 6, 0.5, factory, std::nullopt);
    REQUIRE(trimmed.size() == 6);
    CHECK(trimmed[0].id == 2);
    CHECK(trimmed[1].id == 3);
    CHECK(trimmed[2].id == 4);
    CHECK(trimmed[3].kind == SensingKind::newborn);

    auto broken = [](int) { return std::vector<SensingCluster>{}; };
    CHECK_THROWS(build_sensing_set({}, 4, 0.5, broken, std::nullopt));
}

TEST_CASE("pair similarity")
{
    CHECK(pair_similarity({{1, 2, 3}}, {{1, 2, 3}}) == 0.0);
    std::vector<Vec3> r{{0, 0, 0}, {2, 0, 0}}, s{{1, 1, 0}};
    CHECK(pair_similarity(r, s) == 2.0);
    CHECK(pair_similarity(s, r) == 2.0);
    CHECK_THROWS_AS(pair_similarity({}, s), std::invalid_argument);
}

TEST_CASE("global mergence examples")
{
    RcsModel rcs;
    RandomStream rng(13);

    auto same = merge_global_scatterers({point({1, 2, 3}), point({1, 2, 3}, 1.0, 1)}, 1, rcs, rng);
    REQUIRE(same.clusters.size() == 1);
    CHECK(same.clusters[0].position == Vec3{1, 2, 3});

    auto three = merge_global_scatterers({point({0, 0, 0}, 1.0, 0), point({0.1, 0, 0}, 3.0, 1), point({100, 0, 0}, 1.0, 2)},
                                         2, rcs, rng);
    REQUIRE(three.clusters.size() == 2);
    REQUIRE(three.linkages.size() == 1);
    CHECK(three.linkages[0] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(three.clusters[0].position.x == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(three.clusters[0].power == 4.0);
    CHECK(three.clusters[0].id == 0);
    CHECK(three.clusters[0].member_links == std::vector<int>{0, 1});
    CHECK(three.clusters[1].position == Vec3{100, 0, 0});

    std::vector<SensingCluster> few{point({0, 0, 0}), point({5, 0, 0}, 1.0, 1)};
    auto unchanged = merge_global_scatterers(few, 4, rcs, rng);
    CHECK(unchanged.clusters.size() == 2);
    CHECK(unchanged.linkages.empty());
    CHECK(unchanged.clusters[1].position == Vec3{5, 0, 0});

    CHECK_THROWS_AS(merge_global_scatterers(few, 0, rcs, rng), std::invalid_argument);

    // Merged class follows the higher-reaching RCS range
    auto ped = point({0, 0, 0}, 5.0, 0);
    ped.rcs_class = RcsClass::pedestrian;
    auto env = point({0.1, 0, 0}, 1.0, 1);
    env.rcs_class = RcsClass::environment;
    auto m = merge_global_scatterers({ped, env}, 1, rcs, rng);
    CHECK(m.clusters[0].rcs_class == RcsClass::environment);
    for (double v : m.clusters[0].ray_rcs_dbsm)
        CHECK((v >= -50.0 && v <= 50.0));
}

TEST_CASE("mergence matches a naive agglomeration and is order independent")
{
    RcsModel rcs;
    RandomStream rng(14);
    for (int trial = 0; trial < 30; ++trial)
    {
        std::vector<SensingCluster> cl;
        std::vector<std::vector<Vec3>> sets;
        int n = 5 + int(rng.index(25));
        for (int i = 0; i < n; ++i)
        {
            Vec3 p{rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(0, 30)};
            cl.push_back(point(p, rng.uniform(0.1, 1.0), i));
            sets.push_back({p});
        }
        std::size_t cap = 1 + rng.index(std::size_t(n));
        std::vector<double> expected;
        auto oracle = naive_merge(sets, cap, expected);
        auto got = merge_global_scatterers(cl, cap, rcs, rng);
        REQUIRE(got.clusters.size() == std::min<std::size_t>(cap, std::size_t(n)));
        REQUIRE(got.linkages.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(got.linkages[i] == doctest::Approx(expected[i]).epsilon(1e-9));

        // Survivors are at least as far apart as the last merge
        if (!got.linkages.empty())
            for (std::size_t i = 0; i < got.clusters.size(); ++i)
                for (std::size_t j = i + 1; j < got.clusters.size(); ++j)
                    CHECK(pair_similarity(got.clusters[i].samples, got.clusters[j].samples) >=
                          got.linkages.back() * (1.0 - 1e-12));

        auto shuffled = cl;
        rng.shuffle(shuffled.begin(), shuffled.end());
        auto again = merge_global_scatterers(shuffled, cap, rcs, rng);
        auto key = [](std::vector<SensingCluster> v) {
            std::vector<std::vector<int>> members;
            for (auto &c : v)
                members.push_back(c.member_links);
            std::sort(members.begin(), members.end());
            return members;
        };
        CHECK(key(got.clusters) == key(again.clusters));
    }
}

TEST_CASE("RCS mixture")
{
    RcsModel rcs;
    CHECK_NOTHROW(rcs.validate());
    RandomStream rng(15);
    std::array<int, 3> counts{};
    double vehicle_sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        auto d = sample_rcs(rcs, rng);
        ++counts[std::size_t(d.cls)];
        REQUIRE(d.dbsm >= rcs.range(d.cls).min_dbsm);
        REQUIRE(d.dbsm <= rcs.range(d.cls).max_dbsm);
        if (d.cls == RcsClass::vehicle)
            vehicle_sum += d.dbsm;
    }
    CHECK(std::abs(counts[0] / double(n) - 0.20) < 0.01);
    CHECK(std::abs(counts[1] / double(n) - 0.30) < 0.01);
    CHECK(std::abs(counts[2] / double(n) - 0.50) < 0.01);
    CHECK(std::abs(vehicle_sum / counts[1] - 10.0) < 0.2);

    CHECK(higher_rcs_class(rcs, RcsClass::pedestrian, RcsClass::vehicle) == RcsClass::vehicle);
    CHECK(higher_rcs_class(rcs, RcsClass::vehicle, RcsClass::environment) == RcsClass::environment);
    CHECK(parse_rcs_class("vehicle") == RcsClass::vehicle);
    CHECK_THROWS_AS(parse_rcs_class("ship"), std::invalid_argument);

    RcsModel bad;
    bad.mixture = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
