// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isac/analytics.hpp"
#include "isac/config.hpp"
#include "isac/export.hpp"
#include "isac/simulation.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace isac;
namespace fs = std::filesystem;

namespace
{
    std::string config_dir()
    {
        const char *d = std::getenv("ISAC_CONFIG_DIR");
        return d ? d : "configs";
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    fs::path scratch(const std::string &name)
    {
        fs::path p = fs::temp_directory_path() / ("isac_pipeline_" + name);
        fs::remove_all(p);
        return p;
    }

    const std::set<std::string> everything{"clusters", "cir", "stats", "cdf"};
}

TEST_CASE("multi-link preset gives six realizations per drop")
{
    auto c = preset_multilink(ScenarioKind::UMi);
    c.run.drops = 2;
    auto rs = run_simulation(c);
    REQUIRE(rs.size() == 12);
    for (std::size_t i = 0; i < rs.size(); ++i)
    {
        CHECK(rs[i].link_id == int(i));
        CHECK(rs[i].drop == int(i / 6));
        CHECK(rs[i].bs == int((i % 6) / 3));
        CHECK(rs[i].ut == int(i % 3));
        CHECK(rs[i].metadata.seed == 7);
        CHECK(rs[i].metadata.config_hash == config_hash(c));
    }

    for (auto name : {"umi", "uma", "rma"})
    {
        auto file = load_config(config_dir() + "/multilink_" + name + ".json");
        CHECK(file.layout.link_count() == 6);
        CHECK(config_hash(file) == config_hash(preset_multilink(file.scenario.kind)));
        file.run.drops = 1;
        CHECK(run_simulation(file).size() == 6);
    }
    CHECK(config_hash(load_config(config_dir() + "/validation_umi.json")) == config_hash(preset_validation()));
}

TEST_CASE("results do not depend on the worker count and repeat exactly")
{
    auto c = preset_multilink(ScenarioKind::UMa);
    c.run.drops = 3;
    ExportHeader h{config_hash(c), c.run.seed};
    auto one = scratch("w1"), four = scratch("w4"), again = scratch("again");
    export_outputs(one.string(), run_simulation(c, 1), everything, h);
    export_outputs(four.string(), run_simulation(c, 4), everything, h);
    export_outputs(again.string(), run_simulation(c, 1), everything, h);
    for (auto f : {"clusters.csv", "cir.csv", "stats.csv", "cdf.csv"})
    {
        std::string a = slurp(one / f);
        CHECK(!a.empty());
        CHECK(a == slurp(four / f));
        CHECK(a == slurp(again / f));
        CHECK(a.rfind("# config_hash=" + hash_string(h.config_hash) + " seed=7\n", 0) == 0);
    }

    auto other = c;
    other.run.seed = 8;
    auto x = run_simulation(c, 1), y = run_simulation(other, 1);
    CHECK(x[0].comm_taps[0].amplitude != y[0].comm_taps[0].amplitude);
}

TEST_CASE("pipeline stages run in order with mergence as a barrier")
{
    auto c = preset_multilink(ScenarioKind::UMi);
    auto d = simulate_drop(c, 0, 3);
    REQUIRE(d.realizations.size() == 6);
    const char *order[] = {"general_parameters", "small_scale_parameters", "spatial_mapping", "sensing_assignment",
                           "global_mergence", "coefficients", "pathloss"};
    std::uint64_t last_assignment = 0, merge = d.realizations[0].stage_sequence("global_mergence");
    for (auto &r : d.realizations)
    {
        for (std::size_t i = 1; i < std::size(order); ++i)
            CHECK(r.stage_sequence(order[i - 1]) < r.stage_sequence(order[i]));
        last_assignment = std::max(last_assignment, r.stage_sequence("sensing_assignment"));
        CHECK(r.stage_sequence("global_mergence") == merge);
        CHECK_THROWS_AS(r.stage_sequence("no_such_stage"), std::out_of_range);
    }
    CHECK(last_assignment < merge);
    for (auto &r : d.realizations)
        CHECK(r.stage_sequence("coefficients") > merge);
}

TEST_CASE("tap bookkeeping")
{
    auto c = preset_multilink(ScenarioKind::UMi);
    for (int drop = 0; drop < 3; ++drop)
    {
        auto d = simulate_drop(c, drop, 1);
        CHECK(d.merged.size() <= d.cap);
        std::size_t merged_rays = 0;
        for (auto &m : d.merged)
            merged_rays += m.rays.size();
        for (auto &r : d.realizations)
        {
            std::size_t n_comm = 0;
            for (auto &cl : r.clusters)
                n_comm += cl.kind == "comm";
            const bool los = r.condition == LinkCondition::LOS;
            CHECK(r.comm_taps.size() == n_comm * 20 + (los ? 1 : 0));
            CHECK(r.sensing_taps.size() == merged_rays + (los ? 1 : 0));
            CHECK(std::count_if(r.clusters.begin(), r.clusters.end(),
                                [](auto &x) { return x.kind == "ut_target"; }) == (los ? 1 : 0));
            for (std::size_t i = 1; i < r.comm_taps.size(); ++i)
                CHECK(r.comm_taps[i].delay >= r.comm_taps[i - 1].delay);
            for (std::size_t i = 1; i < r.sensing_taps.size(); ++i)
                CHECK(r.sensing_taps[i].delay >= r.sensing_taps[i - 1].delay);
            for (auto &t : r.sensing_taps)
            {
                CHECK(t.delay > 0.0);
                CHECK(std::isfinite(t.pathloss_db));
                CHECK(std::isfinite(std::abs(t.amplitude)));
            }
        }
    }

    auto own = c;
    own.model.cross_link_perception = false;
    auto d = simulate_drop(own, 0, 1);
    for (std::size_t l = 0; l < d.realizations.size(); ++l)
    {
        std::size_t rays = 0;
        for (auto &m : d.merged)
            if (std::find(m.member_links.begin(), m.member_links.end(), int(l)) != m.member_links.end())
                rays += m.rays.size();
        auto &r = d.realizations[l];
        CHECK(r.sensing_taps.size() == rays + (r.condition == LinkCondition::LOS ? 1 : 0));
    }
}

TEST_CASE("empty layouts and annotated errors")
{
    auto c = preset_validation();
    c.layout.terminals.clear();
    c.run.drops = 3;
    auto rs = run_simulation(c);
    CHECK(rs.empty());
    auto dir = scratch("empty");
    export_outputs(dir.string(), rs, {"clusters", "cir"}, {config_hash(c), 1});
    CHECK(read_csv((dir / "cir.csv").string()).rows.empty());
    CHECK_THROWS_AS(export_outputs(dir.string(), rs, {"stats"}, {}), std::invalid_argument);

    auto near = preset_validation();
    near.run.drops = 1;
    near.layout.terminals[0].position = {0.5, 0.0, 4.5};
    try
    {
        run_simulation(near);
        FAIL("expected an error");
    }
    catch (const std::invalid_argument &e)
    {
        CHECK(std::string(e.what()).find("drop 0, link 0: ") == 0);
    }
}

TEST_CASE("cluster table round trip reproduces the statistics")
{
    auto c = preset_validation();
    c.run.drops = 20;
    auto rs = run_simulation(c);
    auto dir = scratch("roundtrip");
    export_outputs(dir.string(), rs, everything, {config_hash(c), c.run.seed});

    auto stats = read_csv((dir / "stats.csv").string());
    CHECK(stats.comments.at("config_hash") == hash_string(config_hash(c)));
    REQUIRE(stats.rows.size() == 20);
    for (const auto &row : stats.rows)
    {
        int link = std::stoi(row[stats.column("link_id")]);
        auto mpc = read_mpc_csv((dir / "clusters.csv").string(), "comm", link);
        REQUIRE(!mpc.empty());
        std::vector<double> tau, az, zen, p;
        for (auto &m : mpc)
        {
            if (!(m.power > 0.0))
                continue;
            tau.push_back(m.delay);
            az.push_back(m.aoa);
            zen.push_back(m.zoa);
            p.push_back(m.power);
        }
        CHECK(format_double(rms_spread(tau, p, SpreadKind::delay)) == row[stats.column("rms_ds_s")]);
        CHECK(format_double(rms_spread(az, p, SpreadKind::azimuth)) == row[stats.column("rms_asa_rad")]);
        CHECK(format_double(rms_spread(zen, p, SpreadKind::zenith)) == row[stats.column("rms_zsa_rad")]);
    }

    auto cdf = read_csv((dir / "cdf.csv").string());
    std::map<std::string, double> last;
    for (const auto &row : cdf.rows)
    {
        double prob = std::stod(row[cdf.column("probability")]);
        auto &m = row[cdf.column("metric")];
        if (last.count(m))
            CHECK(prob > last[m]);
        last[m] = prob;
    }
    CHECK(last.size() == 3);
    for (auto &[m, p] : last)
        CHECK(p == 1.0);

    auto cir = read_csv((dir / "cir.csv").string());
    std::size_t taps = 0;
    for (auto &r : rs)
        taps += r.comm_taps.size() + r.sensing_taps.size();
    CHECK(cir.rows.size() == taps);
    for (auto col : {"link_id", "tap_id", "channel", "delay_s", "re", "im", "pathloss_dB"})
        CHECK(cir.has_column(col));
    auto cl = read_csv((dir / "clusters.csv").string());
    for (auto col : {"link_id", "cluster_id", "kind", "x", "y", "z", "delay_s", "power_lin", "rcs_dBsm", "aoa_rad",
                     "zoa_rad", "aod_rad", "zod_rad"})
        CHECK(cl.has_column(col));
}

TEST_CASE("single LOS link without scattered echoes")
{
    LinkAssemblyInput in;
    in.condition = LinkCondition::LOS;
    in.tx = {0, 0, 5};
    in.rx = {8, 8, 1.5};
    in.sx = in.tx;
    Scenario sc;
    auto st = lsp_statistics(sc, LinkCondition::LOS, {distance_2d(in.tx, in.rx), 5.0, 1.5});
    RandomStream rng(1);
    in.lsp = default_lsps(st, LinkCondition::LOS, rng);
    in.comm_clusters = generate_comm_clusters(in.lsp, st, LinkCondition::LOS, LosDirections::between(in.tx, in.rx), rng);
    SensingCluster ut;
    ut.kind = SensingKind::ut_target;
    ut.position = in.rx;
    ut.rays.resize(1);
    ut.ray_rcs_dbsm = {-10.0};
    in.sensing = {ut};
    auto r = assemble_link(in, rng);

    auto dir = scratch("single");
    export_outputs(dir.string(), {r}, {"cir"}, {});
    auto cir = read_csv((dir / "cir.csv").string());
    std::size_t comm = 0, sens = 0;
    for (auto &row : cir.rows)
        (row[cir.column("channel")] == "comm" ? comm : sens)++;
    CHECK(comm == r.comm_taps.size());
    CHECK(comm == in.comm_clusters.size() * 20 + 1);
    CHECK(sens == 1);
}
