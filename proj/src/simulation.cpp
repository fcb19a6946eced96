// SPDX-License-Identifier: Apache-2.0

#include "isac/simulation.hpp"
#include "isac/comm_generator.hpp"
#include "isac/error.hpp"
#include "isac/spatial_mapper.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace
{
    enum Stage : std::uint64_t
    {
        stage_link = 1,
        stage_newborn = 2,
        stage_assembly = 3,
        stage_mergence = 4
    };

    // Runs fn(i) for i in [0, n) on up to `workers` threads and rethrows the first failure.
    template <class F>
    void parallel_for(std::size_t n, int workers, F &&fn)
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto body = [&]
        {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        };

        const std::size_t t = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
        if (t <= 1)
            body();
        else
        {
            std::vector<std::thread> pool;
            for (std::size_t k = 0; k < t; ++k)
                pool.emplace_back(body);
            for (auto &th : pool)
                th.join();
        }
        if (error)
            std::rethrow_exception(error);
    }

    // Rethrows with the drop and link prefixed, keeping the error category
    [[noreturn]] void annotate(int drop, std::size_t link)
    {
        const std::string where = "drop " + std::to_string(drop) + ", link " + std::to_string(link) + ": ";
        try
        {
            throw;
        }
        catch (const isac::ConfigError &e)
        {
            throw isac::ConfigError(where + e.what());
        }
        catch (const isac::DegenerateGeometry &e)
        {
            throw isac::DegenerateGeometry(where + e.what());
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument(where + e.what());
        }
        catch (const std::domain_error &e)
        {
            throw std::domain_error(where + e.what());
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error(where + e.what());
        }
    }

    struct LinkState
    {
        std::size_t bs = 0;
        std::size_t ut = 0;
        isac::LinkCondition condition = isac::LinkCondition::LOS;
        isac::LspStatistics stats{};
        isac::LspSet lsp{};
        std::vector<isac::CommCluster> clusters;
        std::vector<isac::MappedCluster> mapped;
        std::vector<isac::SensingCluster> sensing; // Shared and newborn
        std::optional<isac::SensingCluster> ut_target;
        int budget = 0;
        std::vector<isac::StageMark> marks;
    };
}

isac::DropResult isac::simulate_drop(const RunConfig &config, int drop, int workers)
{
    const auto &layout = config.layout;
    const auto &model = config.model;
    const std::size_t n_ut = layout.terminals.size();
    const std::size_t n_links = layout.link_count();
    const std::uint64_t seed = config.run.seed;
    const std::uint64_t hash = config_hash(config);
    const auto d = static_cast<std::uint64_t>(drop);

    DropResult result;
    if (n_links == 0)
        return result;

    std::atomic<std::uint64_t> sequence{0};
    auto mark = [&sequence](LinkState &s, const char *stage)
    { s.marks.push_back({stage, ++sequence}); };

    std::vector<LinkState> links(n_links);

    // Stage A: general parameters, small-scale parameters, spatial mapping, sensing assignment
    parallel_for(n_links, workers, [&](std::size_t l)
    {
        try
        {
            LinkState &s = links[l];
            s.bs = l / n_ut;
            s.ut = l % n_ut;
            const Station &bs = layout.base_stations[s.bs];
            const Station &ut = layout.terminals[s.ut];
            RandomStream rng = RandomStream::derive(seed, {d, l, stage_link});

            const double d2d = distance_2d(bs.position, ut.position);
            s.condition = model.condition ? *model.condition
                                          : assign_propagation_condition(config.scenario.kind, d2d, ut.position.z, rng);
            LinkGeometry geo{d2d, bs.position.z, ut.position.z};
            s.stats = lsp_statistics(config.scenario, s.condition, geo);
            for (const auto &[k, v] : model.lsp_overrides)
                set_lsp_field(s.stats, k, v);
            s.lsp = default_lsps(s.stats, s.condition, rng);
            mark(s, "general_parameters");

            const auto los = LosDirections::between(bs.position, ut.position);
            s.clusters = generate_comm_clusters(s.lsp, s.stats, s.condition, los, rng);
            mark(s, "small_scale_parameters");

            MappingContext ctx{bs.position, ut.position, model.d_min, model.max_retries};
            s.mapped = map_clusters(s.clusters, ctx, rng, model.mapping);
            mark(s, "spatial_mapping");

            SharingContext share{bs.position, ut.position, bs.sx(), static_cast<int>(l), model.perception_anchor};
            auto shared = assign_shared_clusters(s.mapped, share, model.evolution, model.rcs, rng);

            s.budget = sensing_cluster_count(s.stats.num_clusters, model.sensing_ratio);
            const double p_newborn = draw_newborn_proportion(model.newborn, rng);

            RandomStream newborn_rng = RandomStream::derive(seed, {d, l, stage_newborn});
            NewbornFactory factory = [&](int count)
            {
                std::vector<SensingCluster> out;
                while (static_cast<int>(out.size()) < count)
                {
                    const int need = count - static_cast<int>(out.size());
                    // One extra cluster: the zero-delay one has no scatterer
                    auto fresh = generate_comm_clusters(s.lsp, s.stats, s.condition, los, newborn_rng, need + 1);
                    auto placed = map_clusters(fresh, ctx, newborn_rng, MappingMode::per_cluster);
                    for (auto &m : placed)
                    {
                        if (static_cast<int>(out.size()) == count)
                            break;
                        SensingCluster c;
                        c.kind = SensingKind::newborn;
                        c.position = m.fbs_global();
                        c.samples = {c.position};
                        c.power = m.base.power;
                        c.rays = m.base.rays;
                        c.source_link = static_cast<int>(l);
                        c.member_links = {static_cast<int>(l)};
                        assign_rcs(c, model.rcs, newborn_rng);
                        out.push_back(std::move(c));
                    }
                }
                return out;
            };

            std::optional<SensingCluster> target;
            if (s.condition == LinkCondition::LOS)
            {
                SensingCluster c;
                c.kind = SensingKind::ut_target;
                c.position = ut.position;
                c.samples = {ut.position};
                double k = std::pow(10.0, s.lsp.k_db / 10.0);
                c.power = k / (k + 1.0);
                Ray ray;
                ray.xpr = std::pow(10.0, rng.normal(s.stats.mu_xpr_db, s.stats.sigma_xpr_db) / 10.0);
                for (auto &ph : ray.phases)
                    ph = rng.uniform(0.0, two_pi);
                c.rays = {ray};
                c.rcs_class = model.ut_rcs_class;
                c.ray_rcs_dbsm = {sample_rcs(model.rcs, model.ut_rcs_class, rng)};
                c.velocity = ut.velocity;
                c.source_link = static_cast<int>(l);
                c.member_links = {static_cast<int>(l)};
                target = std::move(c);
            }

            auto set = build_sensing_set(std::move(shared), s.budget, p_newborn, factory, std::move(target));
            for (auto &c : set)
            {
                if (c.kind == SensingKind::ut_target)
                    s.ut_target = std::move(c);
                else
                    s.sensing.push_back(std::move(c));
            }
            mark(s, "sensing_assignment");
        }
        catch (...)
        {
            annotate(drop, l);
        }
    });

    // Barrier passed: global mergence over all links of this drop
    std::vector<SensingCluster> population;
    int next_id = 0;
    for (auto &s : links)
        for (auto &c : s.sensing)
        {
            c.id = next_id++;
            population.push_back(c);
        }
    for (auto &s : links)
        if (s.ut_target)
            s.ut_target->id = next_id++;

    std::size_t cap = 0;
    if (model.global_cap)
        cap = static_cast<std::size_t>(*model.global_cap);
    else
        for (const auto &s : links)
            cap = std::max(cap, static_cast<std::size_t>(s.budget));

    result.cap = cap;
    result.clusters_before_merge = population.size();
    RandomStream merge_rng = RandomStream::derive(seed, {d, n_links, stage_mergence});
    auto merged = merge_global_scatterers(std::move(population), cap, model.rcs, merge_rng);
    const std::uint64_t merge_seq = ++sequence;
    result.merged = merged.clusters;
    result.merge_linkages = merged.linkages;

    // Stage B: coefficients and pathloss
    result.realizations.resize(n_links);
    parallel_for(n_links, workers, [&](std::size_t l)
    {
        try
        {
            LinkState &s = links[l];
            s.marks.push_back({"global_mergence", merge_seq});
            const Station &bs = layout.base_stations[s.bs];
            const Station &ut = layout.terminals[s.ut];
            const double lambda = config.scenario.wavelength();

            LinkAssemblyInput in;
            in.link_id = static_cast<int>(d * n_links + l);
            in.drop = drop;
            in.bs = static_cast<int>(s.bs);
            in.ut = static_cast<int>(s.ut);
            in.scenario = config.scenario;
            in.condition = s.condition;
            in.lsp = s.lsp;
            in.tx = bs.position;
            in.rx = ut.position;
            in.sx = bs.sx();
            in.ut_velocity = ut.velocity;
            in.tx_array = AntennaArray::from_spec(bs.array, lambda);
            in.rx_array = AntennaArray::from_spec(ut.array, lambda);
            in.sx_array = in.tx_array;
            in.comm_clusters = s.clusters;
            in.mapped = s.mapped;
            in.pathloss_model = model.pathloss;
            in.time = model.snapshot_time_s;
            for (const auto &c : merged.clusters)
            {
                const bool own = std::find(c.member_links.begin(), c.member_links.end(), static_cast<int>(l)) !=
                                 c.member_links.end();
                // Cross-link perception: a BS sees every merged cluster, not only those of its own links
                if (own || model.cross_link_perception)
                    in.sensing.push_back(c);
            }
            if (s.ut_target)
                in.sensing.push_back(*s.ut_target);

            RandomStream rng = RandomStream::derive(seed, {d, l, stage_assembly});
            mark(s, "coefficients");
            auto r = assemble_link(in, rng);
            mark(s, "pathloss");
            r.metadata.seed = seed;
            r.metadata.config_hash = hash;
            r.metadata.stages = s.marks;
            result.realizations[l] = std::move(r);
        }
        catch (...)
        {
            annotate(drop, l);
        }
    });

    return result;
}

std::vector<isac::ChannelRealization> isac::run_simulation(const RunConfig &config, int workers)
{
    config.validate();
    if (workers <= 0)
        workers = config.run.parallel;

    std::vector<ChannelRealization> out;
    for (int drop = 0; drop < config.run.drops; ++drop)
    {
        auto r = simulate_drop(config, drop, workers);
        for (auto &x : r.realizations)
            out.push_back(std::move(x));
    }
    return out;
}
