// SPDX-License-Identifier: Apache-2.0

#include "isac/analytics.hpp"
#include "isac/config.hpp"
#include "isac/error.hpp"
#include "isac/export.hpp"
#include "isac/simulation.hpp"
#include "isac/validation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_other = 1,
        exit_usage = 2,
        exit_config = 3,
        exit_model = 4,
        exit_io = 5,
        exit_validation = 6
    };

    std::set<std::string> split_list(const std::string &s)
    {
        std::set<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.insert(item);
        return out;
    }

    std::pair<int, int> parse_range(const std::string &s)
    {
        auto colon = s.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--k-range", "expected <min>:<max>");
        try
        {
            return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
        }
        catch (const std::exception &)
        {
            throw CLI::ValidationError("--k-range", "expected <min>:<max>");
        }
    }

    int cmd_run(const std::string &config_path, std::optional<std::uint64_t> seed, const std::string &out_dir,
                const std::string &emit, std::optional<int> drops, std::optional<int> parallel)
    {
        auto config = isac::load_config(config_path);
        if (seed)
            config.run.seed = *seed;
        if (drops)
            config.run.drops = *drops;
        if (parallel)
            config.run.parallel = *parallel;
        std::set<std::string> what = emit.empty() ? std::set<std::string>(config.run.emit.begin(), config.run.emit.end())
                                                  : split_list(emit);
        for (const auto &w : what)
            if (w != "clusters" && w != "cir" && w != "stats" && w != "cdf")
                throw CLI::ValidationError("--emit", "unknown output '" + w + "', expected clusters, cir, stats or cdf");
        config.validate();

        auto rs = isac::run_simulation(config);
        if (rs.empty())
            what.erase("stats"), what.erase("cdf");
        isac::ExportHeader h{isac::config_hash(config), config.run.seed};
        isac::export_outputs(out_dir, rs, what, h);
        std::cout << "config_hash=" << isac::hash_string(h.config_hash) << " seed=" << h.seed
                  << " realizations=" << rs.size() << "\n";
        return exit_ok;
    }

    int cmd_analyze(const std::string &mpc_path, const std::string &k_range, const std::string &out_dir,
                    const std::string &kind, int link, std::uint64_t seed)
    {
        auto [k_min, k_max] = parse_range(k_range);
        auto samples = isac::read_mpc_csv(mpc_path, kind, link);
        if (samples.size() < 3)
            throw std::invalid_argument("Need at least three multipath samples to analyze.");
        k_max = std::min<int>(k_max, static_cast<int>(samples.size()) - 1);

        isac::RandomStream rng(seed);
        auto scores = isac::combined_indicator(samples, k_min, k_max, rng);
        isac::RandomStream label_rng(seed);
        auto best = isac::k_power_means(samples, scores.best_k, label_rng);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            throw isac::IoError("Cannot create output directory '" + out_dir + "'.");
        const std::filesystem::path base(out_dir);

        // Carry the provenance line of the input table into every output
        const auto source = isac::read_csv(mpc_path).comments;
        std::string provenance;
        if (source.count("config_hash"))
            provenance = "# config_hash=" + source.at("config_hash") +
                         (source.count("seed") ? " seed=" + source.at("seed") : std::string()) + "\n";

        auto open = [&provenance](const std::filesystem::path &p)
        {
            std::ofstream f(p);
            if (!f)
                throw isac::IoError("Cannot write '" + p.string() + "'.");
            f << provenance;
            return f;
        };

        auto f = open(base / "indices.csv");
        f << "k,ch,db,ci\n";
        for (std::size_t i = 0; i < scores.k_values.size(); ++i)
            f << scores.k_values[i] << ',' << isac::format_double(scores.ch[i]) << ','
              << isac::format_double(scores.db[i]) << ',' << isac::format_double(scores.ci[i]) << '\n';

        auto g = open(base / "labels.csv");
        g << "sample,label\n";
        for (std::size_t i = 0; i < best.labels.size(); ++i)
            g << i << ',' << best.labels[i] << '\n';

        std::vector<double> d, a, z, p;
        for (const auto &s : samples)
        {
            d.push_back(s.delay);
            a.push_back(s.aoa);
            z.push_back(s.zoa);
            p.push_back(s.power);
        }
        auto s = open(base / "spreads.csv");
        s << "rms_ds_s,rms_asa_rad,rms_zsa_rad\n"
          << isac::format_double(isac::rms_spread(d, p, isac::SpreadKind::delay)) << ','
          << isac::format_double(isac::rms_spread(a, p, isac::SpreadKind::azimuth)) << ','
          << isac::format_double(isac::rms_spread(z, p, isac::SpreadKind::zenith)) << '\n';

        std::cout << "samples=" << samples.size() << " best_k=" << scores.best_k << "\n";
        return exit_ok;
    }

    int cmd_validate(const std::string &config_path, const std::string &out_dir, std::optional<int> parallel)
    {
        auto config = isac::load_config(config_path);
        if (parallel)
            config.run.parallel = *parallel;
        auto report = isac::run_validation(config);
        isac::write_validation_report(out_dir, config, report);
        for (const auto &c : report.checks)
            std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
        return report.passed ? exit_ok : exit_validation;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Cluster-based channel simulator for integrated sensing and communication"};
    app.require_subcommand(1);

    std::string config_path, out_dir, emit, mpc_path, k_range = "2:20", kind;
    std::uint64_t seed_value = 0, analyze_seed = 1;
    int drops_value = 0, parallel_value = 0, link = -1;

    auto *run = app.add_subcommand("run", "Simulate channel realizations");
    run->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    auto *seed_opt = run->add_option("--seed", seed_value, "Base seed (overrides run.seed)");
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--emit", emit, "Comma-separated subset of clusters,cir,stats,cdf");
    auto *drops_opt = run->add_option("--drops", drops_value, "Number of drops")->check(CLI::PositiveNumber);
    auto *par_opt = run->add_option("--parallel", parallel_value, "Worker threads")->check(CLI::PositiveNumber);

    auto *analyze = app.add_subcommand("analyze", "Cluster a multipath table and score K");
    analyze->add_option("--mpc", mpc_path, "CSV with delay_s, power_lin, aoa_rad, zoa_rad")->required()->check(CLI::ExistingFile);
    analyze->add_option("--k-range", k_range, "K range <min>:<max>");
    analyze->add_option("--out", out_dir, "Output directory")->required();
    analyze->add_option("--kind", kind, "Keep only rows of this kind (e.g. comm)");
    analyze->add_option("--link", link, "Keep only rows of this link id");
    analyze->add_option("--seed", analyze_seed, "Seed for clustering initialization");

    auto *validate = app.add_subcommand("validate", "Run the statistical validation suite");
    validate->add_option("--config", config_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    validate->add_option("--out", out_dir, "Output directory")->required();
    auto *vpar_opt = validate->add_option("--parallel", parallel_value, "Worker threads")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (*run)
            return cmd_run(config_path, *seed_opt ? std::optional<std::uint64_t>(seed_value) : std::nullopt, out_dir,
                           emit, *drops_opt ? std::optional<int>(drops_value) : std::nullopt,
                           *par_opt ? std::optional<int>(parallel_value) : std::nullopt);
        if (*analyze)
            return cmd_analyze(mpc_path, k_range, out_dir, kind, link, analyze_seed);
        if (*validate)
            return cmd_validate(config_path, out_dir, *vpar_opt ? std::optional<int>(parallel_value) : std::nullopt);
    }
    catch (const CLI::ValidationError &e)
    {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const isac::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const isac::IoError &e)
    {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "model error: " << e.what() << "\n";
        return exit_model;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "model error: " << e.what() << "\n";
        return exit_model;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_other;
    }
    return exit_usage;
}
