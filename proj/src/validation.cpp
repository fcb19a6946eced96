// SPDX-License-Identifier: Apache-2.0

#include "isac/validation.hpp"
#include "isac/error.hpp"
#include "isac/simulation.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace
{
    std::vector<isac::LinkStats> simulate_stats(const isac::RunConfig &config, int workers)
    {
        std::vector<isac::LinkStats> stats;
        for (const auto &r : isac::run_simulation(config, workers))
            stats.push_back(isac::compute_stats(r));
        return stats;
    }

    bool same_bits(double a, double b)
    {
        return std::memcmp(&a, &b, sizeof a) == 0;
    }
}

isac::ValidationReport isac::run_validation(const RunConfig &config, int workers)
{
    RunConfig cfg = config;
    cfg.run.drops = config.validation.drops;

    ValidationReport rep;
    rep.stats = simulate_stats(cfg, workers);

    bool positive = !rep.stats.empty();
    for (const auto &s : rep.stats)
        for (double v : {s.rms_ds_s, s.rms_asa_rad, s.rms_zsa_rad})
            if (!std::isfinite(v) || !(v > 0.0))
                positive = false;
    rep.checks.push_back({"finite_positive_spreads", positive,
                          std::to_string(rep.stats.size()) + " links checked"});

    bool monotone = positive;
    std::vector<CdfPoint> ds_cdf;
    if (positive)
    {
        for (auto field : {&LinkStats::rms_ds_s, &LinkStats::rms_asa_rad, &LinkStats::rms_zsa_rad})
        {
            std::vector<double> v;
            for (const auto &s : rep.stats)
                v.push_back(s.*field);
            auto cdf = empirical_cdf(v);
            for (std::size_t i = 1; i < cdf.size(); ++i)
                if (!(cdf[i].value > cdf[i - 1].value) || cdf[i].probability < cdf[i - 1].probability)
                    monotone = false;
            if (cdf.back().probability != 1.0)
                monotone = false;
            if (field == &LinkStats::rms_ds_s)
                ds_cdf = cdf;
        }
    }
    rep.checks.push_back({"monotone_cdfs", monotone, ""});

    bool in_band = false;
    if (!ds_cdf.empty())
    {
        rep.ds_p90_s = cdf_quantile(ds_cdf, 0.9);
        in_band = rep.ds_p90_s >= config.validation.ds_p90_min_s && rep.ds_p90_s <= config.validation.ds_p90_max_s;
    }
    rep.checks.push_back({"delay_spread_p90_band", in_band,
                          "p90 = " + format_double(rep.ds_p90_s * 1e9) + " ns, band [" +
                              format_double(config.validation.ds_p90_min_s * 1e9) + ", " +
                              format_double(config.validation.ds_p90_max_s * 1e9) + "] ns"});

    auto again = simulate_stats(cfg, workers);
    bool repeat = again.size() == rep.stats.size();
    for (std::size_t i = 0; repeat && i < again.size(); ++i)
        repeat = same_bits(again[i].rms_ds_s, rep.stats[i].rms_ds_s) &&
                 same_bits(again[i].rms_asa_rad, rep.stats[i].rms_asa_rad) &&
                 same_bits(again[i].rms_zsa_rad, rep.stats[i].rms_zsa_rad);
    rep.checks.push_back({"deterministic_repeat", repeat, ""});

    rep.passed = true;
    for (const auto &c : rep.checks)
        rep.passed = rep.passed && c.passed;
    return rep;
}

void isac::write_validation_report(const std::string &dir, const RunConfig &config, const ValidationReport &report)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("Cannot create output directory '" + dir + "': " + ec.message());

    ExportHeader h{config_hash(config), config.run.seed};
    const std::filesystem::path base(dir);
    write_stats_csv((base / "stats.csv").string(), report.stats, h);
    write_cdf_csv((base / "cdf.csv").string(), report.stats, h);

    const std::string path = (base / "report.txt").string();
    std::ofstream out(path);
    if (!out)
        throw IoError("Cannot write '" + path + "'.");
    out << "# config_hash=" << hash_string(h.config_hash) << " seed=" << h.seed << "\n";
    for (const auto &c : report.checks)
        out << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    out << (report.passed ? "PASS" : "FAIL") << " overall\n";
    if (!out)
        throw IoError("Failed while writing '" + path + "'.");
}
