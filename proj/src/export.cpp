// SPDX-License-Identifier: Apache-2.0

#include "isac/export.hpp"
#include "isac/config.hpp"
#include "isac/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace
{
    std::ofstream open_out(const std::string &path, const isac::ExportHeader &h)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw isac::IoError("Cannot write '" + path + "'.");
        out << "# config_hash=" << isac::hash_string(h.config_hash) << " seed=" << h.seed << "\n";
        return out;
    }

    void close_out(std::ofstream &out, const std::string &path)
    {
        out.flush();
        if (!out)
            throw isac::IoError("Failed while writing '" + path + "'.");
    }

    std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ','))
            out.push_back(cell);
        if (!line.empty() && line.back() == ',')
            out.emplace_back();
        return out;
    }

    double parse_double(const std::string &s, const std::string &where)
    {
        if (s == "nan" || s == "NaN")
            return std::nan("");
        std::istringstream ss(s);
        ss.imbue(std::locale::classic());
        double v;
        ss >> v;
        if (ss.fail() || !ss.eof())
            throw isac::IoError("Cannot parse number '" + s + "' in " + where + ".");
        return v;
    }
}

std::string isac::format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

isac::LinkStats isac::compute_stats(const ChannelRealization &r)
{
    std::vector<double> delay, aoa, zoa, power;
    for (const auto &c : r.clusters)
    {
        if (c.kind != "comm" || !(c.power > 0.0))
            continue;
        delay.push_back(c.delay);
        aoa.push_back(c.arrival.azimuth);
        zoa.push_back(c.arrival.zenith);
        power.push_back(c.power);
    }
    LinkStats s;
    s.link_id = r.link_id;
    if (power.empty())
    {
        s.rms_ds_s = s.rms_asa_rad = s.rms_zsa_rad = std::nan("");
        return s;
    }
    s.rms_ds_s = rms_spread(delay, power, SpreadKind::delay);
    s.rms_asa_rad = rms_spread(aoa, power, SpreadKind::azimuth);
    s.rms_zsa_rad = rms_spread(zoa, power, SpreadKind::zenith);
    return s;
}

void isac::write_clusters_csv(const std::string &path, const std::vector<ChannelRealization> &rs,
                              const ExportHeader &h)
{
    auto out = open_out(path, h);
    out << "link_id,cluster_id,kind,x,y,z,delay_s,power_lin,rcs_dBsm,aoa_rad,zoa_rad,aod_rad,zod_rad\n";
    for (const auto &r : rs)
        for (const auto &c : r.clusters)
            out << r.link_id << ',' << c.cluster_id << ',' << c.kind << ',' << format_double(c.position.x) << ','
                << format_double(c.position.y) << ',' << format_double(c.position.z) << ','
                << format_double(c.delay) << ',' << format_double(c.power) << ',' << format_double(c.rcs_dbsm) << ','
                << format_double(c.arrival.azimuth) << ',' << format_double(c.arrival.zenith) << ','
                << format_double(c.departure.azimuth) << ',' << format_double(c.departure.zenith) << '\n';
    close_out(out, path);
}

void isac::write_cir_csv(const std::string &path, const std::vector<ChannelRealization> &rs, const ExportHeader &h)
{
    auto out = open_out(path, h);
    out << "link_id,tap_id,channel,delay_s,re,im,pathloss_dB\n";
    for (const auto &r : rs)
    {
        int tap = 0;
        for (const auto &t : r.comm_taps)
            out << r.link_id << ',' << tap++ << ",comm," << format_double(t.delay) << ','
                << format_double(t.amplitude.real()) << ',' << format_double(t.amplitude.imag()) << ','
                << format_double(t.pathloss_db) << '\n';
        for (const auto &t : r.sensing_taps)
            out << r.link_id << ',' << tap++ << ",sens," << format_double(t.delay) << ','
                << format_double(t.amplitude.real()) << ',' << format_double(t.amplitude.imag()) << ','
                << format_double(t.pathloss_db) << '\n';
    }
    close_out(out, path);
}

void isac::write_stats_csv(const std::string &path, const std::vector<LinkStats> &stats, const ExportHeader &h)
{
    auto out = open_out(path, h);
    out << "link_id,rms_ds_s,rms_asa_rad,rms_zsa_rad\n";
    for (const auto &s : stats)
        out << s.link_id << ',' << format_double(s.rms_ds_s) << ',' << format_double(s.rms_asa_rad) << ','
            << format_double(s.rms_zsa_rad) << '\n';
    close_out(out, path);
}

void isac::write_cdf_csv(const std::string &path, const std::vector<LinkStats> &stats, const ExportHeader &h)
{
    auto out = open_out(path, h);
    out << "metric,value,probability\n";
    auto emit = [&](const char *name, double LinkStats::*field)
    {
        std::vector<double> v;
        for (const auto &s : stats)
            if (!std::isnan(s.*field))
                v.push_back(s.*field);
        if (v.empty())
            return;
        for (const auto &p : empirical_cdf(v))
            out << name << ',' << format_double(p.value) << ',' << format_double(p.probability) << '\n';
    };
    emit("rms_ds_s", &LinkStats::rms_ds_s);
    emit("rms_asa_rad", &LinkStats::rms_asa_rad);
    emit("rms_zsa_rad", &LinkStats::rms_zsa_rad);
    close_out(out, path);
}

void isac::export_outputs(const std::string &dir, const std::vector<ChannelRealization> &rs,
                          const std::set<std::string> &what, const ExportHeader &h)
{
    for (const auto &w : what)
        if (w != "clusters" && w != "cir" && w != "stats" && w != "cdf")
            throw std::invalid_argument("Unknown output '" + w + "', expected clusters, cir, stats or cdf.");
    if (rs.empty() && (what.count("stats") || what.count("cdf")))
        throw std::invalid_argument("Statistics and CDF outputs need at least one realization.");

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("Cannot create output directory '" + dir + "': " + ec.message());

    const std::filesystem::path base(dir);
    if (what.count("clusters"))
        write_clusters_csv((base / "clusters.csv").string(), rs, h);
    if (what.count("cir"))
        write_cir_csv((base / "cir.csv").string(), rs, h);
    if (what.count("stats") || what.count("cdf"))
    {
        std::vector<LinkStats> stats;
        for (const auto &r : rs)
            stats.push_back(compute_stats(r));
        if (what.count("stats"))
            write_stats_csv((base / "stats.csv").string(), stats, h);
        if (what.count("cdf"))
            write_cdf_csv((base / "cdf.csv").string(), stats, h);
    }
}

std::size_t isac::CsvTable::column(const std::string &name) const
{
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
        throw IoError("CSV column '" + name + "' is missing.");
    return static_cast<std::size_t>(it - header.begin());
}

bool isac::CsvTable::has_column(const std::string &name) const
{
    return std::find(header.begin(), header.end(), name) != header.end();
}

isac::CsvTable isac::read_csv(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("Cannot read '" + path + "'.");

    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line))
    {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            std::istringstream ss(line.substr(1));
            std::string kv;
            while (ss >> kv)
            {
                auto eq = kv.find('=');
                if (eq != std::string::npos)
                    t.comments[kv.substr(0, eq)] = kv.substr(eq + 1);
            }
            continue;
        }
        auto cells = split(line);
        if (!have_header)
        {
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size())
            throw IoError("Row with " + std::to_string(cells.size()) + " cells in '" + path + "', expected " +
                          std::to_string(t.header.size()) + ".");
        t.rows.push_back(std::move(cells));
    }
    if (!have_header)
        throw IoError("'" + path + "' has no header row.");
    return t;
}

std::vector<isac::MpcSample> isac::read_mpc_csv(const std::string &path, const std::string &kind, int link_id)
{
    auto t = read_csv(path);
    const auto c_delay = t.column("delay_s");
    const auto c_power = t.column("power_lin");
    const auto c_aoa = t.column("aoa_rad");
    const auto c_zoa = t.column("zoa_rad");
    const bool has_kind = t.has_column("kind");
    const bool has_link = t.has_column("link_id");

    std::vector<MpcSample> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i)
    {
        const auto &row = t.rows[i];
        if (!kind.empty() && has_kind && row[t.column("kind")] != kind)
            continue;
        if (link_id >= 0 && has_link && row[t.column("link_id")] != std::to_string(link_id))
            continue;
        const std::string where = path + " row " + std::to_string(i + 1);
        MpcSample s;
        s.delay = parse_double(row[c_delay], where);
        s.power = parse_double(row[c_power], where);
        s.aoa = parse_double(row[c_aoa], where);
        s.zoa = parse_double(row[c_zoa], where);
        if (!(s.power > 0.0))
            continue;
        out.push_back(s);
    }
    return out;
}
