// SPDX-License-Identifier: Apache-2.0

#ifndef isac_export_H
#define isac_export_H

#include "isac/analytics.hpp"
#include "isac/realization.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace isac
{
    struct LinkStats
    {
        int link_id = 0;
        double rms_ds_s = 0.0;
        double rms_asa_rad = 0.0;
        double rms_zsa_rad = 0.0;
    };

    // RMS spreads over the communication clusters of one realization, weighted by cluster power.
    LinkStats compute_stats(const ChannelRealization &r);

    // Every output starts with a "# config_hash=<hex> seed=<n>" line followed by the header row.
    struct ExportHeader
    {
        std::uint64_t config_hash = 0;
        std::uint64_t seed = 0;
    };

    void write_clusters_csv(const std::string &path, const std::vector<ChannelRealization> &rs, const ExportHeader &h);
    void write_cir_csv(const std::string &path, const std::vector<ChannelRealization> &rs, const ExportHeader &h);
    void write_stats_csv(const std::string &path, const std::vector<LinkStats> &stats, const ExportHeader &h);

    // Rows (metric, value, probability) for rms_ds_s, rms_asa_rad and rms_zsa_rad.
    void write_cdf_csv(const std::string &path, const std::vector<LinkStats> &stats, const ExportHeader &h);

    // Writes the requested subset of clusters, cir, stats, cdf into dir (created if missing).
    // Throws std::invalid_argument if stats or cdf are requested for an empty run.
    void export_outputs(const std::string &dir, const std::vector<ChannelRealization> &rs,
                        const std::set<std::string> &what, const ExportHeader &h);

    // CSV file with '#' comment lines skipped and a mandatory header row.
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
        std::map<std::string, std::string> comments; // key=value pairs from comment lines

        std::size_t column(const std::string &name) const; // Throws if absent
        bool has_column(const std::string &name) const;
    };

    CsvTable read_csv(const std::string &path);

    // Multipath table from columns delay_s, power_lin, aoa_rad, zoa_rad. If a kind column is
    // present only rows of the given kind are kept (empty = all); same for link_id (< 0 = all).
    std::vector<MpcSample> read_mpc_csv(const std::string &path, const std::string &kind = "", int link_id = -1);

    // Full precision double for CSV output, "nan" for missing values.
    std::string format_double(double v);
}

#endif
