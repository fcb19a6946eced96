// SPDX-License-Identifier: Apache-2.0

#ifndef isac_validation_H
#define isac_validation_H

#include "isac/config.hpp"
#include "isac/export.hpp"

#include <string>
#include <vector>

namespace isac
{
    struct ValidationCheck
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct ValidationReport
    {
        std::vector<ValidationCheck> checks;
        std::vector<LinkStats> stats;
        double ds_p90_s = 0.0;
        bool passed = false;
    };

    // Runs config.validation.drops drops and checks spread positivity, CDF monotonicity, the
    // delay-spread 90th percentile band and repeatability under the same seed.
    ValidationReport run_validation(const RunConfig &config, int workers = 0);

    // Writes report.txt, stats.csv and cdf.csv into dir.
    void write_validation_report(const std::string &dir, const RunConfig &config, const ValidationReport &report);
}

#endif
