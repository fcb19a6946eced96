// SPDX-License-Identifier: Apache-2.0

#ifndef isac_analytics_H
#define isac_analytics_H

#include "isac/random.hpp"

#include <vector>

namespace isac
{
    // One multipath component.
    struct MpcSample
    {
        double delay = 0.0; // Seconds
        double power = 0.0; // Linear, > 0
        double aoa = 0.0;   // Radians
        double zoa = 0.0;   // Radians
    };

    // Row-major points, one row per sample.
    using FeatureMatrix = std::vector<std::vector<double>>;

    struct ClusteringResult
    {
        int k = 0;
        std::vector<int> labels;                 // 1..k per sample
        FeatureMatrix centers;                   // k rows
        double objective = 0.0;                  // Sum of w_i * |x_i - c(i)|^2
        std::vector<double> objective_history;   // After every center update
        int iterations = 0;
    };

    struct KPowerMeansOptions
    {
        double delay_weight = 1.0;   // Weight of the normalized delay distance
        double angle_weight = 1.0;   // Weight of the angular distance
        int max_iterations = 100;
        int restarts = 8;
    };

    // Features [sqrt(wd) * tau / DS, sqrt(wa) * u] with u the arrival unit vector and DS the
    // power-weighted RMS delay spread (1 s if the spread vanishes).
    FeatureMatrix mpc_features(const std::vector<MpcSample> &samples, const KPowerMeansOptions &options = {});

    // Weighted Lloyd iterations from the given centers. Empty clusters are reseeded with the sample
    // farthest from its center.
    ClusteringResult lloyd_iterations(const FeatureMatrix &data, const std::vector<double> &weights,
                                      FeatureMatrix centers, int max_iterations);

    // Weighted k-means with k-means++ seeding; best of options.restarts runs.
    ClusteringResult weighted_kmeans(const FeatureMatrix &data, const std::vector<double> &weights, int k,
                                     RandomStream &rng, const KPowerMeansOptions &options = {});

    // Power-weighted clustering of multipath components.
    ClusteringResult k_power_means(const std::vector<MpcSample> &samples, int k, RandomStream &rng,
                                   const KPowerMeansOptions &options = {});

    // tr(B)(N - K) / (tr(W)(K - 1)). Returns +inf when tr(W) = 0.
    double calinski_harabasz(const FeatureMatrix &data, const std::vector<int> &labels);

    // Mean over clusters of max_j (s_i + s_j) / M_ij with L1 dispersion and L1 center distance.
    // Returns +inf when two centers coincide.
    double davies_bouldin(const FeatureMatrix &data, const std::vector<int> &labels);

    struct IndicatorScores
    {
        std::vector<int> k_values;
        std::vector<double> ch;
        std::vector<double> db;
        std::vector<double> ci;
        int best_k = 0;
    };

    // CI(K) = mean(DB) / DB(K) + CH(K) / mean(CH) over the K range; ties go to the smaller K.
    IndicatorScores combined_indicator(const FeatureMatrix &data, const std::vector<double> &weights, int k_min,
                                       int k_max, RandomStream &rng, const KPowerMeansOptions &options = {});
    IndicatorScores combined_indicator(const std::vector<MpcSample> &samples, int k_min, int k_max, RandomStream &rng,
                                       const KPowerMeansOptions &options = {});

    enum class SpreadKind
    {
        delay,
        azimuth,
        zenith
    };

    // Power-weighted RMS spread. Angles (radians) are unwrapped about the circular mean first.
    double rms_spread(const std::vector<double> &values, const std::vector<double> &powers, SpreadKind kind);

    struct CdfPoint
    {
        double value;
        double probability;
    };

    // Right-continuous step function at the distinct sample values.
    std::vector<CdfPoint> empirical_cdf(std::vector<double> values);

    // Smallest value whose CDF reaches p.
    double cdf_quantile(const std::vector<CdfPoint> &cdf, double p);
}

#endif
