// SPDX-License-Identifier: Apache-2.0

#include "isac/analytics.hpp"
#include "isac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace
{
    double sq_dist(const std::vector<double> &a, const std::vector<double> &b)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += (a[i] - b[i]) * (a[i] - b[i]);
        return s;
    }

    double l1_dist(const std::vector<double> &a, const std::vector<double> &b)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += std::abs(a[i] - b[i]);
        return s;
    }

    void check_data(const isac::FeatureMatrix &data)
    {
        if (data.empty())
            throw std::invalid_argument("Data set is empty.");
        const std::size_t dim = data.front().size();
        if (dim == 0)
            throw std::invalid_argument("Samples need at least one feature.");
        for (const auto &row : data)
        {
            if (row.size() != dim)
                throw std::invalid_argument("All samples must have the same number of features.");
            for (double v : row)
                if (!std::isfinite(v))
                    throw std::invalid_argument("Features must be finite.");
        }
    }

    // Validates labels 1..K with no empty cluster and returns K
    int check_labels(const isac::FeatureMatrix &data, const std::vector<int> &labels)
    {
        check_data(data);
        if (labels.size() != data.size())
            throw std::invalid_argument("Need one label per sample.");
        int k = *std::max_element(labels.begin(), labels.end());
        std::vector<int> count(static_cast<std::size_t>(std::max(k, 0)), 0);
        for (int l : labels)
        {
            if (l < 1)
                throw std::invalid_argument("Labels must be in 1..K.");
            ++count[static_cast<std::size_t>(l - 1)];
        }
        for (int c : count)
            if (c == 0)
                throw std::invalid_argument("Every cluster label 1..K must be used.");
        return k;
    }

    isac::FeatureMatrix label_centers(const isac::FeatureMatrix &data, const std::vector<int> &labels, int k,
                                      std::vector<double> &counts)
    {
        const std::size_t dim = data.front().size();
        isac::FeatureMatrix c(static_cast<std::size_t>(k), std::vector<double>(dim, 0.0));
        counts.assign(static_cast<std::size_t>(k), 0.0);
        for (std::size_t i = 0; i < data.size(); ++i)
        {
            auto q = static_cast<std::size_t>(labels[i] - 1);
            counts[q] += 1.0;
            for (std::size_t d = 0; d < dim; ++d)
                c[q][d] += data[i][d];
        }
        for (std::size_t q = 0; q < c.size(); ++q)
            for (auto &v : c[q])
                v /= counts[q];
        return c;
    }
}

isac::FeatureMatrix isac::mpc_features(const std::vector<MpcSample> &samples, const KPowerMeansOptions &options)
{
    if (samples.empty())
        throw std::invalid_argument("No multipath samples given.");
    if (options.delay_weight < 0.0 || options.angle_weight < 0.0)
        throw std::invalid_argument("Feature weights cannot be negative.");

    std::vector<double> delays, powers;
    for (const auto &s : samples)
    {
        if (!(s.power > 0.0) || !std::isfinite(s.delay) || !std::isfinite(s.aoa) || !std::isfinite(s.zoa))
            throw std::invalid_argument("Multipath samples need finite values and positive power.");
        delays.push_back(s.delay);
        powers.push_back(s.power);
    }
    double ds = rms_spread(delays, powers, SpreadKind::delay);
    if (!(ds > 0.0))
        ds = 1.0;

    const double wd = std::sqrt(options.delay_weight);
    const double wa = std::sqrt(options.angle_weight);
    FeatureMatrix f;
    f.reserve(samples.size());
    for (const auto &s : samples)
    {
        Vec3 u = direction_vector(SphericalAngles::wrapped(s.aoa, s.zoa));
        f.push_back({wd * s.delay / ds, wa * u.x, wa * u.y, wa * u.z});
    }
    return f;
}

isac::ClusteringResult isac::lloyd_iterations(const FeatureMatrix &data, const std::vector<double> &weights,
                                              FeatureMatrix centers, int max_iterations)
{
    check_data(data);
    if (weights.size() != data.size())
        throw std::invalid_argument("Need one weight per sample.");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("Sample weights must be positive.");
    const std::size_t n = data.size();
    const std::size_t k = centers.size();
    const std::size_t dim = data.front().size();
    if (k < 1 || k > n)
        throw std::invalid_argument("Number of clusters must be between 1 and the number of samples.");

    ClusteringResult res;
    res.k = static_cast<int>(k);
    std::vector<std::size_t> assign(n, k); // k marks "unassigned"

    for (int it = 0; it < std::max(max_iterations, 1); ++it)
    {
        // Assignment step
        bool changed = false;
        std::vector<double> dist(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            std::size_t best = 0;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < k; ++q)
            {
                double d = sq_dist(data[i], centers[q]);
                if (d < bd)
                {
                    bd = d;
                    best = q;
                }
            }
            if (assign[i] != best)
                changed = true;
            assign[i] = best;
            dist[i] = bd;
        }

        // Repair empty clusters with the sample farthest from its center
        std::vector<std::size_t> members(k, 0);
        for (auto a : assign)
            ++members[a];
        for (std::size_t q = 0; q < k; ++q)
        {
            if (members[q] > 0)
                continue;
            std::size_t far = n;
            double fd = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (members[assign[i]] > 1 && weights[i] * dist[i] > fd)
                {
                    fd = weights[i] * dist[i];
                    far = i;
                }
            if (far == n)
                throw std::logic_error("Cannot repair an empty cluster.");
            --members[assign[far]];
            assign[far] = q;
            ++members[q];
            dist[far] = 0.0;
            changed = true;
        }

        // Update step
        FeatureMatrix next(k, std::vector<double>(dim, 0.0));
        std::vector<double> wsum(k, 0.0);
        for (std::size_t i = 0; i < n; ++i)
        {
            wsum[assign[i]] += weights[i];
            for (std::size_t d = 0; d < dim; ++d)
                next[assign[i]][d] += weights[i] * data[i][d];
        }
        for (std::size_t q = 0; q < k; ++q)
            for (auto &v : next[q])
                v /= wsum[q];
        centers = std::move(next);

        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            obj += weights[i] * sq_dist(data[i], centers[assign[i]]);
        res.objective_history.push_back(obj);
        res.iterations = it + 1;
        if (!changed)
            break;
    }

    res.centers = std::move(centers);
    res.objective = res.objective_history.back();
    res.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        res.labels[i] = static_cast<int>(assign[i]) + 1;
    return res;
}

isac::ClusteringResult isac::weighted_kmeans(const FeatureMatrix &data, const std::vector<double> &weights, int k,
                                             RandomStream &rng, const KPowerMeansOptions &options)
{
    check_data(data);
    const std::size_t n = data.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("Number of clusters must be between 1 and the number of samples.");
    if (weights.size() != n)
        throw std::invalid_argument("Need one weight per sample.");

    ClusteringResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int run = 0; run < std::max(options.restarts, 1); ++run)
    {
        // k-means++ seeding with weight-proportional probabilities
        FeatureMatrix centers;
        std::vector<double> d2(n, std::numeric_limits<double>::infinity());
        auto pick = [&](const std::vector<double> &score)
        {
            double total = std::accumulate(score.begin(), score.end(), 0.0);
            if (!(total > 0.0))
                return rng.index(n);
            double u = rng.uniform() * total;
            for (std::size_t i = 0; i < n; ++i)
            {
                u -= score[i];
                if (u < 0.0)
                    return i;
            }
            return n - 1;
        };
        centers.push_back(data[pick(weights)]);
        while (centers.size() < static_cast<std::size_t>(k))
        {
            std::vector<double> score(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                d2[i] = std::min(d2[i], sq_dist(data[i], centers.back()));
                score[i] = weights[i] * d2[i];
            }
            centers.push_back(data[pick(score)]);
        }

        auto res = lloyd_iterations(data, weights, std::move(centers), options.max_iterations);
        if (res.objective < best.objective)
            best = std::move(res);
    }
    return best;
}

isac::ClusteringResult isac::k_power_means(const std::vector<MpcSample> &samples, int k, RandomStream &rng,
                                           const KPowerMeansOptions &options)
{
    auto f = mpc_features(samples, options);
    std::vector<double> w;
    w.reserve(samples.size());
    for (const auto &s : samples)
        w.push_back(s.power);
    return weighted_kmeans(f, w, k, rng, options);
}

double isac::calinski_harabasz(const FeatureMatrix &data, const std::vector<int> &labels)
{
    const int k = check_labels(data, labels);
    const std::size_t n = data.size();
    if (k < 2 || static_cast<std::size_t>(k) >= n)
        throw std::invalid_argument("Calinski-Harabasz index needs 2 <= K < N.");

    std::vector<double> counts;
    auto centers = label_centers(data, labels, k, counts);
    std::vector<double> mean(data.front().size(), 0.0);
    for (const auto &row : data)
        for (std::size_t d = 0; d < row.size(); ++d)
            mean[d] += row[d] / double(n);

    double tr_b = 0.0, tr_w = 0.0;
    for (std::size_t q = 0; q < centers.size(); ++q)
        tr_b += counts[q] * sq_dist(centers[q], mean);
    for (std::size_t i = 0; i < n; ++i)
        tr_w += sq_dist(data[i], centers[static_cast<std::size_t>(labels[i] - 1)]);

    if (tr_w == 0.0)
        return std::numeric_limits<double>::infinity();
    return tr_b * double(n - static_cast<std::size_t>(k)) / (tr_w * double(k - 1));
}

double isac::davies_bouldin(const FeatureMatrix &data, const std::vector<int> &labels)
{
    const int k = check_labels(data, labels);
    if (k < 2)
        throw std::invalid_argument("Davies-Bouldin index needs at least two clusters.");

    std::vector<double> counts;
    auto centers = label_centers(data, labels, k, counts);
    std::vector<double> s(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < data.size(); ++i)
    {
        auto q = static_cast<std::size_t>(labels[i] - 1);
        s[q] += l1_dist(data[i], centers[q]) / counts[q];
    }

    double sum = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i)
    {
        double worst = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j)
        {
            if (i == j)
                continue;
            double m = l1_dist(centers[i], centers[j]);
            if (m == 0.0)
                return std::numeric_limits<double>::infinity();
            worst = std::max(worst, (s[i] + s[j]) / m);
        }
        sum += worst;
    }
    return sum / double(k);
}

isac::IndicatorScores isac::combined_indicator(const FeatureMatrix &data, const std::vector<double> &weights,
                                               int k_min, int k_max, RandomStream &rng,
                                               const KPowerMeansOptions &options)
{
    check_data(data);
    const int n = static_cast<int>(data.size());
    if (k_min < 2 || k_max < k_min || k_max > n - 1)
        throw std::invalid_argument("K range must satisfy 2 <= k_min <= k_max <= N - 1.");

    IndicatorScores sc;
    for (int k = k_min; k <= k_max; ++k)
    {
        auto res = weighted_kmeans(data, weights, k, rng, options);
        sc.k_values.push_back(k);
        sc.ch.push_back(calinski_harabasz(data, res.labels));
        sc.db.push_back(davies_bouldin(data, res.labels));
    }

    // Means over the finite scores only
    auto finite_mean = [](const std::vector<double> &v)
    {
        double s = 0.0;
        int c = 0;
        for (double x : v)
            if (std::isfinite(x))
            {
                s += x;
                ++c;
            }
        return c > 0 ? s / c : std::numeric_limits<double>::quiet_NaN();
    };
    const double db_mean = finite_mean(sc.db);
    const double ch_mean = finite_mean(sc.ch);

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sc.k_values.size(); ++i)
    {
        double db_term = sc.db[i] == 0.0 ? std::numeric_limits<double>::infinity()
                         : std::isfinite(sc.db[i]) && std::isfinite(db_mean) ? db_mean / sc.db[i]
                                                                            : 0.0;
        double ch_term = !std::isfinite(sc.ch[i]) ? std::numeric_limits<double>::infinity()
                         : (std::isfinite(ch_mean) && ch_mean > 0.0) ? sc.ch[i] / ch_mean
                                                                     : 0.0;
        double ci = db_term + ch_term;
        sc.ci.push_back(ci);
        if (ci > best)
        {
            best = ci;
            sc.best_k = sc.k_values[i];
        }
    }
    if (sc.best_k == 0)
        sc.best_k = k_min;
    return sc;
}

isac::IndicatorScores isac::combined_indicator(const std::vector<MpcSample> &samples, int k_min, int k_max,
                                               RandomStream &rng, const KPowerMeansOptions &options)
{
    auto f = mpc_features(samples, options);
    std::vector<double> w;
    for (const auto &s : samples)
        w.push_back(s.power);
    return combined_indicator(f, w, k_min, k_max, rng, options);
}

double isac::rms_spread(const std::vector<double> &values, const std::vector<double> &powers, SpreadKind kind)
{
    if (values.empty())
        throw std::invalid_argument("RMS spread of an empty set is undefined.");
    if (values.size() != powers.size())
        throw std::invalid_argument("Need one power per value.");

    double p_sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (!(powers[i] > 0.0) || !std::isfinite(powers[i]) || !std::isfinite(values[i]))
            throw std::invalid_argument("RMS spread needs finite values and positive powers.");
        p_sum += powers[i];
    }

    std::vector<double> x = values;
    if (kind != SpreadKind::delay)
    {
        double s = 0.0, c = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            s += powers[i] * std::sin(x[i]);
            c += powers[i] * std::cos(x[i]);
        }
        const double mu = std::atan2(s, c);
        for (auto &v : x)
            v = wrap_pi(v - mu);
    }

    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        m1 += powers[i] * x[i];
        m2 += powers[i] * x[i] * x[i];
    }
    m1 /= p_sum;
    m2 /= p_sum;
    return std::sqrt(std::max(m2 - m1 * m1, 0.0));
}

std::vector<isac::CdfPoint> isac::empirical_cdf(std::vector<double> values)
{
    if (values.empty())
        throw std::invalid_argument("Empirical CDF of an empty set is undefined.");
    for (double v : values)
        if (std::isnan(v))
            throw std::invalid_argument("Empirical CDF input contains NaN.");
    std::sort(values.begin(), values.end());
    const double n = double(values.size());
    std::vector<CdfPoint> cdf;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i + 1 < values.size() && values[i + 1] == values[i])
            continue;
        cdf.push_back({values[i], double(i + 1) / n});
    }
    return cdf;
}

double isac::cdf_quantile(const std::vector<CdfPoint> &cdf, double p)
{
    if (cdf.empty())
        throw std::invalid_argument("Quantile of an empty CDF is undefined.");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Quantile level must lie in [0, 1].");
    for (const auto &pt : cdf)
        if (pt.probability >= p - 1e-12)
            return pt.value;
    return cdf.back().value;
}
