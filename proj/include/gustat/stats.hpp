#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "gustat/errors.hpp"

namespace gustat {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Unbiased k-statistics k_1..k_J (J <= 4).
inline std::vector<double> sample_cumulants(const std::vector<double>& xs, int order) {
    if (order < 1 || order > 4) throw ArgumentError("sample_cumulants: order must lie in 1..4");
    const long double r = static_cast<long double>(xs.size());
    if (xs.size() < static_cast<std::size_t>(order) + 1)
        throw ArgumentError("sample_cumulants: need at least order+1 samples");
    long double mean = 0;
    for (double x : xs) mean += x;
    mean /= r;
    long double m2 = 0, m3 = 0, m4 = 0;
    for (double x : xs) {
        long double d = x - mean, d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= r;
    m3 /= r;
    m4 /= r;
    std::vector<double> k{static_cast<double>(mean)};
    if (order >= 2) k.push_back(static_cast<double>(r / (r - 1) * m2));
    if (order >= 3) k.push_back(static_cast<double>(r * r / ((r - 1) * (r - 2)) * m3));
    if (order >= 4)
        k.push_back(static_cast<double>(r * r * ((r + 1) * m4 - 3 * (r - 1) * m2 * m2) / ((r - 1) * (r - 2) * (r - 3))));
    return k;
}

inline std::vector<double> sample_cumulants(const std::vector<long long>& xs, int order) {
    return sample_cumulants(std::vector<double>(xs.begin(), xs.end()), order);
}

// Standard errors of k_1 and k_2 (normal-theory correction via k_4).
inline std::pair<double, double> cumulant_standard_errors(const std::vector<double>& k, std::size_t count) {
    if (k.size() < 2 || count < 2) throw ArgumentError("cumulant_standard_errors: need k_1, k_2 and two samples");
    const double r = static_cast<double>(count);
    double se1 = std::sqrt(std::max(0.0, k[1]) / r);
    double k4 = k.size() >= 4 ? k[3] : 0.0;
    double se2 = std::sqrt(std::max(0.0, k4 / r + 2 * k[1] * k[1] / (r - 1)));
    return {se1, se2};
}

/// sup_x |F_R(x) - Phi(x)| for samples standardized by (center, scale).
inline double ks_distance_to_normal(std::vector<double> xs, double center, double scale) {
    if (xs.empty()) throw ArgumentError("ks_distance_to_normal: empty sample");
    if (!(scale > 0)) throw DegenerateSampleError("ks_distance_to_normal: zero variance");
    std::sort(xs.begin(), xs.end());
    const double r = static_cast<double>(xs.size());
    double sup = 0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        double phi = normal_cdf((xs[i] - center) / scale);
        double below = static_cast<double>(i) / r, at = static_cast<double>(j) / r;
        sup = std::max({sup, std::fabs(phi - below), std::fabs(at - phi)});
        i = j;
    }
    return sup;
}

// Standardized by the sample mean and the (population) standard deviation.
inline double ks_distance_to_normal(const std::vector<double>& xs) {
    if (xs.empty()) throw ArgumentError("ks_distance_to_normal: empty sample");
    long double mean = 0;
    for (double x : xs) mean += x;
    mean /= static_cast<long double>(xs.size());
    long double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<long double>(xs.size());
    if (var <= 0) throw DegenerateSampleError("ks_distance_to_normal: zero variance");
    return ks_distance_to_normal(xs, static_cast<double>(mean), static_cast<double>(std::sqrt(var)));
}

inline double ks_distance_to_normal(const std::vector<long long>& xs) {
    return ks_distance_to_normal(std::vector<double>(xs.begin(), xs.end()));
}

struct Interval {
    double lo = 0;
    double hi = 1;
};

inline Interval wilson_interval(long long successes, long long trials, double z = 1.959963984540054) {
    if (trials <= 0 || successes < 0 || successes > trials) throw ArgumentError("wilson_interval: bad counts");
    const double n = static_cast<double>(trials), ph = static_cast<double>(successes) / n, z2 = z * z;
    const double centre = (ph + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    // the closed form touches 0 and 1 exactly at the extremes
    return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw ArgumentError("median of an empty list");
    std::sort(xs.begin(), xs.end());
    std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace gustat
