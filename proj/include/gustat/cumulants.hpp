#pragma once

#include <stdexcept>
#include <vector>

#include "gustat/enumerate.hpp"
#include "gustat/rational.hpp"

namespace gustat {

namespace detail {

inline BigInt binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    return falling_factorial(n, r) / factorial(r);
}

}  // namespace detail

// kappa_n = m_n - sum_{i=1}^{n-1} C(n-1, i-1) kappa_i m_{n-i}
inline std::vector<Rational> cumulants_by_recursion(const std::vector<Rational>& m) {
    std::vector<Rational> kappa(m.size());
    for (std::size_t n = 1; n <= m.size(); ++n) {
        Rational acc = m[n - 1];
        for (std::size_t i = 1; i < n; ++i)
            acc -= Rational(detail::binomial(static_cast<int>(n - 1), static_cast<int>(i - 1))) * kappa[i - 1] * m[n - i - 1];
        kappa[n - 1] = acc;
    }
    return kappa;
}

// kappa_n = sum over partitions sigma of [n] of (-1)^(s-1) (s-1)! prod_{b in sigma} m_|b|
inline std::vector<Rational> cumulants_by_partition_sum(const std::vector<Rational>& m) {
    std::vector<Rational> kappa(m.size());
    for (std::size_t n = 1; n <= m.size(); ++n) {
        Rational acc = 0;
        enumerate_partitions(static_cast<int>(n), 1, static_cast<int>(n)).for_each([&](const Partition& sigma) {
            const int s = sigma.block_count();
            std::vector<int> sizes(static_cast<std::size_t>(s), 0);
            for (auto c : sigma.code()) ++sizes[c];
            Rational term = Rational(factorial(s - 1));
            if ((s - 1) % 2) term = -term;
            for (int size : sizes) term *= m[static_cast<std::size_t>(size - 1)];
            acc += term;
        });
        kappa[n - 1] = acc;
    }
    return kappa;
}

/// Cumulants kappa_1..kappa_J from raw moments m_1..m_J.
///
/// Orders up to `cross_check_order` are computed through both the recursion
/// and the set-partition sum; a disagreement throws std::logic_error.
inline std::vector<Rational> moments_to_cumulants(const std::vector<Rational>& m, std::size_t cross_check_order = 8) {
    if (m.empty()) throw ArgumentError("moments_to_cumulants: empty moment list");
    auto kappa = cumulants_by_recursion(m);
    std::vector<Rational> head(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(std::min(m.size(), cross_check_order)));
    auto check = cumulants_by_partition_sum(head);
    for (std::size_t i = 0; i < check.size(); ++i)
        if (check[i] != kappa[i]) throw std::logic_error("moment/cumulant routes disagree at order " + std::to_string(i + 1));
    return kappa;
}

}  // namespace gustat
