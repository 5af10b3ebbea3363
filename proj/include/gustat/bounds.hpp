#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gustat/contraction.hpp"
#include "gustat/errors.hpp"
#include "gustat/motif.hpp"
#include "gustat/rational.hpp"

namespace gustat {

// n^{1+(k-1)j} ||f||^j j^{j-1} (j!)^k (k!)^{j-1}
inline Rational general_cumulant_bound(long long n, int k, const Rational& sup_norm, int j) {
    if (n < 1 || k < 1 || j < 1) throw ArgumentError("general_cumulant_bound: n, k, j must be positive");
    BigInt c = ipow(BigInt(n), static_cast<unsigned>(1 + (k - 1) * j)) * ipow(BigInt(j), static_cast<unsigned>(j - 1)) *
               ipow(factorial(j), static_cast<unsigned>(k)) * ipow(factorial(k), static_cast<unsigned>(j - 1));
    return Rational(c) * rpow(sup_norm, static_cast<unsigned>(j));
}

// (j^{j-1}/a^j) sum_r |C(j,k,r)| n^r p^{d(j,k,r)}
inline Rational subgraph_cumulant_bound(const MotifGraph& g, long long n, const Rational& p, int j,
                                        int cap = kDefaultCellCap) {
    if (j < 2) throw ArgumentError("subgraph_cumulant_bound: j must be at least 2");
    if (p <= 0 || p > 1) throw ArgumentError("subgraph_cumulant_bound: p must lie in (0,1]");
    Rational sum = 0;
    for (const auto& e : cnf_profile(g, j, cap))
        sum += Rational(e.count * ipow(BigInt(n), static_cast<unsigned>(e.blocks))) *
               rpow(p, static_cast<unsigned>(e.min_edges));
    BigInt a = automorphism_count(g);
    return sum * Rational(ipow(BigInt(j), static_cast<unsigned>(j - 1))) / Rational(ipow(a, static_cast<unsigned>(j)));
}

enum class Regime { dense, sparse, critical };
enum class Containment { subcritical, supercritical, critical };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::dense: return "dense";
        case Regime::sparse: return "sparse";
        default: return "critical";
    }
}

inline std::string to_string(Containment c) {
    switch (c) {
        case Containment::subcritical: return "subcritical";
        case Containment::supercritical: return "supercritical";
        default: return "critical";
    }
}

/// Regime of p_n = c n^{-a} relative to n^{-(v-1)/e} (normality) and n^{-v/e}
/// (containment).
struct RegimeClassification {
    Rational a;
    Rational normality_exponent;    // (v-1)/e
    Rational containment_exponent;  // v/e
    Regime regime = Regime::critical;
    Containment containment = Containment::critical;
};

inline RegimeClassification classify_regime(const MotifGraph& g, const Rational& a) {
    if (!g.is_connected()) throw ArgumentError("classify_regime: motif must be connected");
    if (g.edge_count() == 0) throw ArgumentError("classify_regime: motif has no edges");
    RegimeClassification out;
    out.a = a;
    out.normality_exponent = make_rational(g.vertex_count() - 1, g.edge_count());
    out.containment_exponent = make_rational(g.vertex_count(), g.edge_count());
    out.regime = a < out.normality_exponent ? Regime::dense : a > out.normality_exponent ? Regime::sparse : Regime::critical;
    out.containment = a > out.containment_exponent   ? Containment::subcritical
                      : a < out.containment_exponent ? Containment::supercritical
                                                     : Containment::critical;
    return out;
}

// At fixed n the two regimes meet where n^{v-1} p^e = 1.
inline Regime regime_at(const MotifGraph& g, long long n, const Rational& p) {
    Rational t = Rational(ipow(BigInt(n), static_cast<unsigned>(g.vertex_count() - 1))) *
                 rpow(p, static_cast<unsigned>(g.edge_count()));
    return t > 1 ? Regime::dense : t < 1 ? Regime::sparse : Regime::critical;
}

// j^{j-1} j!^v v!^{j-1} / a^j
inline Rational regime_coefficient(const MotifGraph& g, int j) {
    const int v = g.vertex_count();
    BigInt c = ipow(BigInt(j), static_cast<unsigned>(j - 1)) * ipow(factorial(j), static_cast<unsigned>(v)) *
               ipow(factorial(v), static_cast<unsigned>(j - 1));
    return Rational(c) / Rational(ipow(BigInt(automorphism_count(g)), static_cast<unsigned>(j)));
}

inline Rational regime_bound(const MotifGraph& g, long long n, const Rational& p, int j, Regime regime) {
    if (j < 1) throw ArgumentError("regime_bound: j must be positive");
    if (!is_strongly_balanced(g)) throw ArgumentError("regime_bound: motif is not strongly balanced");
    const unsigned v = static_cast<unsigned>(g.vertex_count()), e = static_cast<unsigned>(g.edge_count());
    switch (regime) {
        case Regime::dense:
            return regime_coefficient(g, j) * Rational(ipow(BigInt(n), 1 + (v - 1) * static_cast<unsigned>(j))) *
                   rpow(p, e * static_cast<unsigned>(j));
        case Regime::sparse:
            return regime_coefficient(g, j) * Rational(ipow(BigInt(n), v)) * rpow(p, e);
        default:
            throw RegimeError("no cumulant bound at the critical regime");
    }
}

inline Rational regime_bound(const MotifGraph& g, long long n, const Rational& p, int j) {
    return regime_bound(g, n, p, j, regime_at(g, n, p));
}

// For p = n^{-a} in the dense regime: every r < 1+(k-1)j term of the
// block-count sum has a strictly smaller exponent r - a d(j,k,r) than the top one.
inline bool dense_leading_term_dominates(const MotifGraph& g, int j, const Rational& a, int cap = kDefaultCellCap) {
    const int k = g.vertex_count();
    const int top = 1 + (k - 1) * j;
    Rational top_exp;
    std::vector<Rational> others;
    for (const auto& e : cnf_profile(g, j, cap)) {
        Rational x = Rational(e.blocks) - a * e.min_edges;
        if (e.blocks == top) top_exp = x;
        else others.push_back(x);
    }
    for (const auto& x : others)
        if (!(x < top_exp)) return false;
    return true;
}

/// Lower-bound constants for kappa_2: C = Var/2 and the threshold
/// N = 2^{3k+1} ||f||^2 k! / Var past which kappa_2 >= C (n)_{2k-1}.
struct VarianceLowerBound {
    Rational variance;
    Rational c;
    Rational threshold;  // meaningful only when variance > 0
};

inline VarianceLowerBound variance_lower_bound(int k, const Rational& sup_norm, const Rational& variance) {
    VarianceLowerBound out;
    out.variance = variance;
    out.c = variance / 2;
    if (variance > 0)
        out.threshold = Rational(ipow(BigInt(2), static_cast<unsigned>(3 * k + 1)) * factorial(k)) * sup_norm * sup_norm /
                        variance;
    return out;
}

// Bound on |kappa_j| / kappa_2^{j/2} for n >= max(4(k-1), N):
//   ||f||^j j^{j-1} (j!)^k (k!)^{j-1} n^{1+(k-1)j} / (C (n/2)^{2k-1})^{j/2}.
// Compared squared so it stays exact.
inline bool normalized_cumulant_within_bound(const Rational& kappa_j, const Rational& kappa_2, long long n, int k,
                                             const Rational& sup_norm, const Rational& c, int j) {
    if (kappa_2 <= 0 || c <= 0) throw DomainError("normalized bound needs positive variance");
    Rational lhs = kappa_j * kappa_j * rpow(c * rpow(make_rational(n, 2), static_cast<unsigned>(2 * k - 1)),
                                            static_cast<unsigned>(j));
    Rational b = general_cumulant_bound(n, k, sup_norm, j);
    Rational rhs = b * b * rpow(kappa_2, static_cast<unsigned>(j));
    return lhs <= rhs;
}

/// Largest Delta with |kappa_j| <= (j!)^{1+gamma} / Delta^{j-2} on the given orders.
struct StatuleviciusFit {
    double gamma = 0;
    double delta = std::numeric_limits<double>::infinity();
    std::vector<int> orders;
    int binding_order = 0;  // 0 when nothing constrains delta

    bool unbounded() const { return std::isinf(delta); }
};

// kappas[i] is the cumulant of order i+1.
inline StatuleviciusFit fit_statulevicius(const std::vector<double>& kappas, double gamma, const std::vector<int>& orders) {
    if (gamma < 0) throw ArgumentError("fit_statulevicius: gamma must be nonnegative");
    StatuleviciusFit fit;
    fit.gamma = gamma;
    fit.orders = orders;
    for (int j : orders) {
        if (j < 3) throw ArgumentError("fit_statulevicius: orders start at 3");
        if (static_cast<std::size_t>(j) > kappas.size()) throw ArgumentError("fit_statulevicius: missing cumulant of order " + std::to_string(j));
        double kj = std::fabs(kappas[j - 1]);
        if (kj == 0) continue;
        // log Delta_j = ((1+gamma) log j! - log|kappa_j|) / (j-2)
        double log_delta = ((1 + gamma) * std::lgamma(j + 1.0) - std::log(kj)) / (j - 2);
        double d = std::exp(log_delta);
        if (d < fit.delta) {
            fit.delta = d;
            fit.binding_order = j;
        }
    }
    return fit;
}

inline nlohmann::json to_json(const StatuleviciusFit& fit) {
    nlohmann::json j;
    j["gamma"] = fit.gamma;
    if (fit.unbounded()) j["delta"] = "+inf";
    else j["delta"] = fit.delta;
    j["orders"] = fit.orders;
    j["binding_order"] = fit.binding_order;
    return j;
}

inline nlohmann::json to_json(const RegimeClassification& c) {
    return {{"a", to_string(c.a)},
            {"normality_exponent", to_string(c.normality_exponent)},
            {"containment_exponent", to_string(c.containment_exponent)},
            {"regime", to_string(c.regime)},
            {"containment", to_string(c.containment)}};
}

}  // namespace gustat
