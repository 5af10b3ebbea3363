#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gustat/cumulants.hpp"
#include "gustat/enumerate.hpp"
#include "gustat/errors.hpp"
#include "gustat/model.hpp"
#include "gustat/partition.hpp"
#include "gustat/rational.hpp"

namespace gustat {

struct ExactOptions {
    int cap = kDefaultCellCap;
    int threads = 1;
};

/// Integrates the identified product kernel (f x ... x f)_rho over the
/// finite mark spaces.
///
/// Vertex variables are shared per block; edge variables are keyed by the
/// unordered pair of blocks their endpoints fall in (the contraction of K_k).
/// Edge variables seen by a single row are summed out of that row's kernel in
/// advance, so only shared edge variables are enumerated. Arithmetic runs on
/// integers scaled by common denominators.
class IntegralEngine {
public:
    enum class Mode { generalized, vertex_only };

    explicit IntegralEngine(const FiniteModelSpec& spec, Mode mode = Mode::generalized)
        : spec_(spec), mode_(mode) {
        spec_.validate();
        if (mode_ == Mode::vertex_only && spec_.k > 1 && spec_.edge_space_size() != 1)
            throw ArgumentError("vertex-only kernels need a singleton edge space");
        mu_den_ = common_denominator(spec_.vertex_probs);
        q_den_ = common_denominator(spec_.edge_probs);
        f_den_ = common_denominator(spec_.kernel);
        for (const auto& q : spec_.vertex_probs) mu_num_.push_back(numerator_of(q * mu_den_));
        for (const auto& q : spec_.edge_probs) q_num_.push_back(numerator_of(q * q_den_));
        f_num_.reserve(spec_.kernel.size());
        for (const auto& v : spec_.kernel) f_num_.push_back(numerator_of(v * f_den_));

        const int k = spec_.k;
        const int slots = spec_.edge_slots();
        edge_stride_.assign(static_cast<std::size_t>(slots), 1);
        for (int s = slots - 2; s >= 0; --s) edge_stride_[s] = edge_stride_[s + 1] * static_cast<std::size_t>(spec_.edge_space_size());
        std::size_t edge_block = 1;
        for (int s = 0; s < slots; ++s) edge_block *= static_cast<std::size_t>(spec_.edge_space_size());
        vertex_stride_.assign(static_cast<std::size_t>(k), edge_block);
        for (int v = k - 2; v >= 0; --v)
            vertex_stride_[v] = vertex_stride_[v + 1] * static_cast<std::size_t>(spec_.vertex_space_size());
        tables_.resize(std::size_t{1} << slots);
    }

    const FiniteModelSpec& spec() const { return spec_; }

    Rational integral(const Partition& rho) const {
        const int k = spec_.k;
        if (rho.cols() != k) throw ArgumentError("partition width does not match the kernel arity");
        const int rows = rho.rows();
        const int blocks = rho.block_count();
        const int slots = spec_.edge_slots();
        const bool with_edges = mode_ == Mode::generalized && slots > 0;

        // Edge variables per (row, slot).
        std::map<std::pair<int, int>, int> var_of_pair;
        std::vector<int> slot_var(static_cast<std::size_t>(rows * slots), -1);
        std::vector<int> uses;
        if (with_edges) {
            for (int r = 0; r < rows; ++r) {
                for (int u = 0; u < k; ++u) {
                    for (int v = u + 1; v < k; ++v) {
                        int a = rho.block_of(r * k + u), b = rho.block_of(r * k + v);
                        if (a == b) throw std::logic_error("edge variable inside a single block (flat partition)");
                        auto [it, fresh] = var_of_pair.try_emplace({std::min(a, b), std::max(a, b)},
                                                                   static_cast<int>(uses.size()));
                        if (fresh) uses.push_back(0);
                        ++uses[it->second];
                        slot_var[r * slots + edge_slot(u, v, k)] = it->second;
                    }
                }
            }
        }
        const int edge_vars = static_cast<int>(uses.size());
        std::vector<int> shared_id(uses.size(), -1);
        int shared = 0;
        for (std::size_t e = 0; e < uses.size(); ++e)
            if (uses[e] > 1) shared_id[e] = shared++;

        struct RowPlan {
            const std::vector<BigInt>* table;
            std::vector<std::pair<int, std::size_t>> vertex_terms;  // (block, stride)
            std::vector<std::pair<int, std::size_t>> edge_terms;    // (shared var, stride)
        };
        std::vector<RowPlan> plan(static_cast<std::size_t>(rows));
        for (int r = 0; r < rows; ++r) {
            unsigned mask = 0;
            for (int s = 0; s < slots && with_edges; ++s) {
                int var = slot_var[r * slots + s];
                if (shared_id[var] < 0) mask |= 1u << s;
                else plan[r].edge_terms.emplace_back(shared_id[var], edge_stride_[s]);
            }
            plan[r].table = &table(mask);
            for (int u = 0; u < k; ++u) plan[r].vertex_terms.emplace_back(rho.block_of(r * k + u), vertex_stride_[u]);
        }

        const int digits = blocks + shared;
        std::vector<int> value(static_cast<std::size_t>(digits), 0);
        const int vs = spec_.vertex_space_size(), es = spec_.edge_space_size();
        BigInt total = 0, prod, weight;
        while (true) {
            prod = 1;
            for (const auto& row : plan) {
                std::size_t idx = 0;
                for (auto [b, stride] : row.vertex_terms) idx += static_cast<std::size_t>(value[b]) * stride;
                for (auto [e, stride] : row.edge_terms) idx += static_cast<std::size_t>(value[blocks + e]) * stride;
                const BigInt& f = (*row.table)[idx];
                if (f == 0) { prod = 0; break; }
                prod *= f;
            }
            if (prod != 0) {
                weight = 1;
                for (int b = 0; b < blocks; ++b) weight *= mu_num_[value[b]];
                for (int e = 0; e < shared; ++e) weight *= q_num_[value[blocks + e]];
                total += prod * weight;
            }
            int d = 0;
            for (; d < digits; ++d) {
                if (++value[d] < (d < blocks ? vs : es)) break;
                value[d] = 0;
            }
            if (d == digits) break;
        }
        BigInt den = ipow(mu_den_, static_cast<unsigned>(blocks)) * ipow(q_den_, static_cast<unsigned>(edge_vars)) *
                     ipow(f_den_, static_cast<unsigned>(rows));
        return Rational(total, den);
    }

private:
    static BigInt common_denominator(const std::vector<Rational>& values) {
        BigInt d = 1;
        for (const auto& v : values) d = boost::multiprecision::lcm(d, denominator_of(v));
        return d;
    }

    // Kernel with the slots in `mask` summed against Q; entries live at indices
    // whose masked digits are zero. Scale: f_den * q_den^|mask|.
    const std::vector<BigInt>& table(unsigned mask) const {
        std::lock_guard lock(mutex_);
        auto& slot = tables_[mask];
        if (slot) return *slot;
        auto out = std::make_unique<std::vector<BigInt>>(f_num_.size(), BigInt(0));
        const int slots = spec_.edge_slots();
        const std::size_t es = static_cast<std::size_t>(spec_.edge_space_size());
        for (std::size_t idx = 0; idx < f_num_.size(); ++idx) {
            if (f_num_[idx] == 0) continue;
            std::size_t target = idx;
            BigInt w = f_num_[idx];
            for (int s = 0; s < slots; ++s) {
                if (!(mask >> s & 1u)) continue;
                std::size_t digit = (idx / edge_stride_[s]) % es;
                target -= digit * edge_stride_[s];
                w *= q_num_[digit];
            }
            (*out)[target] += w;
        }
        slot = std::move(out);
        return *slot;
    }

    FiniteModelSpec spec_;
    Mode mode_;
    BigInt mu_den_, q_den_, f_den_;
    std::vector<BigInt> mu_num_, q_num_, f_num_;
    std::vector<std::size_t> vertex_stride_, edge_stride_;
    mutable std::mutex mutex_;
    mutable std::vector<std::unique_ptr<std::vector<BigInt>>> tables_;
};

/// E[S^j] as a polynomial in n: sum_r (n)_r c_r, where c_r collects the
/// integrals of all admissible partitions with r blocks.
struct MomentExpansion {
    int order = 1;
    int k = 1;
    std::vector<Rational> by_blocks;  // index r = block count

    Rational at(long long n) const {
        Rational total = 0;
        for (std::size_t r = 0; r < by_blocks.size(); ++r)
            if (by_blocks[r] != 0) total += Rational(falling_factorial(n, static_cast<long long>(r))) * by_blocks[r];
        return total;
    }
};

namespace detail {

template <typename Accept>
MomentExpansion expand_moment(const IntegralEngine& engine, int j, const ExactOptions& opts, bool non_flat_only) {
    const int k = engine.spec().k;
    if (j < 1) throw ArgumentError("moment order must be positive");
    EnumerationOptions eo;
    eo.non_flat_only = non_flat_only;
    eo.cap = opts.cap;
    auto partitions = PartitionEnumerator(j, k, eo).collect();

    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(partitions.size())));
    std::vector<std::vector<Rational>> partial(static_cast<std::size_t>(threads),
                                               std::vector<Rational>(static_cast<std::size_t>(j * k + 1)));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    auto work = [&](int w) {
        try {
            for (std::size_t i = static_cast<std::size_t>(w); i < partitions.size(); i += static_cast<std::size_t>(threads))
                partial[w][partitions[i].block_count()] += engine.integral(partitions[i]);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    MomentExpansion out;
    out.order = j;
    out.k = k;
    out.by_blocks.assign(static_cast<std::size_t>(j * k + 1), Rational(0));
    for (const auto& part : partial)
        for (std::size_t r = 0; r < part.size(); ++r) out.by_blocks[r] += part[r];
    return out;
}

struct AcceptAll {};

}  // namespace detail

// Moment identity: E[S_{n,k}(f)^j] = sum over non-flat rho of (n)_|rho| times
// the integral of (f x ... x f)_rho.
inline MomentExpansion moment_expansion(const IntegralEngine& engine, int j, const ExactOptions& opts = {}) {
    return detail::expand_moment<detail::AcceptAll>(engine, j, opts, true);
}

inline MomentExpansion moment_expansion(const FiniteModelSpec& spec, int j, const ExactOptions& opts = {}) {
    IntegralEngine engine(spec);
    return moment_expansion(engine, j, opts);
}

inline Rational moment(const FiniteModelSpec& spec, long long n, int j, const ExactOptions& opts = {}) {
    if (n < 1) throw ArgumentError("n must be positive");
    return moment_expansion(spec, j, opts).at(n);
}

// Expansions for orders 1..J sharing one engine.
inline std::vector<MomentExpansion> moment_expansions(const FiniteModelSpec& spec, int max_order,
                                                      const ExactOptions& opts = {}) {
    IntegralEngine engine(spec);
    std::vector<MomentExpansion> out;
    for (int j = 1; j <= max_order; ++j) out.push_back(moment_expansion(engine, j, opts));
    return out;
}

inline std::vector<Rational> moments_at(const std::vector<MomentExpansion>& expansions, long long n) {
    std::vector<Rational> m;
    for (const auto& e : expansions) m.push_back(e.at(n));
    return m;
}

// V-statistic moments: same sum without the non-flat restriction, kernel over
// vertex marks only.
inline Rational v_statistic_moment(const FiniteModelSpec& spec, long long n, int j, const ExactOptions& opts = {}) {
    IntegralEngine engine(spec, IntegralEngine::Mode::vertex_only);
    return detail::expand_moment<detail::AcceptAll>(engine, j, opts, false).at(n);
}

/// Exhaustive expectation of S^1..S^J over every realization of the marks.
inline std::vector<Rational> brute_force_moments(const FiniteModelSpec& spec, int n, int max_order,
                                                 double max_states = 1e7) {
    spec.validate();
    if (n < 1 || max_order < 1) throw ArgumentError("brute_force_moments: n and order must be positive");
    const int k = spec.k;
    const int pairs = n * (n - 1) / 2;
    const int vs = spec.vertex_space_size(), es = spec.edge_space_size();
    const double states = std::pow(static_cast<double>(vs), n) * std::pow(static_cast<double>(es), pairs);
    if (states > max_states)
        throw SizeLimitError("brute force over " + std::to_string(states) + " states exceeds the limit");

    std::vector<std::vector<int>> tuples;  // [n]^k with distinct entries
    {
        std::vector<int> t(static_cast<std::size_t>(k), 0);
        while (true) {
            bool distinct = true;
            for (int a = 0; a < k && distinct; ++a)
                for (int b = 0; b < a; ++b)
                    if (t[a] == t[b]) { distinct = false; break; }
            if (distinct) tuples.push_back(t);
            int d = k - 1;
            for (; d >= 0; --d) {
                if (++t[d] < n) break;
                t[d] = 0;
            }
            if (d < 0) break;
        }
    }
    auto pair_index = [n](int a, int b) {
        if (a > b) std::swap(a, b);
        return a * (2 * n - a - 1) / 2 + (b - a - 1);
    };

    std::vector<int> xs(static_cast<std::size_t>(n), 0), ys(static_cast<std::size_t>(pairs), 0);
    std::vector<int> x(static_cast<std::size_t>(k)), y(static_cast<std::size_t>(spec.edge_slots()));
    std::vector<Rational> m(static_cast<std::size_t>(max_order), Rational(0));
    while (true) {
        Rational w = 1;
        for (int i = 0; i < n; ++i) w *= spec.vertex_probs[xs[i]];
        for (int e = 0; e < pairs && w != 0; ++e) w *= spec.edge_probs[ys[e]];
        if (w != 0) {
            Rational s = 0;
            for (const auto& beta : tuples) {
                for (int u = 0; u < k; ++u) x[u] = xs[beta[u]];
                for (int u = 0; u < k; ++u)
                    for (int v = u + 1; v < k; ++v) y[edge_slot(u, v, k)] = ys[pair_index(beta[u], beta[v])];
                s += spec(x, y);
            }
            Rational power = w;
            for (int j = 0; j < max_order; ++j) {
                power *= s;
                m[j] += power;
            }
        }
        // odometer over vertex marks then edge marks
        int d = 0;
        for (; d < n + pairs; ++d) {
            int& digit = d < n ? xs[d] : ys[d - n];
            if (++digit < (d < n ? vs : es)) break;
            digit = 0;
        }
        if (d == n + pairs) break;
    }
    return m;
}

inline Rational brute_force_moment(const FiniteModelSpec& spec, int n, int j, double max_states = 1e7) {
    return brute_force_moments(spec, n, j, max_states).back();
}

// f_(ell)(x): expectation of f with vertex coordinate ell (1-based) pinned to x.
inline std::vector<Rational> marginal(const FiniteModelSpec& spec, int ell) {
    spec.validate();
    if (ell < 1 || ell > spec.k) throw ArgumentError("marginal: ell must lie in 1..k");
    const int k = spec.k, vs = spec.vertex_space_size(), es = spec.edge_space_size(), slots = spec.edge_slots();
    std::vector<Rational> out(static_cast<std::size_t>(vs), Rational(0));
    for (std::size_t idx = 0; idx < spec.kernel.size(); ++idx) {
        if (spec.kernel[idx] == 0) continue;
        std::size_t rest = idx;
        Rational w = spec.kernel[idx];
        for (int s = 0; s < slots; ++s) {
            w *= spec.edge_probs[rest % static_cast<std::size_t>(es)];
            rest /= static_cast<std::size_t>(es);
        }
        int pinned = 0;
        for (int v = k - 1; v >= 0; --v) {
            int mark = static_cast<int>(rest % static_cast<std::size_t>(vs));
            rest /= static_cast<std::size_t>(vs);
            if (v == ell - 1) pinned = mark;
            else w *= spec.vertex_probs[mark];
        }
        out[pinned] += w;
    }
    return out;
}

// Var[sum_ell f_(ell)(X_1)]; Assumption 1 holds iff this is positive.
inline Rational check_assumption_one(const FiniteModelSpec& spec) {
    std::vector<Rational> h(static_cast<std::size_t>(spec.vertex_space_size()), Rational(0));
    for (int ell = 1; ell <= spec.k; ++ell) {
        auto f = marginal(spec, ell);
        for (std::size_t x = 0; x < h.size(); ++x) h[x] += f[x];
    }
    Rational mean = 0, second = 0;
    for (std::size_t x = 0; x < h.size(); ++x) {
        mean += spec.vertex_probs[x] * h[x];
        second += spec.vertex_probs[x] * h[x] * h[x];
    }
    return second - mean * mean;
}

/// Joint-cumulant contributions grouped by block count: entry r holds
/// (n)_r * sum_{rho in C(j,k,r)} kappa(f_rho), with kappa(f_rho) from the
/// moment/cumulant partition formula over restricted partitions.
inline std::vector<Rational> cumulant_by_block_count(const FiniteModelSpec& spec, long long n, int j,
                                                     const ExactOptions& opts = {}) {
    IntegralEngine engine(spec);
    const int k = spec.k;
    auto row_partitions = enumerate_partitions(j, 1, std::max(j, 1)).collect();
    std::map<Partition, Rational> cache;
    auto integral = [&](const Partition& p) -> const Rational& {
        auto it = cache.find(p);
        if (it == cache.end()) it = cache.emplace(p, engine.integral(p)).first;
        return it->second;
    };
    std::vector<Rational> out(static_cast<std::size_t>(j * k + 1), Rational(0));
    enumerate_cnf(j, k, std::nullopt, opts.cap).for_each([&](const Partition& rho) {
        Rational kappa = 0;
        for (const auto& sigma : row_partitions) {
            const int s = sigma.block_count();
            Rational term = Rational(factorial(s - 1));
            if ((s - 1) % 2) term = -term;
            std::vector<std::vector<int>> groups(static_cast<std::size_t>(s));
            for (int r = 0; r < j; ++r) groups[sigma.block_of(r)].push_back(r);
            for (const auto& g : groups) term *= integral(restrict_rows(rho, g));
            kappa += term;
        }
        out[rho.block_count()] += kappa;
    });
    for (std::size_t r = 0; r < out.size(); ++r)
        out[r] *= Rational(falling_factorial(n, static_cast<long long>(r)));
    return out;
}

struct VarianceDecomposition {
    Rational kappa2;
    Rational leading;    // (n)_{2k-1} Var[sum_ell f_(ell)(X_1)]
    Rational remainder;  // kappa2 - leading
    std::vector<Rational> by_blocks;
    bool leading_matches_top_blocks = false;      // by_blocks[2k-1] == leading
    bool remainder_from_small_blocks = false;     // sum_{r <= 2k-2} by_blocks[r] == remainder
};

inline VarianceDecomposition variance_decomposition(const FiniteModelSpec& spec, long long n,
                                                    const ExactOptions& opts = {}) {
    const int k = spec.k;
    if (n < 2 * k - 1) throw ArgumentError("variance_decomposition requires n >= 2k-1");
    auto ex = moment_expansions(spec, 2, opts);
    VarianceDecomposition out;
    Rational m1 = ex[0].at(n);
    out.kappa2 = ex[1].at(n) - m1 * m1;
    out.leading = Rational(falling_factorial(n, 2 * k - 1)) * check_assumption_one(spec);
    out.remainder = out.kappa2 - out.leading;
    out.by_blocks = cumulant_by_block_count(spec, n, 2, opts);
    Rational small = 0;
    for (int r = 0; r <= 2 * k - 2; ++r) small += out.by_blocks[r];
    out.leading_matches_top_blocks = out.by_blocks[2 * k - 1] == out.leading;
    out.remainder_from_small_blocks = small == out.remainder;
    return out;
}

// E[N_G] = (n)_k p^e(G)/a(G) * E[prod_{edges} H(X_u, X_v)].
inline Rational mean_subgraph_count(const SubgraphKernelSpec& spec, long long n) {
    spec.validate();
    const int k = spec.motif.vertex_count();
    if (n < k) throw ArgumentError("n must be at least the motif size");
    const int m = spec.vertex_space_size();
    std::vector<int> x(static_cast<std::size_t>(k), 0);
    Rational integral = 0;
    while (true) {
        Rational w = 1;
        for (int v = 0; v < k; ++v) w *= spec.vertex_probs[x[v]];
        for (auto [u, v] : spec.motif.edges()) w *= spec.connection[x[u]][x[v]];
        integral += w;
        int d = k - 1;
        for (; d >= 0; --d) {
            if (++x[d] < m) break;
            x[d] = 0;
        }
        if (d < 0) break;
    }
    return Rational(falling_factorial(n, k)) * rpow(spec.p, static_cast<unsigned>(spec.motif.edge_count())) /
           automorphism_count(spec.motif) * integral;
}

/// Exact moments and cumulants of S_{n,k}(f) up to a given order.
struct CumulantReport {
    long long n = 0;
    int k = 0;
    int order = 0;
    std::vector<Rational> moments;
    std::vector<Rational> cumulants;
};

inline CumulantReport exact_cumulants(const FiniteModelSpec& spec, long long n, int order, const ExactOptions& opts = {}) {
    CumulantReport r;
    r.n = n;
    r.k = spec.k;
    r.order = order;
    r.moments = moments_at(moment_expansions(spec, order, opts), n);
    r.cumulants = moments_to_cumulants(r.moments);
    return r;
}

}  // namespace gustat
