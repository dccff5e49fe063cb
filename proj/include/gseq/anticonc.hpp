#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

#include "gseq/rational.hpp"
#include "gseq/rng.hpp"
#include "gseq/sampling.hpp"

namespace gseq {

/// Worker cap for trial-parallel loops; GRAHAM_SEQ_THREADS overrides.
inline unsigned worker_count() {
    if (const char* env = std::getenv("GRAHAM_SEQ_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Constants appearing in the closed-form bounds. Paper mode uses C = 2^24
/// and the derivations C'_eps = 50*C*eps^(-3/2), C_k = C'_eps/eps with
/// eps = 1/(k+1); these are vacuous at desk scale, so an empirical mode with
/// a fitted C is provided. Every report states which mode produced a bound.
struct BoundConstants {
    enum class Mode { paper, empirical };
    Mode mode = Mode::paper;
    double empirical_C = 10.0;

    static constexpr double paper_C = 16777216.0; // 2^24

    double C() const { return mode == Mode::paper ? paper_C : empirical_C; }
    double C_eps(double eps) const { return 50.0 * C() * std::pow(eps, -1.5); }
    double C_k(int k) const {
        const double eps = 1.0 / (k + 1);
        return C_eps(eps) / eps;
    }
    const char* mode_name() const { return mode == Mode::paper ? "paper" : "empirical"; }
};

/// 1/p + C/(n sqrt(m)).
inline double bound_thm12(u64 p, std::size_t n, std::size_t m, double C) {
    if (n < 2 || m < 1) throw bad_size("bound needs n >= 2, m >= 1");
    return 1.0 / static_cast<double>(p) + C / (static_cast<double>(n) * std::sqrt(static_cast<double>(m)));
}

/// 1/p + C'_eps sqrt(log n)/(n sqrt(m)), valid for m <= (1-eps) n.
/// Logs are natural; for n with log n < 1 the sqrt factor is < 1, unclamped.
inline double bound_cor13(u64 p, std::size_t n, std::size_t m, double eps, double C_eps) {
    if (n < 2 || m < 1) throw bad_size("bound needs n >= 2, m >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw eps_range("eps must be in (0,1)");
    if (static_cast<double>(m) > (1.0 - eps) * static_cast<double>(n))
        throw eps_range("m exceeds (1-eps)|S|");
    return 1.0 / static_cast<double>(p) +
           C_eps * std::sqrt(std::log(static_cast<double>(n))) /
               (static_cast<double>(n) * std::sqrt(static_cast<double>(m)));
}

/// The unconditional slice bound 1/(n-m+1), exact.
inline Rat bound_lemma41(std::size_t n, std::size_t m) {
    if (m < 1 || m > n) throw bad_size("lemma 4.1 needs 1 <= m <= n");
    return Rat(1, static_cast<unsigned long>(n - m + 1));
}

/// Chain bound: sum over j of the product over i != j of
/// (1/p + C_k sqrt(log n)/(n sqrt(m_{i+1}-m_i))), with m_0 = 0, m_{k+1} = n.
inline double bound_cor42(u64 p, std::size_t n, const std::vector<std::size_t>& sizes, double C_k) {
    const std::size_t k = sizes.size();
    if (k == 0) throw bad_size("empty size vector");
    for (std::size_t i = 0; i < k; ++i) {
        if (sizes[i] < 1 || sizes[i] >= n || (i > 0 && sizes[i] <= sizes[i - 1]))
            throw bad_size("need 1 <= m_1 < ... < m_k < n");
    }
    std::vector<double> factor(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        const std::size_t lo = i == 0 ? 0 : sizes[i - 1];
        const std::size_t hi = i == k ? n : sizes[i];
        factor[i] = 1.0 / static_cast<double>(p) +
                    C_k * std::sqrt(std::log(static_cast<double>(n))) /
                        (static_cast<double>(n) * std::sqrt(static_cast<double>(hi - lo)));
    }
    double total = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        double prod = 1.0;
        for (std::size_t i = 0; i <= k; ++i) {
            if (i != j) prod *= factor[i];
        }
        total += prod;
    }
    return total;
}

/// (k+1) * (n/p + 2 C_k sqrt(log n)/sqrt(n))^k.
inline double bound_lemma43(u64 p, std::size_t n, int k, double C_k) {
    if (k < 1 || n < 2) throw bad_size("lemma 4.3 needs k >= 1, n >= 2");
    const double base = static_cast<double>(n) / static_cast<double>(p) +
                        2.0 * C_k * std::sqrt(std::log(static_cast<double>(n))) /
                            std::sqrt(static_cast<double>(n));
    return (k + 1) * std::pow(base, k);
}

struct Lemma43Report {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0; // lhs / rhs
    std::size_t tuples = 0;
};

/// Direct summation of the chain bound over all 1 <= m_1 < ... < m_k < n,
/// compared against the closed form.
inline Lemma43Report check_lemma43_inequality(u64 p, std::size_t n, int k, double C_k) {
    if (k < 1 || k > 3 || n > 60) throw too_large("direct summation capped at k <= 3, n <= 60");
    Lemma43Report rep;
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k));
    auto rec = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
        if (depth == sizes.size()) {
            rep.lhs += bound_cor42(p, n, sizes, C_k);
            ++rep.tuples;
            return;
        }
        for (std::size_t m = from; m < n; ++m) {
            sizes[depth] = m;
            self(self, depth + 1, m + 1);
        }
    };
    rec(rec, 0, 1);
    rep.rhs = bound_lemma43(p, n, k, C_k);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

struct EstimateRecord {
    u64 p = 0;
    std::size_t n = 0;
    std::vector<std::size_t> sizes; // single m for slices
    u64 trials = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    u64 seed = 0;
};

namespace detail {

// Trials run in fixed blocks; block i uses substream i of the seed, so
// merged results are independent of the worker count.
constexpr u64 mc_block = 1u << 16;

template <class PerTrial>
inline std::vector<u64> mc_histogram(u64 bins, u64 trials, u64 seed, unsigned workers, PerTrial&& per_trial) {
    const u64 blocks = (trials + mc_block - 1) / mc_block;
    workers = std::max<unsigned>(1, std::min<u64>(workers, blocks));
    std::vector<std::vector<u64>> hists(workers, std::vector<u64>(bins, 0));
    std::atomic<u64> next{0};
    auto run = [&](unsigned wi) {
        for (;;) {
            const u64 b = next.fetch_add(1);
            if (b >= blocks) return;
            Rng rng(derive_stream_seed(seed, b));
            const u64 lo = b * mc_block;
            const u64 hi = std::min(trials, lo + mc_block);
            for (u64 t = lo; t < hi; ++t) per_trial(rng, hists[wi], wi);
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    std::vector<u64>& acc = hists[0];
    for (unsigned w = 1; w < workers; ++w) {
        for (u64 z = 0; z < bins; ++z) acc[z] += hists[w][z];
    }
    return acc;
}

} // namespace detail

/// Histogram of Sigma(R) over `trials` uniform m-subsets. Per-trial draws
/// replicate sample_uniform_subset (partial Fisher-Yates, undone after each
/// trial instead of re-copying the pool).
inline std::vector<u64> mc_sum_histogram(PrimeModulus p, const std::vector<u64>& elements, std::size_t m,
                                         u64 trials, u64 seed) {
    if (m > elements.size()) throw bad_size("subset size exceeds |S|");
    const u64 P = p.value();
    const std::size_t n = elements.size();
    std::vector<u64> base = detail::sorted_copy(elements);
    for (u64& v : base) v %= P;

    struct Scratch {
        std::vector<u64> pool;
        std::vector<std::size_t> swaps;
    };
    const unsigned workers = worker_count();
    std::vector<Scratch> scratch(workers, Scratch{base, {}});

    return detail::mc_histogram(P, trials, seed, workers, [&](Rng& rng, std::vector<u64>& hist, unsigned wi) {
        auto& pool = scratch[wi].pool;
        auto& swaps = scratch[wi].swaps;
        swaps.clear();
        u64 sum = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            std::swap(pool[i], pool[j]);
            swaps.push_back(j);
            sum += pool[i];
            if (sum >= P) sum -= P;
        }
        ++hist[sum];
        for (std::size_t i = m; i-- > 0;) std::swap(pool[i], pool[swaps[i]]);
    });
}

inline EstimateRecord make_estimate(u64 p, std::size_t n, std::vector<std::size_t> sizes, u64 hits, u64 trials,
                                    u64 seed) {
    EstimateRecord rec;
    rec.p = p;
    rec.n = n;
    rec.sizes = std::move(sizes);
    rec.trials = trials;
    rec.seed = seed;
    rec.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    rec.std_error = std::sqrt(rec.estimate * (1.0 - rec.estimate) / static_cast<double>(trials));
    return rec;
}

/// Monte Carlo estimate of max_z P[Sigma(R) = z].
inline EstimateRecord mc_max_point_probability(PrimeModulus p, const std::vector<u64>& elements, std::size_t m,
                                               u64 trials, u64 seed) {
    if (trials < 1) throw bad_size("trials >= 1 required");
    const auto hist = mc_sum_histogram(p, elements, m, trials, seed);
    u64 best = 0;
    for (u64 c : hist) best = std::max(best, c);
    return make_estimate(p.value(), elements.size(), {m}, best, trials, seed);
}

/// Inverts the Thm 1.2 shape: C_emp = (maxprob - 1/p) * n * sqrt(m).
inline double empirical_constant(u64 p, std::size_t n, std::size_t m, double maxprob) {
    const double floor = 1.0 / static_cast<double>(p);
    if (maxprob < floor) throw below_floor("max probability below 1/p (MC noise?)");
    return (maxprob - floor) * static_cast<double>(n) * std::sqrt(static_cast<double>(m));
}

/// Empirical frequency of the joint chain event Sigma(R_i) = z_i over
/// sampled chains.
inline EstimateRecord mc_chain_probability(PrimeModulus p, const std::vector<u64>& elements,
                                           const std::vector<std::size_t>& sizes, const std::vector<u64>& targets,
                                           u64 trials, u64 seed) {
    if (trials < 1) throw bad_size("trials >= 1 required");
    if (targets.size() != sizes.size()) throw bad_size("one target per chain size");
    const u64 P = p.value();
    const std::size_t n = elements.size();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1 || sizes[i] >= n || (i > 0 && sizes[i] <= sizes[i - 1]))
            throw bad_size("chain sizes must satisfy 1 <= m_1 < ... < m_k < |S|");
    }
    std::vector<u64> base = detail::sorted_copy(elements);
    for (u64& v : base) v %= P;
    std::vector<u64> want(targets);
    for (u64& z : want) z %= P;

    struct Scratch {
        std::vector<u64> pool;
        std::vector<std::size_t> swaps;
    };
    const unsigned workers = worker_count();
    std::vector<Scratch> scratch(workers, Scratch{base, {}});

    // bin 0 = miss, bin 1 = joint hit
    const auto hist =
        detail::mc_histogram(2, trials, seed, workers, [&](Rng& rng, std::vector<u64>& h, unsigned wi) {
            auto& pool = scratch[wi].pool;
            auto& swaps = scratch[wi].swaps;
            swaps.clear();
            u64 sum = 0;
            bool ok = true;
            std::size_t have = 0;
            for (std::size_t li = 0; li < sizes.size(); ++li) {
                for (std::size_t i = have; i < sizes[li]; ++i) {
                    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                    std::swap(pool[i], pool[j]);
                    swaps.push_back(j);
                    sum += pool[i];
                    if (sum >= P) sum -= P;
                }
                have = sizes[li];
                ok = ok && sum == want[li];
            }
            ++h[ok ? 1 : 0];
            for (std::size_t i = have; i-- > 0;) std::swap(pool[i], pool[swaps[i]]);
        });
    return make_estimate(P, n, sizes, hist[1], trials, seed);
}

} // namespace gseq
