#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gseq/ordering.hpp"
#include "gseq/rational.hpp"
#include "gseq/zp.hpp"

namespace gseq {

/// Backtracking search for a valid ordering, exploring elements in ascending
/// order and cutting any branch whose newest prefix sum repeats an earlier
/// one (a repeated prefix can never be repaired by later choices).
/// Returns the lexicographically first valid ordering, or nullopt.
inline std::optional<std::vector<u64>> brute_force_valid_ordering(PrimeModulus p, std::vector<u64> elements) {
    const u64 P = p.value();
    for (u64& v : elements) v %= P;
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        throw duplicate_element("repeated element");
    const std::size_t n = elements.size();
    if (n > 24) throw too_large("brute force capped at |S| <= 24");
    if (n == 0) return std::vector<u64>{};

    std::vector<u64> chosen;
    std::vector<char> used(n, 0);
    std::unordered_set<u64> prefixes;
    prefixes.reserve(n * 2);
    std::vector<u64> prefix_stack{0};

    auto rec = [&](auto&& self) -> bool {
        if (chosen.size() == n) return true;
        const u64 cur = prefix_stack.back();
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            u64 next = cur + elements[i];
            if (next >= P) next -= P;
            if (prefixes.contains(next)) continue;
            used[i] = 1;
            chosen.push_back(elements[i]);
            prefixes.insert(next);
            prefix_stack.push_back(next);
            if (self(self)) return true;
            prefix_stack.pop_back();
            prefixes.erase(next);
            chosen.pop_back();
            used[i] = 0;
        }
        return false;
    };
    if (rec(rec)) return chosen;
    return std::nullopt;
}

/// Exact distribution of Sigma(R) over uniformly random m-subsets R of S:
/// counts[z] = #{R : |R| = m, Sigma(R) = z}. Counts are exact integers; a
/// u64 fast path is used whenever C(n,m) fits, big integers otherwise.
struct SliceDistribution {
    u64 p = 0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Int> counts; // size p
    Int total;               // C(n, m)

    Rat probability(u64 z) const { return Rat(counts.at(z), total); }
};

inline SliceDistribution slice_distribution(PrimeModulus p, const std::vector<u64>& elements, std::size_t m) {
    const u64 P = p.value();
    const std::size_t n = elements.size();
    if (m > n) throw bad_size("slice size m exceeds |S|");
    SliceDistribution out;
    out.p = P;
    out.n = n;
    out.m = m;
    out.total = binomial(n, m);
    out.counts.assign(P, Int(0));

    const bool fits_u64 = out.total <= Int(std::numeric_limits<u64>::max());
    if (fits_u64) {
        // f[k][z] = number of k-subsets of the elements seen so far with sum z
        std::vector<std::vector<u64>> f(m + 1, std::vector<u64>(P, 0));
        f[0][0] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const u64 x = elements[i] % P;
            const std::size_t kmax = std::min(m, i + 1);
            for (std::size_t k = kmax; k >= 1; --k) {
                auto& fk = f[k];
                const auto& fk1 = f[k - 1];
                for (u64 z = 0; z < P; ++z) {
                    const u64 src = z >= x ? z - x : z + P - x;
                    fk[z] += fk1[src];
                }
            }
        }
        for (u64 z = 0; z < P; ++z) out.counts[z] = f[m][z];
    } else {
        std::vector<std::vector<Int>> f(m + 1, std::vector<Int>(P, Int(0)));
        f[0][0] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const u64 x = elements[i] % P;
            const std::size_t kmax = std::min(m, i + 1);
            for (std::size_t k = kmax; k >= 1; --k) {
                for (u64 z = 0; z < P; ++z) {
                    const u64 src = z >= x ? z - x : z + P - x;
                    f[k][z] += f[k - 1][src];
                }
            }
        }
        out.counts = std::move(f[m]);
    }
    return out;
}

struct MaxPointProbability {
    Rat value;
    u64 argmax = 0; // smallest z attaining the maximum
};

inline MaxPointProbability max_point_probability(const SliceDistribution& dist) {
    const Int* best = &dist.counts[0];
    u64 argmax = 0;
    for (u64 z = 1; z < dist.p; ++z) {
        if (dist.counts[z] > *best) {
            best = &dist.counts[z];
            argmax = z;
        }
    }
    return {Rat(*best, dist.total), argmax};
}

namespace detail {

// Visit every chain R_1 c= ... c= R_k with the given sizes; cb receives the
// per-level sums (Sigma(R_1), ..., Sigma(R_k)).
template <class Cb>
inline void enumerate_chains(u64 P, const std::vector<u64>& elements, const std::vector<std::size_t>& sizes,
                             Cb&& cb) {
    const std::size_t n = elements.size();
    const std::size_t k = sizes.size();
    std::vector<u64> pool(elements);
    std::vector<u64> sums(k, 0);

    auto level = [&](auto&& self, std::size_t li, std::size_t pool_size, u64 acc) -> void {
        if (li == k) {
            cb(sums);
            return;
        }
        const std::size_t take = sizes[li] - (li == 0 ? 0 : sizes[li - 1]);
        // choose `take` indices from pool[0..pool_size)
        std::vector<std::size_t> idx(take);
        auto comb = [&](auto&& cself, std::size_t start, std::size_t depth, u64 partial) -> void {
            if (depth == take) {
                const u64 total = (acc + partial) % P;
                sums[li] = total;
                // deeper levels draw from the unchosen remainder, order kept
                std::vector<u64> rest;
                rest.reserve(pool_size - take);
                std::size_t ti = 0;
                for (std::size_t i2 = 0; i2 < pool_size; ++i2) {
                    if (ti < take && idx[ti] == i2) {
                        ++ti;
                        continue;
                    }
                    rest.push_back(pool[i2]);
                }
                std::vector<u64> saved(pool.begin(), pool.begin() + pool_size);
                std::copy(rest.begin(), rest.end(), pool.begin());
                self(self, li + 1, pool_size - take, total);
                std::copy(saved.begin(), saved.end(), pool.begin());
                return;
            }
            for (std::size_t i2 = start; i2 + (take - depth) <= pool_size; ++i2) {
                idx[depth] = i2;
                cself(cself, i2 + 1, depth + 1, (partial + pool[i2]) % P);
            }
        };
        comb(comb, 0, 0, 0);
    };
    level(level, 0, n, 0);
}

inline void validate_chain_sizes(std::size_t n, const std::vector<std::size_t>& sizes) {
    if (sizes.empty()) throw bad_size("empty size vector");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1 || sizes[i] >= n) throw bad_size("chain sizes must satisfy 1 <= m_1 < ... < m_k < |S|");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw bad_size("chain sizes must be strictly increasing");
    }
}

} // namespace detail

/// P[Sigma(R_i) = z_i for all i] for a uniformly random chain of subsets,
/// by exhaustive chain enumeration (|S| <= 20).
inline Rat chain_probability_exact(PrimeModulus p, const std::vector<u64>& elements,
                                   const std::vector<std::size_t>& sizes, const std::vector<u64>& targets) {
    const std::size_t n = elements.size();
    if (n > 20) throw too_large("chain enumeration capped at |S| <= 20");
    detail::validate_chain_sizes(n, sizes);
    if (targets.size() != sizes.size()) throw bad_size("one target per chain size");
    const u64 P = p.value();

    u64 matched = 0, total = 0;
    detail::enumerate_chains(P, elements, sizes, [&](const std::vector<u64>& sums) {
        ++total;
        for (std::size_t i = 0; i < sums.size(); ++i) {
            if (sums[i] != targets[i] % P) return;
        }
        ++matched;
    });
    return Rat(Int(matched), Int(total));
}

/// Exact joint law of (Sigma(R_1), ..., Sigma(R_k)) as counts per tuple,
/// keyed by z_1 + z_2*p + ... (requires p^k to fit u64).
inline std::unordered_map<u64, u64> chain_distribution(PrimeModulus p, const std::vector<u64>& elements,
                                                       const std::vector<std::size_t>& sizes) {
    const std::size_t n = elements.size();
    if (n > 20) throw too_large("chain enumeration capped at |S| <= 20");
    detail::validate_chain_sizes(n, sizes);
    const u64 P = p.value();
    if (static_cast<double>(sizes.size()) * std::log2(static_cast<double>(P)) > 63.0)
        throw too_large("p^k key does not fit 64 bits");
    std::unordered_map<u64, u64> hist;
    detail::enumerate_chains(P, elements, sizes, [&](const std::vector<u64>& sums) {
        u64 key = 0;
        for (std::size_t i = sums.size(); i-- > 0;) key = key * P + sums[i];
        ++hist[key];
    });
    return hist;
}

} // namespace gseq
