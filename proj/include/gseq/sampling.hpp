#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gseq/errors.hpp"
#include "gseq/prime.hpp"

namespace gseq {

/// Ordered partition (S_1, ..., S_m) of S into parts whose sizes differ by
/// at most one, the larger parts first: exactly n - m*floor(n/m) parts of
/// size floor(n/m)+1, the rest of size floor(n/m).
struct EquitablePartition {
    std::vector<std::vector<u64>> parts;

    std::size_t total_size() const {
        std::size_t s = 0;
        for (const auto& part : parts) s += part.size();
        return s;
    }
};

inline std::vector<std::size_t> equitable_size_profile(std::size_t n, std::size_t m) {
    if (m < 1 || m > n) throw bad_size("partition needs 1 <= m <= |S|");
    const std::size_t q = n / m, r = n - m * q;
    std::vector<std::size_t> sizes(m, q);
    for (std::size_t i = 0; i < r; ++i) sizes[i] = q + 1;
    return sizes;
}

namespace detail {

template <class Source>
inline void shuffle_all(std::vector<u64>& a, Source& src) {
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(src.below(a.size() - i));
        std::swap(a[i], a[j]);
    }
}

inline std::vector<u64> sorted_copy(const std::vector<u64>& elements) {
    std::vector<u64> a(elements);
    std::sort(a.begin(), a.end());
    return a;
}

} // namespace detail

/// Uniform m-subset of S via partial Fisher-Yates on the sorted element
/// array; returned sorted.
template <class Source>
inline std::vector<u64> sample_uniform_subset(const std::vector<u64>& elements, std::size_t m, Source& src) {
    if (m > elements.size()) throw bad_size("subset size exceeds |S|");
    std::vector<u64> a = detail::sorted_copy(elements);
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(src.below(n - i));
        std::swap(a[i], a[j]);
    }
    a.resize(m);
    std::sort(a.begin(), a.end());
    return a;
}

/// Uniform over all ordered partitions with the equitable size profile:
/// shuffle, then cut.
template <class Source>
inline EquitablePartition sample_equitable_partition(const std::vector<u64>& elements, std::size_t m,
                                                     Source& src) {
    std::vector<u64> a = detail::sorted_copy(elements);
    const auto sizes = equitable_size_profile(a.size(), m);
    detail::shuffle_all(a, src);
    EquitablePartition part;
    part.parts.reserve(m);
    std::size_t at = 0;
    for (std::size_t s : sizes) {
        part.parts.emplace_back(a.begin() + at, a.begin() + at + s);
        at += s;
    }
    return part;
}

/// The representation used by the anticoncentration proof: draw an
/// equitable partition, then pick one uniform element per part. The result
/// is distributed exactly as a uniform m-subset.
template <class Source>
inline std::vector<u64> sample_via_partition(const std::vector<u64>& elements, std::size_t m, Source& src) {
    const EquitablePartition part = sample_equitable_partition(elements, m, src);
    std::vector<u64> picks;
    picks.reserve(m);
    for (const auto& s : part.parts) {
        picks.push_back(s[static_cast<std::size_t>(src.below(s.size()))]);
    }
    std::sort(picks.begin(), picks.end());
    return picks;
}

/// Nested random subsets R_1 c= ... c= R_k with |R_i| = m_i, uniform over
/// all such chains (sequential uniform extension).
struct SubsetChain {
    std::vector<std::vector<u64>> sets; // each sorted
    std::vector<std::size_t> sizes;
};

template <class Source>
inline SubsetChain sample_chain(const std::vector<u64>& elements, const std::vector<std::size_t>& sizes,
                                Source& src) {
    const std::size_t n = elements.size();
    if (sizes.empty()) throw bad_size("empty size vector");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1 || sizes[i] >= n) throw bad_size("chain sizes must satisfy 1 <= m_1 < ... < m_k < |S|");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw bad_size("chain sizes must be strictly increasing");
    }
    std::vector<u64> pool = detail::sorted_copy(elements);
    SubsetChain chain;
    chain.sizes = sizes;
    std::size_t have = 0;
    for (std::size_t mi : sizes) {
        for (std::size_t i = have; i < mi; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(src.below(n - i));
            std::swap(pool[i], pool[j]);
        }
        have = mi;
        std::vector<u64> r(pool.begin(), pool.begin() + mi);
        std::sort(r.begin(), r.end());
        chain.sets.push_back(std::move(r));
    }
    return chain;
}

} // namespace gseq
