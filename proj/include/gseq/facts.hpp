#pragma once

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "gseq/rational.hpp"
#include "gseq/zp.hpp"

namespace gseq {

/// ||y1+...+yk||_Z^2 <= k (||y1||^2 + ... + ||yk||^2), exact rationals.
inline bool fact_cauchy_schwarz_Z(const std::vector<Rat>& ys) {
    Rat sum = 0, sq = 0;
    for (const Rat& y : ys) {
        sum += y;
        const Rat d = nearest_int_dist(y);
        sq += d * d;
    }
    const Rat d = nearest_int_dist(sum);
    return d * d <= Rat(static_cast<unsigned long long>(ys.size())) * sq;
}

/// ||x1+...+xk||_p^2 <= k (||x1||^2 + ... + ||xk||^2), exact integers over p^2.
inline bool fact_cauchy_schwarz_p(u64 p, const std::vector<u64>& xs) {
    u64 sum = 0;
    u128 sq = 0;
    for (u64 x : xs) {
        sum = (sum + x % p) % p;
        const u64 c = circ_num(x % p, p);
        sq += static_cast<u128>(c) * c;
    }
    const u64 cs = circ_num(sum, p);
    return static_cast<u128>(cs) * cs <= static_cast<u128>(xs.size()) * sq;
}

/// 1 - 20 ||y||_Z^2 <= cos(2 pi y) <= 1 - 2 ||y||_Z^2, within tol.
inline bool fact_cosine_bounds(double y, double tol = 1e-12) {
    const double frac = y - std::floor(y);
    const double dist = std::min(frac, 1.0 - frac);
    const double c = std::cos(2.0 * M_PI * y);
    return c >= 1.0 - 20.0 * dist * dist - tol && c <= 1.0 - 2.0 * dist * dist + tol;
}

/// Re(e_p(x)) <= 1 - 2 ||x||_p^2 + tol for all x in Z_p.
inline bool fact_character_real_bound(u64 p, double tol = 1e-12) {
    PrimeModulus pm(p);
    for (u64 x = 0; x < p; ++x) {
        const double re = e_p(Residue(x, pm)).real();
        const double nrm = static_cast<double>(circ_num(x, p)) / static_cast<double>(p);
        if (re > 1.0 - 2.0 * nrm * nrm + tol) return false;
    }
    return true;
}

struct CauchyDavenportViolation {
    u64 p = 0;
    std::uint32_t set_mask = 0;
    int k = 0;
};

/// Exhaustive Cauchy-Davenport consequence over Z_p, p <= 31: for every
/// A and every k <= kmax, either kA = Z_p or |kA| >= 1 + k(|A|-1). Subsets
/// are bitmasks; the k-fold sumset is built by or-ing rotations. 2^p subsets
/// make this the one genuinely heavy exhaustive check, hence the thread
/// pool over mask ranges.
inline std::optional<CauchyDavenportViolation> check_cauchy_davenport(u64 p, int kmax,
                                                                      unsigned workers = 1) {
    if (p < 2 || p > 31 || !is_prime(p)) throw bad_size("need a prime p <= 31");
    const std::uint32_t full = p == 31 ? 0x7FFFFFFFu : ((1u << p) - 1);
    const std::uint64_t total = 1ull << p;

    auto rot = [p, full](std::uint32_t b, unsigned a) -> std::uint32_t {
        return a == 0 ? b : (((b << a) | (b >> (p - a))) & full);
    };
    auto scan = [&](std::uint64_t lo, std::uint64_t hi) -> std::optional<CauchyDavenportViolation> {
        for (std::uint64_t mv = lo; mv < hi; ++mv) {
            const auto mask = static_cast<std::uint32_t>(mv);
            const int size_a = std::popcount(mask);
            std::uint32_t cur = mask;
            for (int k = 2; k <= kmax; ++k) {
                std::uint32_t next = 0;
                std::uint32_t bits = mask;
                while (bits) {
                    next |= rot(cur, static_cast<unsigned>(std::countr_zero(bits)));
                    bits &= bits - 1;
                }
                cur = next;
                if (cur == full) break; // stays full for every larger k
                if (std::popcount(cur) < 1 + k * (size_a - 1)) {
                    return CauchyDavenportViolation{p, mask, k};
                }
            }
        }
        return std::nullopt;
    };

    if (workers <= 1 || total < (1u << 20)) return scan(0, total);

    std::atomic<std::uint64_t> next{0};
    constexpr std::uint64_t chunk = 1u << 20;
    std::vector<std::optional<CauchyDavenportViolation>> found(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (;;) {
                const std::uint64_t lo = next.fetch_add(chunk);
                if (lo >= total) return;
                const auto hit = scan(lo, std::min(total, lo + chunk));
                if (hit) {
                    found[w] = hit;
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& f : found) {
        if (f) return f;
    }
    return std::nullopt;
}

} // namespace gseq
