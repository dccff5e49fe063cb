#pragma once

#include <cstdint>
#include <string>

#include "gseq/errors.hpp"

namespace gseq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin, exact for all n < 2^64 with this witness set.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// A verified prime modulus. Construction rejects composites.
class PrimeModulus {
public:
    explicit PrimeModulus(u64 p) : p_(p) {
        if (!is_prime(p)) {
            throw not_prime("modulus " + std::to_string(p) + " is not prime");
        }
    }

    u64 value() const noexcept { return p_; }

    friend bool operator==(PrimeModulus a, PrimeModulus b) noexcept { return a.p_ == b.p_; }
    friend bool operator!=(PrimeModulus a, PrimeModulus b) noexcept { return a.p_ != b.p_; }

private:
    u64 p_;
};

} // namespace gseq
