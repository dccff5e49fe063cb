#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>

#include "gseq/prime.hpp"

namespace gseq {

/// Element of Z_p in canonical form (0 <= value < p).
class Residue {
public:
    Residue(u64 value, PrimeModulus m) : v_(value % m.value()), p_(m.value()) {}

    static Residue from_int(i64 value, PrimeModulus m) {
        i64 r = value % static_cast<i64>(m.value());
        if (r < 0) r += static_cast<i64>(m.value());
        return Residue(static_cast<u64>(r), m);
    }

    u64 value() const noexcept { return v_; }
    u64 modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return v_ == 0; }

    friend Residue operator+(Residue a, Residue b) {
        a.check(b);
        u64 s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return Residue(s, a.p_, 0);
    }
    friend Residue operator-(Residue a, Residue b) {
        a.check(b);
        u64 s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.p_ - b.v_;
        return Residue(s, a.p_, 0);
    }
    friend Residue operator*(Residue a, Residue b) {
        a.check(b);
        return Residue(mulmod(a.v_, b.v_, a.p_), a.p_, 0);
    }
    Residue operator-() const { return Residue(v_ == 0 ? 0 : p_ - v_, p_, 0); }

    friend bool operator==(Residue a, Residue b) { return a.p_ == b.p_ && a.v_ == b.v_; }
    friend bool operator!=(Residue a, Residue b) { return !(a == b); }

private:
    Residue(u64 v, u64 p, int) : v_(v), p_(p) {}
    void check(Residue other) const {
        if (p_ != other.p_) throw mixed_modulus("residues carry different moduli");
    }
    u64 v_;
    u64 p_;
};

// Raw-value circle distance: min(v, p-v) for v in [0, p).
inline u64 circ_num(u64 v, u64 p) noexcept { return std::min(v, p - v); }

/// The circle norm ||x||_p = min(x, p-x)/p as an exact fraction num/p, in [0, 1/2].
struct CircleNorm {
    u64 num;
    u64 p;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(p); }
    // Squared norm num^2 / p^2; numerator fits u128 for any u64 modulus.
    u128 sq_num() const noexcept { return static_cast<u128>(num) * num; }

    friend bool operator==(CircleNorm a, CircleNorm b) { return a.num == b.num && a.p == b.p; }
};

inline CircleNorm norm_p(Residue x) {
    return CircleNorm{circ_num(x.value(), x.modulus()), x.modulus()};
}

/// e_p(x) = exp(2 pi i x / p), double precision.
inline std::complex<double> e_p(Residue x) {
    const double angle = 2.0 * M_PI * static_cast<double>(x.value()) / static_cast<double>(x.modulus());
    return {std::cos(angle), std::sin(angle)};
}

} // namespace gseq
