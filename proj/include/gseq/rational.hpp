#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace gseq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat make_rat(const Int& num, const Int& den) { return Rat(num, den); }

inline Int binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r *= static_cast<unsigned>(n - k + i);
        r /= static_cast<unsigned>(i);
    }
    return r;
}

/// Distance of a rational to the nearest integer, exact.
inline Rat nearest_int_dist(const Rat& y) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    Int num = numerator(y);
    Int den = denominator(y); // > 0, coprime with num
    Int fl = num >= 0 ? num / den : -((-num + den - 1) / den);
    Rat frac = y - Rat(fl); // in [0, 1)
    Rat alt = Rat(1) - frac;
    return frac <= alt ? frac : alt;
}

} // namespace gseq
