#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gseq/zp.hpp"

namespace gseq {

/// An ordering sigma of a subset of Z_p together with its prefix-sum array
/// and an index from prefix value to the positions attaining it. Positions
/// are 1-based throughout, matching interval notation [a,b].
///
/// A position b >= 2 is a "bad endpoint" iff prefix(b) equals prefix(j) for
/// some j < b, which happens iff the interval [j+1, b] sums to zero. Keeping
/// the collision index turns the O(n^2) interval definition into O(n).
class OrderingState {
public:
    OrderingState(PrimeModulus p, std::vector<u64> order, bool allow_zero = false)
        : p_(p.value()), sigma_(std::move(order)) {
        std::unordered_set<u64> seen;
        seen.reserve(sigma_.size() * 2);
        for (u64& v : sigma_) {
            v %= p_;
            if (v == 0 && !allow_zero) throw zero_element("0 in set (allow_zero unset)");
            if (!seen.insert(v).second) throw duplicate_element("repeated element " + std::to_string(v));
        }
        prefix_.resize(sigma_.size());
        u64 acc = 0;
        for (std::size_t i = 0; i < sigma_.size(); ++i) {
            acc += sigma_[i];
            if (acc >= p_) acc -= p_;
            prefix_[i] = acc;
        }
        index_.reserve(sigma_.size() * 2);
        for (std::size_t i = 0; i < prefix_.size(); ++i) {
            auto& lst = index_[prefix_[i]];
            if (!lst.empty()) ++dup_count_;
            lst.push_back(static_cast<std::uint32_t>(i + 1));
        }
    }

    std::size_t size() const noexcept { return sigma_.size(); }
    u64 modulus() const noexcept { return p_; }

    u64 sigma(std::size_t pos) const {
        check_pos(pos);
        return sigma_[pos - 1];
    }

    // prefix(0) == 0 by convention.
    u64 prefix(std::size_t pos) const {
        if (pos == 0) return 0;
        check_pos(pos);
        return prefix_[pos - 1];
    }

    const std::vector<u64>& ordering() const noexcept { return sigma_; }

    /// sigma(a) + ... + sigma(b) = prefix(b) - prefix(a-1).
    u64 interval_sum(std::size_t a, std::size_t b) const {
        if (a < 1 || a > b) throw position_out_of_range("interval [a,b] requires 1 <= a <= b <= n");
        check_pos(b);
        const u64 hi = prefix(b), lo = prefix(a - 1);
        return hi >= lo ? hi - lo : hi + p_ - lo;
    }

    /// Positions attaining a given prefix value, ascending (possibly empty).
    const std::vector<std::uint32_t>& positions_with_prefix(u64 value) const {
        static const std::vector<std::uint32_t> empty;
        auto it = index_.find(value);
        return it == index_.end() ? empty : it->second;
    }

    bool is_valid() const noexcept { return dup_count_ == 0; }

    /// Bad endpoints B(sigma), descending (the order they are repaired in).
    std::vector<std::size_t> bad_endpoints() const {
        std::vector<std::size_t> out;
        for (const auto& [value, positions] : index_) {
            for (std::size_t k = 1; k < positions.size(); ++k) out.push_back(positions[k]);
        }
        std::sort(out.begin(), out.end(), std::greater<>());
        return out;
    }

    /// Swap sigma at positions x < y; prefixes shift by sigma(y)-sigma(x)
    /// exactly on [x, y-1] and the collision index is patched in place.
    void apply_transposition(std::size_t x, std::size_t y) {
        check_pos(x);
        check_pos(y);
        if (!(x < y)) throw position_out_of_range("transposition requires x < y");
        const u64 delta = sub_mod(sigma_[y - 1], sigma_[x - 1]);
        std::swap(sigma_[x - 1], sigma_[y - 1]);
        for (std::size_t i = x; i <= y - 1; ++i) {
            const u64 oldv = prefix_[i - 1];
            const u64 newv = add_mod(oldv, delta);
            index_remove(oldv, static_cast<std::uint32_t>(i));
            index_insert(newv, static_cast<std::uint32_t>(i));
            prefix_[i - 1] = newv;
        }
    }

    u64 add_mod(u64 a, u64 b) const noexcept {
        u64 s = a + b;
        if (s >= p_) s -= p_;
        return s;
    }
    u64 sub_mod(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + p_ - b; }

private:
    void check_pos(std::size_t pos) const {
        if (pos < 1 || pos > sigma_.size()) throw position_out_of_range("position " + std::to_string(pos));
    }

    void index_remove(u64 value, std::uint32_t pos) {
        auto it = index_.find(value);
        auto& lst = it->second;
        lst.erase(std::lower_bound(lst.begin(), lst.end(), pos));
        if (!lst.empty()) --dup_count_;
        if (lst.empty()) index_.erase(it);
    }

    void index_insert(u64 value, std::uint32_t pos) {
        auto& lst = index_[value];
        if (!lst.empty()) ++dup_count_;
        lst.insert(std::upper_bound(lst.begin(), lst.end(), pos), pos);
    }

    u64 p_;
    std::vector<u64> sigma_;
    std::vector<u64> prefix_;
    std::unordered_map<u64, std::vector<std::uint32_t>> index_;
    std::size_t dup_count_ = 0; // sum over prefix-value classes of (size - 1)
};

inline OrderingState build_state(PrimeModulus p, std::vector<u64> order, bool allow_zero = false) {
    return OrderingState(p, std::move(order), allow_zero);
}

struct BadEventFlags {
    enum class Tri { clear, triggered, unchecked };
    Tri b0 = Tri::clear; // equal subset sums in a window over a bad endpoint
    bool b1 = false;     // bad endpoint within 30D of the right edge
    bool b2 = false;     // more than D bad endpoints in some width-20D window
};

/// Detectors for the bad events the analysis excludes. B0 enumerates all
/// 2^(20D+1) subset sums of each qualifying window and is skipped (reported
/// as unchecked) once 20D+1 > 24.
inline BadEventFlags detect_bad_events(const OrderingState& state, std::size_t D) {
    if (D < 1) throw bad_size("D must be >= 1");
    BadEventFlags flags;
    const std::size_t n = state.size();
    std::vector<std::size_t> bad = state.bad_endpoints(); // descending
    if (bad.empty()) return flags;

    const std::size_t edge = n > 30 * D ? n - 30 * D : 0;
    for (std::size_t b : bad) {
        if (b >= edge) {
            flags.b1 = true;
            break;
        }
    }

    std::vector<std::size_t> asc(bad.rbegin(), bad.rend());
    for (std::size_t i = 0; i + D < asc.size(); ++i) {
        if (asc[i + D] - asc[i] <= 20 * D) { // D+1 endpoints fit one window
            flags.b2 = true;
            break;
        }
    }

    const std::size_t width = 20 * D + 1;
    if (width > 24) {
        flags.b0 = BadEventFlags::Tri::unchecked;
        return flags;
    }
    const u64 p = state.modulus();
    const bool small_p = p <= (1u << 26);
    std::vector<std::uint32_t> stamp(small_p ? p : 0, 0);
    std::unordered_set<u64> seen;
    std::uint32_t epoch = 0;
    for (std::size_t b : bad) {
        if (b + 30 * D > n) continue; // B0 only quantifies over b <= n - 30D
        ++epoch;
        if (!small_p) {
            seen.clear();
            seen.reserve(std::size_t(2) << width);
        }
        auto mark = [&](u64 s) { // true once s repeats
            if (small_p) {
                if (stamp[s] == epoch) return true;
                stamp[s] = epoch;
                return false;
            }
            return !seen.insert(s).second;
        };
        // Gray-code walk over all subsets of the window {b, ..., b+20D}.
        u64 sum = 0;
        std::uint32_t mask = 0;
        mark(0); // empty subset
        bool hit = false;
        const std::uint32_t total = 1u << width;
        for (std::uint32_t g = 1; g < total && !hit; ++g) {
            const std::uint32_t bit = std::countr_zero(g);
            const u64 v = state.sigma(b + bit);
            if (mask & (1u << bit)) {
                sum = state.sub_mod(sum, v);
                mask &= ~(1u << bit);
            } else {
                sum = state.add_mod(sum, v);
                mask |= 1u << bit;
            }
            hit = mark(sum);
        }
        if (hit) {
            flags.b0 = BadEventFlags::Tri::triggered;
            break;
        }
    }
    return flags;
}

} // namespace gseq
