#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "gseq/anticonc.hpp"
#include "gseq/rational.hpp"
#include "gseq/rng.hpp"
#include "gseq/sampling.hpp"
#include "gseq/zp.hpp"

namespace gseq {

/// psi(chi) = sum_i |S_i|^-2 sum_{x,x' in S_i} ||chi x - chi x'||_p^2 for an
/// equitable partition, exact.
inline Rat psi(const EquitablePartition& partition, PrimeModulus p, u64 chi) {
    const u64 P = p.value();
    chi %= P;
    Rat total = 0;
    const Int p_sq = Int(P) * P;
    for (const auto& part : partition.parts) {
        u128 num = 0; // sum over ordered pairs of circ^2, denominator p^2
        for (u64 x : part) {
            const u64 cx = mulmod(chi, x % P, P);
            for (u64 xp : part) {
                const u64 cxp = mulmod(chi, xp % P, P);
                const u64 d = cx >= cxp ? cx - cxp : cx + P - cxp;
                const u64 c = circ_num(d, P);
                num += static_cast<u128>(c) * c;
            }
        }
        const Int sz = Int(static_cast<unsigned long long>(part.size()));
        total += Rat(Int(num), p_sq * sz * sz);
    }
    return total;
}

/// Unnormalized partition pair sum: sum_i sum_{x,x' in S_i} circ(chi(x-x'))^2
/// (denominator p^2 implied). Feeds the psi lower-bound check.
inline u128 partition_pair_sq_num(const EquitablePartition& partition, PrimeModulus p, u64 chi) {
    const u64 P = p.value();
    chi %= P;
    u128 num = 0;
    for (const auto& part : partition.parts) {
        for (u64 x : part) {
            const u64 cx = mulmod(chi, x % P, P);
            for (u64 xp : part) {
                const u64 cxp = mulmod(chi, xp % P, P);
                const u64 d = cx >= cxp ? cx - cxp : cx + P - cxp;
                const u64 c = circ_num(d, P);
                num += static_cast<u128>(c) * c;
            }
        }
    }
    return num;
}

struct EstPsiReport {
    u64 t = 0;
    std::size_t checked = 0; // |D_t \ B_{2000t}|
    std::vector<u64> violations;
    bool holds = true;
};

struct BtBoundReport {
    u64 t = 0;
    bool hypothesis_met = false;      // t <= m/2000
    bool outside_proof_regime = true; // |S| < 10^7 always at desk scale
    u64 B_size = 0;
    double bound = 0.0;
    bool holds = false;
};

struct QLowerReport {
    u64 t = 0;
    u64 q_size = 0;
    std::size_t n = 0;
    bool holds = false; // 10 |Q_{t,10t/m}| >= 9 n
};

struct QDualReport {
    u64 t = 0;
    u64 q_size = 0;
    u64 B_size = 0;
    u64 p = 0;
    bool holds = false; // 4 |Q_{t,1/200}| |B_t| <= 5 p
};

struct SumsetReport {
    u64 t = 0;
    int k = 0;
    u64 q_size = 0;
    u64 kq_size = 0;
    bool holds = false; // kQ_{t,delta} subset of Q_{t,k^2 delta}
};

/// Partition-free spread functional Psi and the level-set machinery of the
/// Fourier-analytic proof, all membership decided in exact integer
/// arithmetic (squared circle norms are integers over p^2).
class FourierLab {
public:
    FourierLab(PrimeModulus p, std::vector<u64> S, u64 m) : p_(p.value()), pm_(p), m_(m) {
        if (m_ < 1) throw bad_size("m >= 1 required");
        for (u64& v : S) v %= p_;
        std::sort(S.begin(), S.end());
        if (std::adjacent_find(S.begin(), S.end()) != S.end()) throw duplicate_element("repeated element");
        if (S.empty()) throw bad_size("|S| >= 1 required");
        s_ = std::move(S);
        if (p_ > 100000 || s_.size() > 1000)
            throw budget_exceeded("level-set budget: p <= 1e5 and |S| <= 1e3");
    }

    u64 p() const noexcept { return p_; }
    u64 m() const noexcept { return m_; }
    std::size_t n() const noexcept { return s_.size(); }
    const std::vector<u64>& set() const noexcept { return s_; }

    /// Psi(chi) = (m/|S|^2) sum_{x,x'} ||chi x - chi x'||^2, exact.
    Rat Psi(u64 chi) const {
        const Int num = Int(psi_num(chi % p_)) * m_;
        const Int den = Int(p_) * p_ * Int(static_cast<unsigned long long>(n())) * n();
        return Rat(num, den);
    }

    /// Psi(chi) <= t, exact: m * psi_num <= t * n^2 * p^2.
    bool Psi_le(u64 chi, u64 t) const {
        const u128 lhs = static_cast<u128>(psi_num(chi % p_)) * m_;
        const u128 rhs = static_cast<u128>(t) * (static_cast<u64>(n()) * n()) * (p_ * p_);
        return lhs <= rhs;
    }

    std::vector<u64> B_set(u64 t) const {
        std::vector<u64> out;
        for (u64 chi = 0; chi < p_; ++chi) {
            if (Psi_le(chi, t)) out.push_back(chi);
        }
        return out;
    }

    /// Threshold 8 sqrt(t/m) covers the whole circle once m <= 256 t.
    bool degenerate_threshold(u64 t) const noexcept { return m_ <= 256 * t; }

    /// chi in D_t: some length-(2r+1) window with m r^2 <= 64 t p^2 holds at
    /// least ceil(3|S|/4) points of chi S.
    bool in_D(u64 chi, u64 t) const {
        chi %= p_;
        if (chi == 0) return false;
        ensure_windows();
        const u128 lhs = static_cast<u128>(m_) * r_min_[chi] * r_min_[chi];
        const u128 rhs = static_cast<u128>(64) * t * p_ * p_;
        return lhs <= rhs;
    }

    /// Canonical center y_chi: minimal-span window at the smallest
    /// qualifying t, ties broken by the smallest left endpoint.
    u64 center(u64 chi) const {
        ensure_windows();
        return y_[chi % p_];
    }

    bool in_J(u64 chi, u64 t, u64 x) const {
        chi %= p_;
        const u64 y = center(chi);
        const u64 cx = mulmod(chi, x % p_, p_);
        const u64 d = cx >= y ? cx - y : cx + p_ - y;
        const u64 c = circ_num(d, p_);
        return static_cast<u128>(m_) * c * c <= static_cast<u128>(256) * t * p_ * p_;
    }

    /// Q_{t,delta} membership mask over Z_p:
    /// sum_{chi in B_t} ||chi x||^2 < delta |B_t|.
    std::vector<char> Q_mask(u64 t, const Rat& delta) const {
        const std::vector<u64> B = B_set(t);
        if (static_cast<double>(B.size()) * static_cast<double>(p_) > 2e9)
            throw budget_exceeded("Q scan too large");
        std::vector<u64> acc(p_, 0); // sum of circ^2 numerators, den p^2
        for (u64 chi : B) {
            u64 w = 0;
            for (u64 x = 0; x < p_; ++x) {
                const u64 c = circ_num(w, p_);
                acc[x] += c * c;
                w += chi;
                if (w >= p_) w -= p_;
            }
        }
        using boost::multiprecision::numerator;
        using boost::multiprecision::denominator;
        const Int dn = numerator(delta), dd = denominator(delta);
        // acc[x]/p^2 < delta |B|  <=>  dd * acc[x] < dn * |B| * p^2
        const Int rhs = dn * Int(static_cast<unsigned long long>(B.size())) * Int(p_) * p_;
        std::vector<char> mask(p_, 0);
        for (u64 x = 0; x < p_; ++x) {
            if (Int(acc[x]) * dd < rhs) mask[x] = 1;
        }
        return mask;
    }

    u64 Q_size(u64 t, const Rat& delta) const {
        const auto mask = Q_mask(t, delta);
        u64 c = 0;
        for (char b : mask) c += b;
        return c;
    }

    /// Lemma guard: for chi in D_t \ B_{2000t},
    /// sum_{x in S \ J_{chi,t}} ||chi x - y_chi||^2 >= (200 t / m) |S|.
    EstPsiReport check_est_Psi(u64 t) const {
        EstPsiReport rep;
        rep.t = t;
        for (u64 chi = 1; chi < p_; ++chi) {
            if (!in_D(chi, t) || Psi_le(chi, 2000 * t)) continue;
            ++rep.checked;
            const u64 y = center(chi);
            u128 outside = 0; // sum of circ^2 over S \ J
            for (u64 x : s_) {
                const u64 cx = mulmod(chi, x, p_);
                const u64 d = cx >= y ? cx - y : cx + p_ - y;
                const u64 c = circ_num(d, p_);
                if (static_cast<u128>(m_) * c * c > static_cast<u128>(256) * t * p_ * p_)
                    outside += static_cast<u128>(c) * c;
            }
            // m * outside >= 200 t n p^2, exact
            const bool ok = static_cast<u128>(m_) * outside >=
                            static_cast<u128>(200) * t * n() * p_ * p_;
            if (!ok) rep.violations.push_back(chi);
        }
        rep.holds = rep.violations.empty();
        return rep;
    }

    /// Lemma 3.4 shape: |B_t| <= 1 + 200 p sqrt(t) / (|S| sqrt(m)).
    BtBoundReport check_B_t_bound(u64 t) const {
        BtBoundReport rep;
        rep.t = t;
        rep.hypothesis_met = static_cast<u128>(2000) * t <= m_;
        rep.outside_proof_regime = n() < 10000000;
        rep.B_size = B_set(t).size();
        rep.bound = 1.0 + 200.0 * static_cast<double>(p_) * std::sqrt(static_cast<double>(t)) /
                              (static_cast<double>(n()) * std::sqrt(static_cast<double>(m_)));
        rep.holds = static_cast<double>(rep.B_size) <= rep.bound;
        return rep;
    }

    /// Lemma 3.5: |Q_{t,10t/m}| >= (9/10)|S|, unconditional.
    QLowerReport check_lower_bound_Q(u64 t) const {
        QLowerReport rep;
        rep.t = t;
        rep.n = n();
        rep.q_size = Q_size(t, Rat(Int(10) * t, Int(m_)));
        rep.holds = 10 * rep.q_size >= 9 * static_cast<u64>(n());
        return rep;
    }

    /// Lemma 3.6: |Q_{t,1/200}| <= (5/4) p / |B_t|, unconditional.
    QDualReport check_dual_est(u64 t) const {
        QDualReport rep;
        rep.t = t;
        rep.p = p_;
        rep.B_size = B_set(t).size();
        rep.q_size = Q_size(t, Rat(1, 200));
        rep.holds = static_cast<u128>(4) * rep.q_size * rep.B_size <= static_cast<u128>(5) * p_;
        return rep;
    }

    /// Lemma 3.7: k Q_{t,delta} subset of Q_{t, k^2 delta}, unconditional.
    SumsetReport check_sumset(u64 t, const Rat& delta, int k) const {
        if (k < 1 || k > 3 || p_ > 10000) throw budget_exceeded("sumset check capped at k <= 3, p <= 1e4");
        SumsetReport rep;
        rep.t = t;
        rep.k = k;
        const auto q = Q_mask(t, delta);
        const auto target = Q_mask(t, delta * k * k);
        std::vector<char> fold(q);
        rep.q_size = 0;
        for (char b : q) rep.q_size += b;
        for (int i = 1; i < k; ++i) fold = cyclic_sumset(fold, q);
        rep.kq_size = 0;
        bool ok = true;
        for (u64 z = 0; z < p_; ++z) {
            if (fold[z]) {
                ++rep.kq_size;
                if (!target[z]) ok = false;
            }
        }
        rep.holds = ok;
        return rep;
    }

private:
    std::vector<char> cyclic_sumset(const std::vector<char>& a, const std::vector<char>& b) const {
        std::vector<char> out(p_, 0);
        for (u64 x = 0; x < p_; ++x) {
            if (!a[x]) continue;
            for (u64 yv = 0; yv < p_; ++yv) {
                if (b[yv]) {
                    u64 s = x + yv;
                    if (s >= p_) s -= p_;
                    out[s] = 1;
                }
            }
        }
        return out;
    }

    // Psi numerator sum_d cnt[d] circ(chi d)^2 via the difference multiset.
    u64 psi_num(u64 chi) const {
        ensure_diffs();
        u64 acc = 0;
        for (const auto& [d, cnt] : diffs_) {
            const u64 c = circ_num(mulmod(chi, d, p_), p_);
            acc += cnt * c * c;
        }
        return acc;
    }

    void ensure_diffs() const {
        if (!diffs_.empty() || n() == 0) return;
        std::vector<u64> cnt(p_, 0);
        for (u64 x : s_) {
            for (u64 xp : s_) {
                const u64 d = x >= xp ? x - xp : x + p_ - xp;
                ++cnt[d];
            }
        }
        for (u64 d = 1; d < p_; ++d) {
            if (cnt[d]) diffs_.emplace_back(d, cnt[d]);
        }
        if (diffs_.empty()) diffs_.emplace_back(0, 0); // singleton S: no nonzero diffs
    }

    // Minimal circular window per chi: smallest span holding ceil(3n/4)
    // points of chi S, its canonical center, and the implied radius.
    void ensure_windows() const {
        if (!r_min_.empty()) return;
        r_min_.assign(p_, 0);
        y_.assign(p_, 0);
        const std::size_t need = (3 * n() + 3) / 4;
        std::vector<u64> pts(n());
        for (u64 chi = 1; chi < p_; ++chi) {
            for (std::size_t i = 0; i < n(); ++i) pts[i] = mulmod(chi, s_[i], p_);
            std::sort(pts.begin(), pts.end());
            u64 best_span = p_; // span = last - first distance, < p
            u64 best_left = 0;
            for (std::size_t i = 0; i < n(); ++i) {
                const u64 a = pts[i];
                const u64 b = pts[(i + need - 1) % n()];
                const u64 span = b >= a ? b - a : b + p_ - a;
                if (span < best_span || (span == best_span && a < best_left)) {
                    best_span = span;
                    best_left = a;
                }
            }
            r_min_[chi] = (best_span + 1) / 2;
            y_[chi] = (best_left + best_span / 2) % p_;
        }
    }

    u64 p_;
    PrimeModulus pm_;
    u64 m_;
    std::vector<u64> s_;
    mutable std::vector<std::pair<u64, u64>> diffs_;
    mutable std::vector<u64> r_min_;
    mutable std::vector<u64> y_;
};

/// Level sets for a batch of thresholds. A-sets need a partition (psi is
/// partition-dependent); B/D/Q depend only on S and m.
struct LevelSets {
    u64 p = 0;
    std::vector<u64> a_thresholds; // 0, 1, 2, 4, ..., <= m
    std::vector<std::vector<u64>> A;
    std::vector<u64> t_list;
    std::vector<std::vector<u64>> B;
    std::vector<std::vector<u64>> D;
    std::vector<u64> centers; // y_chi per chi
    std::vector<Rat> delta_list;
    // Q[ti][di] = elements of Q_{t, delta}
    std::vector<std::vector<std::vector<u64>>> Q;
    std::vector<char> degenerate; // per t: threshold spans the whole circle
};

inline LevelSets level_sets(PrimeModulus p, const std::vector<u64>& S, u64 m, const std::vector<u64>& t_list,
                            const std::vector<Rat>& delta_list,
                            const std::optional<EquitablePartition>& partition = std::nullopt) {
    FourierLab lab(p, S, m);
    LevelSets out;
    out.p = lab.p();
    out.t_list = t_list;
    out.delta_list = delta_list;

    if (partition) {
        for (u64 t = 0;; t = t == 0 ? 1 : 2 * t) {
            out.a_thresholds.push_back(t);
            if (t >= m) break;
        }
        out.A.assign(out.a_thresholds.size(), {});
        for (u64 chi = 0; chi < lab.p(); ++chi) {
            const Rat v = psi(*partition, p, chi);
            std::size_t bucket = 0;
            for (std::size_t i = 1; i < out.a_thresholds.size(); ++i) {
                const u64 t = out.a_thresholds[i];
                if (v >= Rat(t) && v < Rat(2 * t)) {
                    bucket = i;
                    break;
                }
            }
            out.A[bucket].push_back(chi);
        }
    }

    out.B.reserve(t_list.size());
    out.D.reserve(t_list.size());
    out.Q.reserve(t_list.size());
    for (u64 t : t_list) {
        out.B.push_back(lab.B_set(t));
        std::vector<u64> d;
        for (u64 chi = 1; chi < lab.p(); ++chi) {
            if (lab.in_D(chi, t)) d.push_back(chi);
        }
        out.D.push_back(std::move(d));
        out.degenerate.push_back(lab.degenerate_threshold(t) ? 1 : 0);
        std::vector<std::vector<u64>> qs;
        qs.reserve(delta_list.size());
        for (const Rat& delta : delta_list) {
            const auto mask = lab.Q_mask(t, delta);
            std::vector<u64> q;
            for (u64 x = 0; x < lab.p(); ++x) {
                if (mask[x]) q.push_back(x);
            }
            qs.push_back(std::move(q));
        }
        out.Q.push_back(std::move(qs));
    }
    out.centers.assign(lab.p(), 0);
    for (u64 chi = 1; chi < lab.p(); ++chi) out.centers[chi] = lab.center(chi);
    return out;
}

/// Empirical frequency of psi(chi) < 2t over random equitable partitions
/// (the Lemmas 3.1/3.3 event, desk-scale diagnostic only).
inline EstimateRecord mc_partition_psi(PrimeModulus p, const std::vector<u64>& S, std::size_t m, u64 chi,
                                       u64 t, u64 trials, u64 seed) {
    if (trials < 1) throw bad_size("trials >= 1 required");
    u64 hits = 0;
    const Rat threshold = Rat(2) * t;
    for (u64 i = 0; i < trials; ++i) {
        Rng rng(derive_stream_seed(seed, i));
        const auto part = sample_equitable_partition(S, m, rng);
        if (psi(part, p, chi) < threshold) ++hits;
    }
    return make_estimate(p.value(), S.size(), {m}, hits, trials, seed);
}

} // namespace gseq
