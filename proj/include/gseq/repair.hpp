#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "gseq/oracles.hpp"
#include "gseq/ordering.hpp"
#include "gseq/rng.hpp"

namespace gseq {

/// Disjoint transpositions (x, y), x < y, each displacing by at most
/// `window`. Applying them on top of a seed ordering is the repair move.
struct SwapPlan {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t window = 0;
};

struct RepairConfig {
    std::size_t window = 16;
    int max_restarts = 64;
    int window_growth = 2; // multiplicative; 1 disables growth
    enum class Fallback { backtrack, none };
    Fallback fallback = Fallback::backtrack;
    std::size_t backtrack_threshold = 24;
    std::uint64_t rng_seed = 0;
    enum class CandidateRule { first, random };
    CandidateRule candidate_rule = CandidateRule::first;
    bool allow_zero = false; // opt-in: pins 0 to position 1
};

struct RepairReport {
    enum class Outcome { repaired, restarted_then_repaired, backtracked, failed };
    Outcome outcome = Outcome::failed;
    int restarts_used = 0;
    SwapPlan swaps;
    std::size_t final_window = 0;
    std::vector<BadEventFlags> attempt_flags; // diagnostics per attempt
};

namespace detail {

// Post-swap prefix-collision endpoints must land inside `remaining` (b
// itself excluded). `current_bad`, when supplied, is the state's present
// endpoint set; otherwise it is recomputed.
inline bool acceptable_impl(const OrderingState& st, std::size_t b, std::size_t y,
                            const std::vector<char>& remaining_mask,
                            const std::vector<std::size_t>* current_bad) {
    const u64 delta = st.sub_mod(st.sigma(y), st.sigma(b)); // != 0, elements distinct
    const std::size_t lo = b, hi = y - 1;

    auto in_changed = [&](std::size_t pos) { return pos >= lo && pos <= hi; };
    auto allowed = [&](std::size_t e) { return e != b && e < remaining_mask.size() && remaining_mask[e]; };

    // Classes whose membership the swap touches: old and new values of the
    // shifted range.
    std::vector<u64> touched;
    touched.reserve(2 * (hi - lo + 1));
    for (std::size_t i = lo; i <= hi; ++i) {
        touched.push_back(st.prefix(i));
        touched.push_back(st.add_mod(st.prefix(i), delta));
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    auto is_touched = [&](u64 v) { return std::binary_search(touched.begin(), touched.end(), v); };

    // Endpoints of untouched classes persist verbatim.
    std::vector<std::size_t> fresh;
    if (!current_bad) {
        fresh = st.bad_endpoints();
        current_bad = &fresh;
    }
    for (std::size_t e : *current_bad) {
        if (!is_touched(st.prefix(e)) && !allowed(e)) return false;
    }

    // Recompute each touched class: unchanged members keep the value, the
    // shifted range contributes positions whose new value matches.
    std::vector<std::size_t> members;
    for (u64 v : touched) {
        members.clear();
        for (std::uint32_t pos : st.positions_with_prefix(v)) {
            if (!in_changed(pos)) members.push_back(pos);
        }
        for (std::size_t i = lo; i <= hi; ++i) {
            if (st.add_mod(st.prefix(i), delta) == v) members.push_back(i);
        }
        if (members.size() < 2) continue;
        const std::size_t keep = *std::min_element(members.begin(), members.end());
        for (std::size_t e : members) {
            if (e != keep && !allowed(e)) return false;
        }
    }
    return true;
}

} // namespace detail

/// Would transposing positions b < y leave every prefix collision endpoint
/// inside `remaining`? The state is not modified.
inline bool candidate_acceptable(const OrderingState& state, std::size_t b, std::size_t y,
                                 const std::vector<std::size_t>& remaining) {
    if (b < 1 || y <= b || y > state.size()) throw position_out_of_range("need 1 <= b < y <= n");
    std::vector<char> mask(state.size() + 1, 0);
    for (std::size_t r : remaining) {
        if (r >= 1 && r <= state.size()) mask[r] = 1;
    }
    return detail::acceptable_impl(state, b, y, mask, nullptr);
}

struct RepairOnceResult {
    std::optional<OrderingState> state; // valid on success
    SwapPlan plan;
    std::size_t no_candidate_at = 0; // bad endpoint that got stuck (failure only)
};

namespace detail {

// In-place single pass: process bad endpoints in descending order, picking
// for each a non-excluded window partner that passes the acceptance check.
// Returns the stuck position on failure (state then half-repaired).
inline std::optional<std::size_t> repair_pass(OrderingState& st, std::size_t window,
                                              RepairConfig::CandidateRule rule, Rng* rng, SwapPlan& plan) {
    const std::size_t n = st.size();
    plan.pairs.clear();
    plan.window = window;
    const std::vector<std::size_t> bad = st.bad_endpoints(); // descending
    std::vector<char> excluded(n + 1, 0);                    // all b_i, then chosen y_i
    std::vector<char> remaining(n + 1, 0);
    for (std::size_t b : bad) excluded[b] = remaining[b] = 1;

    std::vector<std::size_t> current(bad);
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < bad.size(); ++j) {
        const std::size_t b = bad[j];
        remaining[b] = 0;
        current.erase(current.begin()); // drop b; suffix stays descending
        const std::size_t yhi = std::min(n, b + window);
        order.clear();
        for (std::size_t y = b + 1; y <= yhi; ++y) {
            if (!excluded[y]) order.push_back(y);
        }
        if (rule == RepairConfig::CandidateRule::random && rng) {
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng->below(i)]);
        }
        std::size_t chosen = 0;
        std::vector<std::size_t> bad_now(current);
        bad_now.insert(bad_now.begin(), b); // current endpoint set: {b} + remaining
        for (std::size_t y : order) {
            if (acceptable_impl(st, b, y, remaining, &bad_now)) {
                chosen = y;
                break;
            }
        }
        if (chosen == 0) return b;
        st.apply_transposition(b, chosen);
        excluded[chosen] = 1;
        plan.pairs.emplace_back(b, chosen);
    }
    return std::nullopt;
}

} // namespace detail

/// One repair sweep over the given state (the proof's "one by one" step).
inline RepairOnceResult repair_once(OrderingState state, const RepairConfig& config) {
    RepairOnceResult res;
    Rng rng(derive_stream_seed(config.rng_seed, 0));
    SwapPlan plan;
    auto stuck = detail::repair_pass(state, config.window, config.candidate_rule, &rng, plan);
    if (stuck) {
        res.no_candidate_at = *stuck;
        return res;
    }
    res.plan = std::move(plan);
    res.state = std::move(state);
    return res;
}

struct ConstructResult {
    std::optional<std::vector<u64>> ordering;
    RepairReport report;
};

/// Construct a valid ordering of S: seed a uniformly random bijection, run
/// the repair pass, restart on failure, widen the window after
/// `max_restarts` tries per width, and (optionally) fall back to the exact
/// backtracking oracle for small sets. Never returns an invalid ordering.
inline ConstructResult construct_valid_ordering(PrimeModulus p, std::vector<u64> elements,
                                                const RepairConfig& config) {
    const u64 P = p.value();
    for (u64& v : elements) v %= P;
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
        throw duplicate_element("repeated element");
    if (!elements.empty() && elements.front() == 0 && !config.allow_zero)
        throw zero_element("0 in S; conjecture assumes S in Z_p \\ {0}");
    const std::size_t n = elements.size();
    if (n == 0) throw bad_size("|S| >= 1 required");

    ConstructResult out;
    const bool has_zero = elements.front() == 0;

    std::vector<std::size_t> windows;
    for (std::size_t w = std::max<std::size_t>(1, config.window);;) {
        windows.push_back(std::min(w, n));
        if (config.window_growth <= 1 || w >= n) break;
        w *= static_cast<std::size_t>(config.window_growth);
    }
    windows.erase(std::unique(windows.begin(), windows.end()), windows.end());

    std::uint64_t attempt = 0;
    for (std::size_t w : windows) {
        for (int r = 0; r < config.max_restarts; ++r, ++attempt) {
            Rng rng(derive_stream_seed(config.rng_seed, attempt));
            std::vector<u64> order(elements);
            // Fisher-Yates; with allow_zero the 0 stays pinned at position 1.
            const std::size_t fixed = has_zero ? 1 : 0;
            for (std::size_t i = fixed; i + 1 < n; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
                std::swap(order[i], order[j]);
            }
            OrderingState st(p, order, config.allow_zero);
            const std::size_t D = std::max<std::size_t>(1, w / 5); // window ~ 5D in the analysis
            out.report.attempt_flags.push_back(detect_bad_events(st, D));
            SwapPlan plan;
            auto stuck = detail::repair_pass(st, w, config.candidate_rule, &rng, plan);
            if (!stuck) {
                if (!st.is_valid()) throw std::logic_error("repair returned an invalid ordering");
                out.report.outcome = attempt == 0 ? RepairReport::Outcome::repaired
                                                  : RepairReport::Outcome::restarted_then_repaired;
                out.report.restarts_used = static_cast<int>(attempt);
                out.report.swaps = std::move(plan);
                out.report.final_window = w;
                out.ordering = st.ordering();
                return out;
            }
        }
    }

    out.report.restarts_used = static_cast<int>(attempt);
    out.report.final_window = windows.back();
    if (config.fallback == RepairConfig::Fallback::backtrack && n <= config.backtrack_threshold && !has_zero) {
        auto bf = brute_force_valid_ordering(p, elements);
        if (bf) {
            OrderingState st(p, *bf);
            if (!st.is_valid()) throw std::logic_error("oracle returned an invalid ordering");
            out.report.outcome = RepairReport::Outcome::backtracked;
            out.ordering = std::move(*bf);
            return out;
        }
    }
    out.report.outcome = RepairReport::Outcome::failed;
    return out;
}

} // namespace gseq
