/*
 * audit.hpp
 *
 * Copyright 2026 the sdmm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sdmm/scheme.hpp"

namespace sdmm {

/// Exhaustive security audit configuration.  Blocks are restricted to 1 x 1
/// scalars: per-entry independence makes larger blocks redundant for the
/// mutual information while exploding the state space.
struct AuditConfig {
    std::size_t collusion = 1;                   // |X'|, the probed collusion size
    std::uint64_t guard = 1'000'000'000ULL;      // enumeration size cap
};

/// Audit result for a single collusion set.
struct CollusionRow {
    std::vector<std::size_t> workers;
    double mi_bits = 0.0;    // numeric value, forced to exactly 0.0 when mi_zero
    bool mi_zero = false;    // exact integer-arithmetic statement, not a tolerance
    bool shares_uniform = false;
    bool sec_full_rank = false;  // F^{>mp}_X and G^{>np}_X both have rank |X'|
};

struct LeakageReport {
    std::vector<CollusionRow> rows;  // one per collusion set, lexicographic
    double max_mi_bits = 0.0;
    bool all_zero = true;
};

namespace detail {

inline void next_combination_or_end(std::vector<std::size_t>& idx, std::size_t n, bool& done) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) {
        done = true;
        return;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
}

}  // namespace detail

/// Exact leakage audit: enumerate every assignment of the scalar blocks of A
/// and B and the padding matrices, tabulate the joint distribution of
/// ((A, B), shares at X') and decide I((A,B); shares) = 0 by the integer
/// factorization test  n_uv * q^{#A+#B} == n_v  (probabilities are counts
/// over a common denominator, so zero means exactly zero).
inline LeakageReport leakage_report(const SdmmScheme& scheme, const AuditConfig& cfg) {
    const Field& f = scheme.field();
    const std::uint64_t q = f.order();
    const std::size_t mp = scheme.partition().mp(), np = scheme.partition().np();
    const std::size_t x = scheme.security_param();
    const std::size_t n = scheme.workers();
    const std::size_t xprime = cfg.collusion;
    if (xprime == 0 || xprime > n) throw InvalidParams("collusion size must be in [1, N]");

    const std::size_t vars = mp + np + 2 * x;
    // total enumeration size q^vars, guarded
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < vars; ++i) {
        if (total > cfg.guard / q) throw TooLarge("audit enumeration exceeds the guard");
        total *= q;
    }
    std::uint64_t input_states = 1;  // q^{mp+np}
    for (std::size_t i = 0; i < mp + np; ++i) input_states *= q;
    std::uint64_t share_states = 1;  // q^{2 X'}
    for (std::size_t i = 0; i < 2 * xprime; ++i) {
        if (share_states > cfg.guard / q) throw TooLarge("share state space exceeds the guard");
        share_states *= q;
    }
    if (input_states > cfg.guard / share_states) throw TooLarge("joint table exceeds the guard");

    LeakageReport report;
    std::vector<std::size_t> xset(xprime);
    for (std::size_t i = 0; i < xprime; ++i) xset[i] = i;
    bool done = false;
    while (!done) {
        CollusionRow row;
        row.workers = xset;

        std::vector<std::uint64_t> joint(input_states * share_states, 0);
        std::vector<std::uint64_t> digits(vars, 0);
        // walk all assignments (a_1..a_mp, b_1..b_np, r_1..r_x, s_1..s_x)
        bool exhausted = false;
        while (!exhausted) {
            std::uint64_t u = 0;
            for (std::size_t i = 0; i < mp + np; ++i) u = u * q + digits[i];
            std::uint64_t v = 0;
            for (auto w : xset) {
                std::uint64_t share_a = 0, share_b = 0;
                for (std::size_t i = 0; i < mp + x; ++i) {
                    const std::uint64_t coef = i < mp ? digits[i] : digits[mp + np + (i - mp)];
                    share_a = f.add(share_a, f.mul(coef, scheme.f().at(i, w)));
                }
                for (std::size_t i = 0; i < np + x; ++i) {
                    const std::uint64_t coef = i < np ? digits[mp + i] : digits[mp + np + x + (i - np)];
                    share_b = f.add(share_b, f.mul(coef, scheme.g().at(i, w)));
                }
                v = (v * q + share_a) * q + share_b;
            }
            ++joint[u * share_states + v];

            std::size_t d = vars;
            while (d > 0 && digits[d - 1] == q - 1) digits[--d] = 0;
            if (d == 0)
                exhausted = true;
            else
                ++digits[d - 1];
        }

        std::vector<std::uint64_t> share_marginal(share_states, 0);
        for (std::uint64_t u = 0; u < input_states; ++u)
            for (std::uint64_t v = 0; v < share_states; ++v) share_marginal[v] += joint[u * share_states + v];

        row.mi_zero = true;
        double mi = 0.0;
        const double total_d = static_cast<double>(total);
        for (std::uint64_t u = 0; u < input_states; ++u) {
            for (std::uint64_t v = 0; v < share_states; ++v) {
                const std::uint64_t c = joint[u * share_states + v];
                if (c == 0) continue;
                if (c * input_states != share_marginal[v]) row.mi_zero = false;
                // n_u = total / input_states for every u (padding is free)
                mi += (static_cast<double>(c) / total_d) *
                      std::log2(static_cast<double>(c) * static_cast<double>(input_states) /
                                static_cast<double>(share_marginal[v]));
            }
        }
        row.mi_bits = row.mi_zero ? 0.0 : mi;

        row.shares_uniform = true;
        for (auto v : share_marginal) {
            if (v != total / share_states) {
                row.shares_uniform = false;
                break;
            }
        }

        // R'_X is uniform iff the padding generator columns at X have full
        // column rank; impossible once |X'| > X.
        row.sec_full_rank = x > 0 &&
                            rank(scheme.f().block(mp, 0, x, n).select_columns(xset)) == xprime &&
                            rank(scheme.g().block(np, 0, x, n).select_columns(xset)) == xprime;

        report.max_mi_bits = std::max(report.max_mi_bits, row.mi_bits);
        report.all_zero = report.all_zero && row.mi_zero;
        report.rows.push_back(std::move(row));
        detail::next_combination_or_end(xset, n, done);
    }
    return report;
}

/// Largest mutual information over all collusion sets of the configured
/// size, in bits; exactly 0.0 when every set leaks nothing.
inline double mutual_information_exhaustive(const SdmmScheme& scheme, const AuditConfig& cfg) {
    return leakage_report(scheme, cfg).max_mi_bits;
}

}  // namespace sdmm
