/*
 * decoding.hpp
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "sdmm/matrix.hpp"
#include "sdmm/rng.hpp"
#include "sdmm/scheme.hpp"

namespace sdmm {

// ---------------------------------------------------------------------------
// GRS decoding spec
// ---------------------------------------------------------------------------

/// A GRS_k(alpha, nu) code in the form the decoders need.  The evaluation
/// points must be nonzero: the error locator is written as prod(1 - alpha_i x)
/// and locates position i at the root alpha_i^{-1}.
struct GrsSpec {
    Field field;
    std::vector<std::uint64_t> alpha;
    std::vector<std::uint64_t> nu;
    std::size_t k;

    GrsSpec(const Field& f, std::vector<std::uint64_t> points, std::vector<std::uint64_t> mult,
            std::size_t dim)
        : field(f), alpha(std::move(points)), nu(std::move(mult)), k(dim) {
        std::set<std::uint64_t> seen;
        for (auto& a : alpha) {
            a = field.canonical(a);
            if (a == 0) throw InvalidPoints("decoder evaluation points must be nonzero");
            if (!seen.insert(a).second) throw InvalidPoints("evaluation points must be distinct");
        }
        if (nu.size() != alpha.size()) throw ShapeError("one multiplier per point");
        for (auto& v : nu) {
            v = field.canonical(v);
            if (v == 0) throw InvalidPoints("multipliers must be nonzero");
        }
        if (k > alpha.size()) throw InvalidParams("dimension exceeds length");
    }

    std::size_t length() const { return alpha.size(); }
};

inline GrsSpec grs_spec_of(const SdmmScheme& scheme) {
    const auto& s = scheme.star_spec();
    if (!s) throw InvalidParams("scheme's star code has no RS/GRS description");
    return GrsSpec(scheme.field(), s->alpha, s->nu, s->k);
}

namespace detail {

/// Positions surviving after removing the (sorted-unique-validated) erasures.
inline std::vector<std::size_t> keep_positions(std::size_t n, const std::vector<std::size_t>& erasures) {
    std::vector<bool> erased(n, false);
    for (auto e : erasures) {
        if (e >= n) throw ShapeError("erasure index out of range");
        erased[e] = true;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i) {
        if (!erased[i]) keep.push_back(i);
    }
    return keep;
}

/// Leading Lagrange coefficients u_i = prod_{j != i} (alpha_i - alpha_j)^{-1}
/// for the given point subset.  These are the dual multipliers of RS on that
/// subset: sum_i u_i h(alpha_i) = 0 for every polynomial of degree < n-1.
inline std::vector<std::uint64_t> dual_multipliers(const Field& f, const std::vector<std::uint64_t>& alpha) {
    const std::size_t n = alpha.size();
    std::vector<std::uint64_t> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t prod = f.one().value();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            prod = f.mul(prod, f.sub(alpha[i], alpha[j]));
        }
        u[i] = f.inv(prod);
    }
    return u;
}

/// Interpolate the degree < k polynomial through (alpha_i, y_i); coefficients
/// low to high.
inline std::vector<std::uint64_t> interpolate(const Field& f, const std::vector<std::uint64_t>& alpha,
                                              const std::vector<std::uint64_t>& y, std::size_t k) {
    Matrix v(f, alpha.size(), k);
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) v.at(i, j) = f.pow(alpha[i], j);
    Matrix rhs(f, alpha.size(), 1);
    for (std::size_t i = 0; i < alpha.size(); ++i) rhs.at(i, 0) = y[i];
    auto sol = solve(v, rhs);
    if (!sol) throw std::logic_error("interpolation system inconsistent");  // caller passes exactly k points
    std::vector<std::uint64_t> coef(k);
    for (std::size_t j = 0; j < k; ++j) coef[j] = sol->at(j, 0);
    return coef;
}

inline std::uint64_t eval_poly(const Field& f, const std::vector<std::uint64_t>& coef, std::uint64_t x) {
    std::uint64_t acc = 0;
    for (std::size_t j = coef.size(); j-- > 0;) acc = f.add(f.mul(acc, x), coef[j]);
    return acc;
}

/// Berlekamp-Massey: minimal LFSR (connection polynomial, constant term 1)
/// generating the sequence.  Returns the locator coefficients sigma_0 = 1,
/// sigma_1, ..., sigma_L.
inline std::vector<std::uint64_t> berlekamp_massey(const Field& f, const std::vector<std::uint64_t>& s) {
    std::vector<std::uint64_t> c{f.one().value()}, b{f.one().value()};
    std::size_t l = 0, m = 1;
    std::uint64_t bb = f.one().value();
    for (std::size_t n = 0; n < s.size(); ++n) {
        std::uint64_t d = s[n];
        for (std::size_t i = 1; i <= l && i < c.size(); ++i) d = f.add(d, f.mul(c[i], s[n - i]));
        if (d == 0) {
            ++m;
        } else if (2 * l <= n) {
            std::vector<std::uint64_t> t = c;
            const std::uint64_t coef = f.div(d, bb);
            if (c.size() < b.size() + m) c.resize(b.size() + m, 0);
            for (std::size_t i = 0; i < b.size(); ++i) c[i + m] = f.sub(c[i + m], f.mul(coef, b[i]));
            l = n + 1 - l;
            b = std::move(t);
            bb = d;
            m = 1;
        } else {
            const std::uint64_t coef = f.div(d, bb);
            if (c.size() < b.size() + m) c.resize(b.size() + m, 0);
            for (std::size_t i = 0; i < b.size(); ++i) c[i + m] = f.sub(c[i + m], f.mul(coef, b[i]));
            ++m;
        }
    }
    c.resize(l + 1, 0);
    return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Syndromes
// ---------------------------------------------------------------------------

/// Syndromes of a word against the erasure-punctured code.  Puncturing a GRS
/// code is again GRS, so a zero syndrome is exact membership.  The word is
/// full length; entries at erased positions are ignored.
inline std::vector<std::uint64_t> rs_syndrome(const std::vector<std::uint64_t>& word, const GrsSpec& spec,
                                              const std::vector<std::size_t>& erasures = {}) {
    if (word.size() != spec.length()) throw ShapeError("word length mismatch");
    const Field& f = spec.field;
    const auto keep = detail::keep_positions(spec.length(), erasures);
    if (keep.size() < spec.k) throw InsufficientData("fewer surviving positions than code dimension");
    std::vector<std::uint64_t> alpha_p(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) alpha_p[i] = spec.alpha[keep[i]];
    const auto u = detail::dual_multipliers(f, alpha_p);
    const std::size_t ns = keep.size() - spec.k;
    std::vector<std::uint64_t> syn(ns, 0);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        // weight w_i = u_i / nu_i; syndromes S_j = sum_i r_i w_i alpha_i^j
        const std::uint64_t w = f.div(u[i], spec.nu[keep[i]]);
        std::uint64_t term = f.mul(f.canonical(word[keep[i]]), w);
        for (std::size_t j = 0; j < ns; ++j) {
            syn[j] = f.add(syn[j], term);
            term = f.mul(term, alpha_p[i]);
        }
    }
    return syn;
}

// ---------------------------------------------------------------------------
// Bounded-distance decoding
// ---------------------------------------------------------------------------

struct DecodeOutcome {
    enum class Verdict { corrected, failure };
    Verdict verdict = Verdict::failure;
    std::vector<std::size_t> locations;              // error positions, original indexing
    std::vector<std::vector<std::uint64_t>> rows;    // corrected codewords, erasures filled

    bool corrected() const { return verdict == Verdict::corrected; }
};

namespace detail {

/// Common tail of both decoders: treat located positions + erasures as gone,
/// re-interpolate each row from k clean positions and verify against every
/// clean position.  A verification miss turns a would-be miscorrection into a
/// detected failure.
inline std::optional<std::vector<std::vector<std::uint64_t>>> erase_and_rebuild(
    const GrsSpec& spec, const std::vector<const std::vector<std::uint64_t>*>& words,
    const std::vector<std::size_t>& clean) {
    const Field& f = spec.field;
    if (clean.size() < spec.k) return std::nullopt;
    std::vector<std::uint64_t> pts(spec.k);
    for (std::size_t i = 0; i < spec.k; ++i) pts[i] = spec.alpha[clean[i]];
    std::vector<std::vector<std::uint64_t>> rebuilt;
    rebuilt.reserve(words.size());
    for (const auto* wp : words) {
        const auto& w = *wp;
        std::vector<std::uint64_t> y(spec.k);
        for (std::size_t i = 0; i < spec.k; ++i)
            y[i] = f.div(f.canonical(w[clean[i]]), spec.nu[clean[i]]);
        const auto coef = interpolate(f, pts, y, spec.k);
        for (auto i : clean) {
            if (f.mul(spec.nu[i], eval_poly(f, coef, spec.alpha[i])) != f.canonical(w[i]))
                return std::nullopt;
        }
        std::vector<std::uint64_t> full(spec.length());
        for (std::size_t i = 0; i < spec.length(); ++i)
            full[i] = f.mul(spec.nu[i], eval_poly(f, coef, spec.alpha[i]));
        rebuilt.push_back(std::move(full));
    }
    return rebuilt;
}

/// Roots of the locator among the surviving positions.
inline std::vector<std::size_t> locator_roots(const GrsSpec& spec, const std::vector<std::uint64_t>& sigma,
                                              const std::vector<std::size_t>& keep) {
    const Field& f = spec.field;
    std::vector<std::size_t> found;
    for (auto i : keep) {
        if (eval_poly(f, sigma, f.inv(spec.alpha[i])) == 0) found.push_back(i);
    }
    return found;
}

}  // namespace detail

/// Classic bounded-distance decoding with erasures: puncture, Berlekamp-
/// Massey on the syndromes, locate, then erasure-fill and verify.  Corrects E
/// errors and S erasures whenever 2E + S <= D - 1.  Failure is a verdict, not
/// an exception.
inline DecodeOutcome bd_decode(const std::vector<std::uint64_t>& word, const GrsSpec& spec,
                               const std::vector<std::size_t>& erasures = {}) {
    DecodeOutcome out;
    const auto keep = detail::keep_positions(spec.length(), erasures);
    if (keep.size() < spec.k) return out;  // not even erasure decoding is possible

    std::vector<std::uint64_t> syn;
    try {
        syn = rs_syndrome(word, spec, erasures);
    } catch (const InsufficientData&) {
        return out;
    }

    std::vector<std::size_t> located;
    if (!std::all_of(syn.begin(), syn.end(), [](std::uint64_t v) { return v == 0; })) {
        const auto sigma = detail::berlekamp_massey(spec.field, syn);
        const std::size_t t = sigma.size() - 1;
        if (t == 0 || 2 * t > syn.size()) return out;  // beyond the unique-decoding radius
        located = detail::locator_roots(spec, sigma, keep);
        if (located.size() != t) return out;
    }

    std::vector<std::size_t> clean;
    std::set<std::size_t> bad(located.begin(), located.end());
    for (auto i : keep) {
        if (!bad.count(i)) clean.push_back(i);
    }
    auto rebuilt = detail::erase_and_rebuild(spec, {&word}, clean);
    if (!rebuilt) return out;
    out.verdict = DecodeOutcome::Verdict::corrected;
    out.locations = std::move(located);
    out.rows = std::move(*rebuilt);
    return out;
}

// ---------------------------------------------------------------------------
// Collaborative decoding of interleaved words
// ---------------------------------------------------------------------------

/// A stack of codewords sharing one error support (the selected response
/// entry-vectors) plus the known erasure positions.
struct InterleavedWord {
    std::vector<std::vector<std::uint64_t>> rows;
    std::vector<std::size_t> erasures;
};

/// Joint decoding of a homogeneous interleaved GRS word: one common error
/// locator is solved from the stacked syndrome recurrences of all rows, which
/// locates up to l/(l+1) * (D'-1) errors, beyond the single-word radius.
/// Corrected output is always rebuilt and re-verified, so a wrong locator
/// surfaces as a failure verdict rather than a silent miscorrection.
inline DecodeOutcome collaborative_decode(const InterleavedWord& iw, const GrsSpec& spec) {
    DecodeOutcome out;
    if (iw.rows.empty()) return out;
    const Field& f = spec.field;
    const auto keep = detail::keep_positions(spec.length(), iw.erasures);
    if (keep.size() < spec.k) return out;
    const std::size_t ns = keep.size() - spec.k;

    std::vector<std::vector<std::uint64_t>> syn;
    syn.reserve(iw.rows.size());
    for (const auto& row : iw.rows) syn.push_back(rs_syndrome(row, spec, iw.erasures));

    std::vector<const std::vector<std::uint64_t>*> row_ptrs;
    for (const auto& row : iw.rows) row_ptrs.push_back(&row);

    const bool all_zero = std::all_of(syn.begin(), syn.end(), [](const auto& s) {
        return std::all_of(s.begin(), s.end(), [](std::uint64_t v) { return v == 0; });
    });
    if (all_zero) {
        auto rebuilt = detail::erase_and_rebuild(spec, row_ptrs, keep);
        if (!rebuilt) return out;  // unreachable: zero syndromes mean membership
        out.verdict = DecodeOutcome::Verdict::corrected;
        out.rows = std::move(*rebuilt);
        return out;
    }

    const std::size_t ell = iw.rows.size();
    const std::size_t t_max = ell * ns / (ell + 1);
    for (std::size_t t = 1; t <= t_max; ++t) {
        const std::size_t eq_per_row = ns - t;
        if (eq_per_row == 0) break;
        // Locator Lambda(x) = prod (1 - alpha_i x), Lambda_0 = 1 (same
        // normalization Berlekamp-Massey uses, roots at alpha_i^{-1}).  Every
        // row obeys  sum_{h=1}^{t} Lambda_h S_{j-h} = -S_j  for j >= t.
        Matrix a(f, ell * eq_per_row, t);
        Matrix b(f, ell * eq_per_row, 1);
        for (std::size_t m = 0; m < ell; ++m) {
            for (std::size_t j = t; j < ns; ++j) {
                const std::size_t row = m * eq_per_row + (j - t);
                for (std::size_t h = 1; h <= t; ++h) a.at(row, h - 1) = syn[m][j - h];
                b.at(row, 0) = f.neg(syn[m][j]);
            }
        }
        auto sol = solve(a, b);
        if (!sol) continue;
        std::vector<std::uint64_t> sigma(t + 1);
        sigma[0] = f.one().value();
        for (std::size_t h = 1; h <= t; ++h) sigma[h] = sol->at(h - 1, 0);

        auto located = detail::locator_roots(spec, sigma, keep);
        if (located.size() != t) continue;
        std::vector<std::size_t> clean;
        std::set<std::size_t> bad(located.begin(), located.end());
        for (auto i : keep) {
            if (!bad.count(i)) clean.push_back(i);
        }
        auto rebuilt = detail::erase_and_rebuild(spec, row_ptrs, clean);
        if (!rebuilt) continue;
        out.verdict = DecodeOutcome::Verdict::corrected;
        out.locations = std::move(located);
        out.rows = std::move(*rebuilt);
        return out;
    }
    return out;
}

// ---------------------------------------------------------------------------
// The four-step pipeline
// ---------------------------------------------------------------------------

enum class PipelineMode { interleaved, independent };

struct PipelineOutcome {
    ResponseSet cleaned;                // every worker filled in; decode from [N]
    std::vector<std::size_t> located;   // workers flagged Byzantine
    std::size_t screened_dirty = 0;     // entry-vectors with nonzero syndrome
    bool changed = false;               // false: input returned untouched
};

namespace detail {

inline std::vector<std::uint64_t> entry_vector(const ResponseSet& responses, std::size_t row,
                                               std::size_t col) {
    std::vector<std::uint64_t> v(responses.workers(), 0);
    for (std::size_t i = 0; i < responses.workers(); ++i) {
        if (responses.responses[i]) v[i] = responses.responses[i]->at(row, col);
    }
    return v;
}

}  // namespace detail

/// Screen all response entry-vectors by syndrome, collaboratively locate the
/// common error support from the first ell dirty ones (row-major entry
/// order), then treat located workers as erasures and rebuild every entry.
/// In independent mode each dirty entry-vector is bounded-distance decoded on
/// its own instead (the N = R + S + 2E baseline).
inline PipelineOutcome byzantine_pipeline(const ResponseSet& responses, const SdmmScheme& scheme,
                                          std::size_t ell, PipelineMode mode = PipelineMode::interleaved) {
    if (ell == 0) throw InvalidParams("interleaving order must be positive");
    PipelineOutcome out;
    out.cleaned = responses;
    const auto stragglers = responses.straggler_indices();
    const auto ok = responses.ok_indices();
    if (ok.empty()) throw PipelineFailure("all workers straggled", 0, 0);

    const Matrix& first = *responses.responses[ok.front()];
    const std::size_t bt = first.rows(), br = first.cols();

    if (ok.size() < scheme.star_code().dim())
        throw PipelineFailure("fewer responding workers than the star-code dimension", 0, 0);
    const bool has_spec = scheme.star_spec().has_value();
    std::optional<GrsSpec> spec;
    if (has_spec) spec = grs_spec_of(scheme);
    // Without an RS/GRS star code only detection works; screen by punctured
    // row-space membership instead of syndromes (same predicate).
    std::optional<LinearCode> punctured;
    if (!has_spec) punctured = LinearCode(scheme.star_code().basis().select_columns(ok));

    // step 1: syndrome screen, row-major over matrix entries
    std::vector<std::pair<std::size_t, std::size_t>> dirty;
    for (std::size_t a = 0; a < bt; ++a) {
        for (std::size_t c = 0; c < br; ++c) {
            const auto vec = detail::entry_vector(responses, a, c);
            bool clean;
            if (has_spec) {
                const auto syn = rs_syndrome(vec, *spec, stragglers);
                clean = std::all_of(syn.begin(), syn.end(), [](std::uint64_t v) { return v == 0; });
            } else {
                std::vector<std::uint64_t> pv(ok.size());
                for (std::size_t i = 0; i < ok.size(); ++i) pv[i] = vec[ok[i]];
                clean = punctured->contains(pv);
            }
            if (!clean) dirty.emplace_back(a, c);
        }
    }
    out.screened_dirty = dirty.size();
    if (dirty.empty()) return out;  // nothing to do; stragglers stay erased
    if (!has_spec)
        throw PipelineFailure("errors detected but the star code has no RS/GRS decoder", dirty.size(), 0);

    // step 2 + 3: locate the common error support
    std::set<std::size_t> located;
    if (mode == PipelineMode::interleaved) {
        InterleavedWord iw;
        iw.erasures = stragglers;
        for (std::size_t j = 0; j < std::min(ell, dirty.size()); ++j)
            iw.rows.push_back(detail::entry_vector(responses, dirty[j].first, dirty[j].second));
        const auto outcome = collaborative_decode(iw, *spec);
        if (!outcome.corrected())
            throw PipelineFailure("collaborative locator failed", dirty.size(), iw.rows.size());
        located.insert(outcome.locations.begin(), outcome.locations.end());
    } else {
        for (const auto& [a, c] : dirty) {
            const auto vec = detail::entry_vector(responses, a, c);
            const auto outcome = bd_decode(vec, *spec, stragglers);
            if (!outcome.corrected())
                throw PipelineFailure("independent BD decode failed", dirty.size(), 1);
            located.insert(outcome.locations.begin(), outcome.locations.end());
        }
    }

    // step 4: erase located workers and rebuild every entry from the rest
    std::vector<std::size_t> all_erased = stragglers;
    all_erased.insert(all_erased.end(), located.begin(), located.end());
    std::sort(all_erased.begin(), all_erased.end());
    const auto keep = detail::keep_positions(spec->length(), all_erased);
    if (keep.size() < spec->k)
        throw PipelineFailure("too few clean workers after locating errors", dirty.size(), located.size());

    std::vector<Matrix> rebuilt(scheme.workers(), Matrix(scheme.field(), bt, br));
    for (std::size_t a = 0; a < bt; ++a) {
        for (std::size_t c = 0; c < br; ++c) {
            const auto vec = detail::entry_vector(responses, a, c);
            auto rows = detail::erase_and_rebuild(*spec, {&vec}, keep);
            if (!rows)
                throw PipelineFailure("post-location verification failed (errors outside the located set)",
                                      dirty.size(), located.size());
            for (std::size_t i = 0; i < scheme.workers(); ++i) rebuilt[i].at(a, c) = (*rows)[0][i];
        }
    }
    ResponseSet cleaned(scheme.workers());
    for (std::size_t i = 0; i < scheme.workers(); ++i) cleaned.responses[i] = std::move(rebuilt[i]);
    out.cleaned = std::move(cleaned);
    out.located.assign(located.begin(), located.end());
    out.changed = true;
    return out;
}

// ---------------------------------------------------------------------------
// Failure probability and Freivalds detection
// ---------------------------------------------------------------------------

/// Upper bound on the collaborative-decoding failure probability for up to
/// t uniform errors at interleaving order ell (t_max = ell/(ell+1) * (D-1)):
///   ((q^ell - q^{-1}) / (q^ell - 1))^t * q^{-(ell+1)(t_max - t)} / (q - 1).
inline long double failure_bound_at(std::uint64_t q, std::size_t ell, std::size_t big_d, std::size_t t) {
    if (ell == 0 || big_d < 2) throw InvalidParams("need ell >= 1 and D >= 2");
    const long double qd = static_cast<long double>(q);
    const long double qell = std::pow(qd, static_cast<long double>(ell));
    const long double ratio = (qell - 1.0L / qd) / (qell - 1.0L);
    // -(ell+1)(t_max - t) with t_max = ell(D-1)/(ell+1), kept as an exact integer
    const long long expo = static_cast<long long>((ell + 1) * t) - static_cast<long long>(ell * (big_d - 1));
    return std::pow(ratio, static_cast<long double>(t)) * std::pow(qd, static_cast<long double>(expo)) /
           (qd - 1.0L);
}

/// The worst case t = D - 2 of the bound above; simplifies to
///   ((q^ell - q^{-1}) / (q^ell - 1))^{D-2} * q^{D-2-ell} / (q - 1).
inline long double failure_bound(std::uint64_t q, std::size_t ell, std::size_t big_d) {
    return failure_bound_at(q, ell, big_d, big_d - 2);
}

/// Probabilistic verification of a claimed product: k random probes x with
/// A(Bx) compared against Cx.  A nonzero error survives one probe with
/// probability at most 1/q, so a false pass happens with probability at most
/// q^{-k}.
inline bool freivalds_check(const Matrix& tilde_a, const Matrix& tilde_b, const Matrix& claimed,
                            std::size_t trials, Rng& rng) {
    require_same_field(tilde_a.field(), tilde_b.field());
    require_same_field(tilde_a.field(), claimed.field());
    if (tilde_a.cols() != tilde_b.rows() || claimed.rows() != tilde_a.rows() ||
        claimed.cols() != tilde_b.cols())
        throw ShapeError("freivalds_check shape mismatch");
    const Field& f = tilde_a.field();
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Matrix x(f, tilde_b.cols(), 1);
        for (std::size_t i = 0; i < x.rows(); ++i) x.at(i, 0) = rng.field_element(f);
        if (tilde_a * (tilde_b * x) != claimed * x) return false;
    }
    return true;
}

}  // namespace sdmm
