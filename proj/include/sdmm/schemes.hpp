/*
 * schemes.hpp
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

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sdmm/scheme.hpp"

namespace sdmm {

// ---------------------------------------------------------------------------
// Secure MatDot
// ---------------------------------------------------------------------------

/// Inner-product partitioned scheme on Vandermonde matrices.  F carries
/// exponents 0..p+X-1; G carries p-1, p-2, ..., 0 followed by p..p+X-1, so
/// the x^{p-1} coefficient of the response polynomial is the product.
/// Recovery threshold 2p + 2X - 1.
inline SdmmScheme build_matdot(const Field& field, std::size_t p, std::size_t x, std::size_t n,
                               const std::vector<std::uint64_t>& alpha) {
    if (p == 0) throw InvalidParams("p must be positive");
    const std::size_t r = 2 * p + 2 * x - 1;
    if (n < r) throw InvalidParams("secure MatDot needs N >= 2p + 2X - 1");
    if (alpha.size() != n) throw InvalidPoints("need one evaluation point per worker");
    std::set<std::uint64_t> seen;
    for (auto a : alpha) {
        const std::uint64_t v = field.canonical(a);
        if (v == 0) throw InvalidPoints("evaluation points must be nonzero");
        if (!seen.insert(v).second) throw InvalidPoints("evaluation points must be distinct");
    }

    Matrix f_gen(field, p + x, n), g_gen(field, p + x, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t a = field.canonical(alpha[i]);
        for (std::size_t j = 0; j < p + x; ++j) f_gen.at(j, i) = field.pow(a, j);
        for (std::size_t j = 0; j < p; ++j) g_gen.at(j, i) = field.pow(a, p - 1 - j);
        for (std::size_t k = 0; k < x; ++k) g_gen.at(p + k, i) = field.pow(a, p + k);
    }

    PartitionSpec part;
    part.m = part.n = 1;
    part.p = p;
    SdmmScheme scheme(field, part, x, std::move(f_gen), std::move(g_gen), "matdot");

    // C_A * C_B = RS_{min(N, 2p+2X-1)}(alpha): polynomial degrees add, and the
    // dimension matches, so the star code is MDS with a known distance.
    const std::size_t star_dim = std::min(n, r);
    if (scheme.star_code().dim() != star_dim)
        throw ConstructionFailed("MatDot star code has unexpected dimension");
    scheme.set_star_distance(n - star_dim + 1);
    std::vector<std::uint64_t> points(alpha);
    for (auto& v : points) v = field.canonical(v);
    scheme.set_star_spec(StarCodeSpec{points, std::vector<std::uint64_t>(n, field.one().value()), star_dim});
    scheme.set_eval_points(points);
    return scheme;
}

/// MatDot with the canonical points alpha_i = i.
inline SdmmScheme build_matdot(const Field& field, std::size_t p, std::size_t x, std::size_t n) {
    if (n >= field.order()) throw InvalidParams("field too small for N distinct nonzero points");
    std::vector<std::uint64_t> alpha(n);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = i + 1;
    return build_matdot(field, p, x, n, alpha);
}

// ---------------------------------------------------------------------------
// GASP (3 x 3 outer product, X = 2)
// ---------------------------------------------------------------------------

inline const std::vector<std::uint64_t>& gasp33x2_a_exponents() {
    static const std::vector<std::uint64_t> e = {0, 1, 2, 9, 12};
    return e;
}
inline const std::vector<std::uint64_t>& gasp33x2_b_exponents() {
    static const std::vector<std::uint64_t> e = {0, 3, 6, 9, 10};
    return e;
}
/// Sums of the two exponent sets; 18 distinct values, so N = 18.
inline const std::vector<std::uint64_t>& gasp33x2_product_exponents() {
    static const std::vector<std::uint64_t> e = {0, 1, 2,  3,  4,  5,  6,  7,  8,
                                                 9, 10, 11, 12, 15, 18, 19, 21, 22};
    return e;
}

/// The worked GASP instance: outer-product partitioning with m = n = 3 and
/// X = 2, N = 18 workers.  Evaluation points are drawn from the seed and
/// redrawn until the 18 x 18 product matrix H is invertible and both security
/// subcodes are MDS (the Schwartz-Zippel strategy: over a large field a
/// random draw works almost surely).
inline SdmmScheme build_gasp33x2(const Field& field, std::uint64_t seed, std::size_t max_attempts = 1000) {
    constexpr std::size_t kN = 18;
    if (field.order() <= kN) throw InvalidParams("field too small for 18 distinct nonzero points");
    const auto& ea = gasp33x2_a_exponents();
    const auto& eb = gasp33x2_b_exponents();
    const auto& eta = gasp33x2_product_exponents();

    Rng rng(seed);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::set<std::uint64_t> points;
        while (points.size() < kN) points.insert(rng.nonzero_field_element(field));
        std::vector<std::uint64_t> alpha(points.begin(), points.end());

        Matrix h(field, kN, kN);
        for (std::size_t j = 0; j < kN; ++j)
            for (std::size_t i = 0; i < kN; ++i) h.at(j, i) = field.pow(alpha[i], eta[j]);
        if (rank(h) != kN) continue;

        Matrix f_gen(field, 5, kN), g_gen(field, 5, kN);
        for (std::size_t i = 0; i < kN; ++i) {
            for (std::size_t j = 0; j < 5; ++j) {
                f_gen.at(j, i) = field.pow(alpha[i], ea[j]);
                g_gen.at(j, i) = field.pow(alpha[i], eb[j]);
            }
        }
        LinearCode sec_a(f_gen.block(3, 0, 2, kN)), sec_b(g_gen.block(3, 0, 2, kN));
        if (sec_a.dim() != 2 || sec_b.dim() != 2) continue;
        if (!is_mds(sec_a) || !is_mds(sec_b)) continue;

        PartitionSpec part;
        part.m = part.n = 3;
        part.p = 1;
        SdmmScheme scheme(field, part, 2, std::move(f_gen), std::move(g_gen), "gasp33x2");
        scheme.set_eval_points(alpha);
        // dim C_A * C_B = 18 = N (H invertible), so D = 1 and R = 18.
        return scheme;
    }
    throw ConstructionFailed("no suitable GASP evaluation points found within the attempt budget");
}

// ---------------------------------------------------------------------------
// DFT scheme
// ---------------------------------------------------------------------------

/// Inner-product scheme evaluated on the N-th roots of unity, N = p + 2X.
/// The star code is the full space, decoding is the average of all responses,
/// and no stragglers are tolerated (R = N).
inline SdmmScheme build_dft(const Field& field, std::size_t p, std::size_t x) {
    if (p == 0) throw InvalidParams("p must be positive");
    const std::size_t n = p + 2 * x;
    const FieldElement zeta = primitive_root_of_unity(field, n);  // throws NoRootOfUnity

    std::vector<std::uint64_t> alpha(n);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = field.pow(zeta.value(), i);

    Matrix f_gen(field, p + x, n), g_gen(field, p + x, n);
    const std::uint64_t zinv = field.inv(zeta.value());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p + x; ++j) f_gen.at(j, i) = field.pow(alpha[i], j);
        // g exponents: -(j'-1) for j' in [p], then -(p+X+k'-1) for k' in [X]
        for (std::size_t j = 0; j < p; ++j) g_gen.at(j, i) = field.pow(field.pow(zinv, i), j);
        for (std::size_t k = 0; k < x; ++k)
            g_gen.at(p + k, i) = field.pow(field.pow(zinv, i), p + x + k);
    }

    PartitionSpec part;
    part.m = part.n = 1;
    part.p = p;
    SdmmScheme scheme(field, part, x, std::move(f_gen), std::move(g_gen), "dft");
    if (scheme.star_code().dim() != n) throw ConstructionFailed("DFT star code is not the full space");
    scheme.set_eval_points(alpha);
    return scheme;
}

// ---------------------------------------------------------------------------
// Hermitian-curve scheme over GF(4)
// ---------------------------------------------------------------------------

/// Affine rational points of y^2 + y = x^3 over GF(4), excluding the zero of
/// y at (0, 0), in lexicographic (x, y) order of the canonical
/// representatives.  These are the seven evaluation places.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> hermitian_places() {
    const Field f = Field::gf4();
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pts;
    for (std::uint64_t xv = 0; xv < 4; ++xv) {
        for (std::uint64_t yv = 0; yv < 4; ++yv) {
            const std::uint64_t lhs = f.add(f.mul(yv, yv), yv);
            const std::uint64_t rhs = f.mul(xv, f.mul(xv, xv));
            if (lhs != rhs) continue;
            if (xv == 0 && yv == 0) continue;  // P_1, the zero of y, is excluded
            pts.emplace_back(xv, yv);
        }
    }
    return pts;  // lexicographic by construction
}

/// The Example-7 style fixed construction: N = 7, p = 2, X = 1 over GF(4),
/// generator rows are the evaluations of {1, x, y} at the seven places.  The
/// star code has dimension 6 and distance 1, so R = 7: no straggler slack,
/// and the pipeline can only detect errors, not correct them.
inline SdmmScheme build_hermitian() {
    const Field f = Field::gf4();
    const auto places = hermitian_places();
    const std::size_t n = places.size();  // 7

    Matrix gen(f, 3, n);
    for (std::size_t i = 0; i < n; ++i) {
        gen.at(0, i) = 1;
        gen.at(1, i) = places[i].first;
        gen.at(2, i) = places[i].second;
    }
    PartitionSpec part;
    part.m = part.n = 1;
    part.p = 2;
    SdmmScheme scheme(f, part, 1, gen, gen, "hermitian");
    return scheme;
}

// ---------------------------------------------------------------------------
// Randomized secure MatDot
// ---------------------------------------------------------------------------

/// Per-worker invertible diagonal masks U_i and V_i.  Workers see
/// U_i^{-1} A_i and B_i V_i^{-1}; unmasking turns an injected error Z_i into
/// U_i Z_i V_i, which is uniform whenever Z_i is.
struct DiagonalMask {
    std::vector<std::vector<std::uint64_t>> u;  // one diagonal per worker, length t/m
    std::vector<std::vector<std::uint64_t>> v;  // one diagonal per worker, length r/n
};

/// Draw a fresh mask.  Masks must not be reused across encodings: the
/// security argument needs the workers to never learn U_i, V_i.
inline DiagonalMask draw_mask(const Field& field, std::size_t workers, std::size_t block_rows,
                              std::size_t block_cols, Rng& rng) {
    DiagonalMask mask;
    mask.u.resize(workers);
    mask.v.resize(workers);
    for (std::size_t i = 0; i < workers; ++i) {
        mask.u[i].resize(block_rows);
        for (auto& d : mask.u[i]) d = rng.nonzero_field_element(field);
        mask.v[i].resize(block_cols);
        for (auto& d : mask.v[i]) d = rng.nonzero_field_element(field);
    }
    return mask;
}

namespace detail {

inline Matrix diag_scale_rows(const Field& f, const std::vector<std::uint64_t>& diag, const Matrix& m,
                              bool invert) {
    if (diag.size() != m.rows()) throw ShapeError("diagonal size mismatch");
    Matrix out = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const std::uint64_t c = invert ? f.inv(diag[i]) : diag[i];
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = f.mul(c, m.at(i, j));
    }
    return out;
}

inline Matrix diag_scale_cols(const Field& f, const Matrix& m, const std::vector<std::uint64_t>& diag,
                              bool invert) {
    if (diag.size() != m.cols()) throw ShapeError("diagonal size mismatch");
    Matrix out = m;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const std::uint64_t c = invert ? f.inv(diag[j]) : diag[j];
        for (std::size_t i = 0; i < m.rows(); ++i) out.at(i, j) = f.mul(m.at(i, j), c);
    }
    return out;
}

}  // namespace detail

/// Worker i receives U_i^{-1} A_i and B_i V_i^{-1}.
inline ShareSet mask_shares(const ShareSet& shares, const DiagonalMask& mask, const Field& field) {
    ShareSet out;
    out.seed = shares.seed;
    out.tilde_a.reserve(shares.workers());
    out.tilde_b.reserve(shares.workers());
    for (std::size_t i = 0; i < shares.workers(); ++i) {
        out.tilde_a.push_back(detail::diag_scale_rows(field, mask.u[i], shares.tilde_a[i], true));
        out.tilde_b.push_back(detail::diag_scale_cols(field, shares.tilde_b[i], mask.v[i], true));
    }
    return out;
}

/// Multiply response i by U_i on the left and V_i on the right.  Honest
/// responses come back bit-identical to the unmasked scheme; an injected
/// error Z_i becomes U_i Z_i V_i.
inline ResponseSet unmask_responses(const ResponseSet& responses, const DiagonalMask& mask,
                                    const Field& field) {
    ResponseSet out = responses;
    for (std::size_t i = 0; i < responses.workers(); ++i) {
        if (!out.responses[i]) continue;
        Matrix m = detail::diag_scale_rows(field, mask.u[i], *out.responses[i], false);
        out.responses[i] = detail::diag_scale_cols(field, m, mask.v[i], false);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Recipe strings
// ---------------------------------------------------------------------------

enum class SchemeFamily { matdot, gasp33x2, dft, hermitian, randomized_matdot };

/// Parsed form of a recipe string such as "matdot:p=2,X=1,N=6" or
/// "gasp33x2:seed=7" or "dft:p=4,X=2" or "hermitian" or
/// "rmatdot:p=2,X=1,N=8".
struct SchemeRecipe {
    SchemeFamily family = SchemeFamily::matdot;
    std::size_t p = 1, x = 1, n = 0;
    std::uint64_t seed = 0;
    std::string text;  // the original string, echoed into reports
};

inline SchemeRecipe parse_recipe(const std::string& text) {
    SchemeRecipe r;
    r.text = text;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "matdot")
        r.family = SchemeFamily::matdot;
    else if (head == "gasp33x2")
        r.family = SchemeFamily::gasp33x2;
    else if (head == "dft")
        r.family = SchemeFamily::dft;
    else if (head == "hermitian")
        r.family = SchemeFamily::hermitian;
    else if (head == "rmatdot")
        r.family = SchemeFamily::randomized_matdot;
    else
        throw InvalidParams("unknown scheme family '" + head + "'");

    std::map<std::string, std::uint64_t> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw InvalidParams("recipe parameter '" + item + "' needs key=value");
            try {
                kv[item.substr(0, eq)] = std::stoull(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw InvalidParams("recipe parameter '" + item + "' is not an integer");
            }
        }
    }
    auto take = [&](const char* key, std::uint64_t fallback) {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::uint64_t v = it->second;
        kv.erase(it);
        return v;
    };
    r.p = take("p", 1);
    r.x = take("X", 1);
    r.n = take("N", 0);
    r.seed = take("seed", 0);
    if (!kv.empty()) throw InvalidParams("unknown recipe parameter '" + kv.begin()->first + "'");

    switch (r.family) {
        case SchemeFamily::matdot:
        case SchemeFamily::randomized_matdot:
            if (r.n == 0) throw InvalidParams("matdot recipes need N");
            break;
        default: break;
    }
    return r;
}

/// Default field per family when the CLI does not pin one: 2^61 - 1 for the
/// GASP search (it wants room for Schwartz-Zippel), GF(4) for the Hermitian
/// construction, and 65537 otherwise.
inline Field default_field(SchemeFamily family) {
    switch (family) {
        case SchemeFamily::gasp33x2: return Field::prime((std::uint64_t(1) << 61) - 1);
        case SchemeFamily::hermitian: return Field::gf4();
        default: return Field::prime(65537);
    }
}

inline SdmmScheme build_from_recipe(const SchemeRecipe& r, const std::optional<Field>& field = {}) {
    const Field f = field ? *field : default_field(r.family);
    switch (r.family) {
        case SchemeFamily::matdot: return build_matdot(f, r.p, r.x, r.n);
        case SchemeFamily::randomized_matdot: {
            SdmmScheme s = build_matdot(f, r.p, r.x, r.n);
            s.set_family("rmatdot");  // same codes; the simulator adds the diagonal masks
            return s;
        }
        case SchemeFamily::gasp33x2: return build_gasp33x2(f, r.seed);
        case SchemeFamily::dft: return build_dft(f, r.p, r.x);
        case SchemeFamily::hermitian:
            if (field && *field != Field::gf4()) throw InvalidParams("the hermitian scheme is fixed over GF(4)");
            return build_hermitian();
    }
    throw InvalidParams("unreachable recipe family");
}

}  // namespace sdmm
