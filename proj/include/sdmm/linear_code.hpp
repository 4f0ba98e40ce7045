/*
 * linear_code.hpp
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
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "sdmm/matrix.hpp"

namespace sdmm {

/// Default enumeration budget for brute-force distance/MDS computations.
inline constexpr std::uint64_t kDefaultEnumBudget = std::uint64_t(1) << 24;

/// A linear code of length N, represented by a generator matrix whose rows
/// may be dependent.  The row space is the code; the concrete generator is
/// kept because SDMM schemes care about the specific matrix, not just the
/// span.  Rank and a reduced basis are cached at construction.
class LinearCode {
  public:
    explicit LinearCode(Matrix gen) : gen_(std::move(gen)), basis_(gen_.field(), 0, gen_.cols()) {
        std::vector<std::size_t> piv;
        Matrix red = rref(gen_, &piv);
        rank_ = piv.size();
        basis_ = red.block(0, 0, rank_, gen_.cols());
    }

    const Field& field() const { return gen_.field(); }
    std::size_t length() const { return gen_.cols(); }
    std::size_t dim() const { return rank_; }

    const Matrix& generator() const { return gen_; }
    /// RREF basis of the row space (dim x N), canonical for the code.
    const Matrix& basis() const { return basis_; }

    /// Known minimum distance, when a constructor could prove one (MDS
    /// evaluation codes).  minimum_distance() consults this before
    /// enumerating.
    std::optional<std::size_t> known_distance() const { return known_distance_; }
    void set_known_distance(std::size_t d) { known_distance_ = d; }

    /// Row-space membership by reduction against the cached RREF basis.
    bool contains(const std::vector<std::uint64_t>& word) const {
        if (word.size() != length()) throw ShapeError("word length mismatch");
        const Field& f = field();
        std::vector<std::uint64_t> w = word;
        std::size_t row = 0;
        for (std::size_t col = 0; col < length() && row < rank_; ++col) {
            if (basis_.at(row, col) == 0) continue;  // not this row's pivot column
            if (w[col] != 0) {
                const std::uint64_t c = w[col];
                for (std::size_t j = col; j < length(); ++j) w[j] = f.sub(w[j], f.mul(c, basis_.at(row, j)));
            }
            ++row;
        }
        for (auto v : w) {
            if (v != 0) return false;
        }
        return true;
    }

    /// Two codes are equal when their row spaces coincide.
    bool same_code(const LinearCode& other) const {
        return field() == other.field() && length() == other.length() && basis_ == other.basis_;
    }

  private:
    Matrix gen_;
    Matrix basis_;
    std::size_t rank_ = 0;
    std::optional<std::size_t> known_distance_;
};

/// Evaluation-code description: generator row j is (nu_i * alpha_i^{e_j}).
/// This is how RS/GRS codes and the GASP degree sets are written down.
struct EvalCodeSpec {
    Field field;
    std::vector<std::uint64_t> alpha;      // pairwise distinct
    std::vector<std::uint64_t> nu;         // nonzero, same length as alpha
    std::vector<std::uint64_t> exponents;  // strictly increasing

    EvalCodeSpec(const Field& f, std::vector<std::uint64_t> points, std::vector<std::uint64_t> mult,
                 std::vector<std::uint64_t> exps)
        : field(f), alpha(std::move(points)), nu(std::move(mult)), exponents(std::move(exps)) {
        for (auto& a : alpha) a = field.canonical(a);
        for (auto& v : nu) v = field.canonical(v);
        std::set<std::uint64_t> distinct(alpha.begin(), alpha.end());
        if (distinct.size() != alpha.size()) throw InvalidPoints("evaluation points must be distinct");
        if (nu.size() != alpha.size()) throw ShapeError("one multiplier per evaluation point");
        for (auto v : nu) {
            if (v == 0) throw InvalidPoints("multipliers must be nonzero");
        }
        if (!std::is_sorted(exponents.begin(), exponents.end()) ||
            std::adjacent_find(exponents.begin(), exponents.end()) != exponents.end())
            throw InvalidParams("exponents must be strictly increasing");
    }

    std::size_t length() const { return alpha.size(); }

    Matrix generator() const {
        Matrix g(field, exponents.size(), alpha.size());
        for (std::size_t j = 0; j < exponents.size(); ++j)
            for (std::size_t i = 0; i < alpha.size(); ++i)
                g.at(j, i) = field.mul(nu[i], field.pow(alpha[i], exponents[j]));
        return g;
    }

    LinearCode code() const { return LinearCode(generator()); }
};

/// RS_k(alpha): Vandermonde generator with exponents 0..k-1.  MDS, so the
/// distance N - k + 1 is recorded on the result.
inline LinearCode rs_code(const Field& f, const std::vector<std::uint64_t>& alpha, std::size_t k) {
    if (k > alpha.size()) throw InvalidParams("RS dimension exceeds length");
    std::vector<std::uint64_t> nu(alpha.size(), f.one().value());
    std::vector<std::uint64_t> exps(k);
    for (std::size_t j = 0; j < k; ++j) exps[j] = j;
    LinearCode c = EvalCodeSpec(f, alpha, nu, exps).code();
    c.set_known_distance(alpha.size() - k + 1);
    return c;
}

/// GRS_k(alpha, nu) = nu * RS_k(alpha).
inline LinearCode grs_code(const Field& f, const std::vector<std::uint64_t>& alpha,
                           const std::vector<std::uint64_t>& nu, std::size_t k) {
    if (k > alpha.size()) throw InvalidParams("GRS dimension exceeds length");
    std::vector<std::uint64_t> exps(k);
    for (std::size_t j = 0; j < k; ++j) exps[j] = j;
    LinearCode c = EvalCodeSpec(f, alpha, nu, exps).code();
    c.set_known_distance(alpha.size() - k + 1);
    return c;
}

/// Star (Schur) product: the span of all elementwise products of codewords.
/// Bilinearity means the pairwise products of basis rows already generate it.
inline LinearCode star_product(const LinearCode& c, const LinearCode& d) {
    require_same_field(c.field(), d.field());
    if (c.length() != d.length()) throw ShapeError("star product needs equal lengths");
    const Field& f = c.field();
    const std::size_t n = c.length();
    Matrix gen(f, std::max<std::size_t>(1, c.dim() * d.dim()), n);
    std::size_t row = 0;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        for (std::size_t j = 0; j < d.dim(); ++j, ++row) {
            for (std::size_t col = 0; col < n; ++col)
                gen.at(row, col) = f.mul(c.basis().at(i, col), d.basis().at(j, col));
        }
    }
    if (row == 0) gen = Matrix(f, 1, n);  // zero factor: zero code
    return LinearCode(gen);
}

namespace detail {

inline std::uint64_t checked_pow_size(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (v > cap / base) return cap + 1;
        v *= base;
    }
    return v;
}

inline std::uint64_t binomial_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 v = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        v = v * (n - k + i) / i;
        if (v > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(v);
}

// Odometer walk over all coefficient vectors of the basis rows, updating the
// running combination by the field delta of the digit that changed.  Digits
// are canonical element values, so this is exact for GF(4) as well as GF(p).
// visit() sees every nonzero codeword exactly once and may return false to
// stop early.
template <typename Visit>
inline void enumerate_codewords(const Matrix& basis, Visit&& visit) {
    const Field& f = basis.field();
    const std::size_t k = basis.rows(), n = basis.cols();
    if (k == 0) return;
    const std::uint64_t q = f.order();
    std::vector<std::uint64_t> word(n, 0);
    std::vector<std::uint64_t> coef(k, 0);
    auto shift_digit = [&](std::size_t digit, std::uint64_t to) {
        const std::uint64_t delta = f.sub(to, coef[digit]);
        for (std::size_t col = 0; col < n; ++col)
            word[col] = f.add(word[col], f.mul(delta, basis.at(digit, col)));
        coef[digit] = to;
    };
    while (true) {
        std::size_t d = 0;
        while (d < k && coef[d] == q - 1) ++d;
        if (d == k) break;
        for (std::size_t lo = 0; lo < d; ++lo) shift_digit(lo, 0);
        shift_digit(d, coef[d] + 1);
        if (!visit(word)) return;
    }
}

}  // namespace detail

/// Exact minimum Hamming distance by exhaustive enumeration of the q^dim
/// codewords.  The zero code gets the sentinel N + 1 so that R = N - D + 1
/// stays monotone and degenerate schemes fail loudly.  rank == N short
/// circuits to 1 (the code is the full space).
inline std::size_t minimum_distance(const LinearCode& c, std::uint64_t budget = kDefaultEnumBudget) {
    if (c.known_distance()) return *c.known_distance();
    if (c.dim() == 0) return c.length() + 1;
    if (c.dim() == c.length()) return 1;
    const std::uint64_t count = detail::checked_pow_size(c.field().order(), c.dim(), budget);
    if (count > budget) throw TooLarge("q^dim exceeds the enumeration budget");
    std::size_t best = c.length() + 1;
    detail::enumerate_codewords(c.basis(), [&](const std::vector<std::uint64_t>& w) {
        std::size_t wt = 0;
        for (auto v : w) wt += (v != 0);
        if (wt < best) best = wt;
        return best > 1;  // cannot beat weight 1
    });
    return best;
}

/// True iff every dim-sized column subset of the reduced generator is
/// invertible (equivalently distance == N - dim + 1).  Uses a known distance
/// when present, otherwise enumerates minors within the budget.
inline bool is_mds(const LinearCode& c, std::uint64_t budget = kDefaultEnumBudget) {
    const std::size_t n = c.length(), k = c.dim();
    if (c.known_distance()) return *c.known_distance() == n - k + 1;
    if (k == 0 || k == n) return true;
    if (detail::binomial_capped(n, k, budget) > budget)
        throw TooLarge("N choose dim exceeds the enumeration budget");
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (rank(c.basis().select_columns(idx)) != k) return false;
        // next combination
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return true;
}

/// Column indices that some codeword touches (union of codeword supports).
inline std::vector<std::size_t> support(const LinearCode& c) {
    std::vector<std::size_t> s;
    for (std::size_t col = 0; col < c.length(); ++col) {
        for (std::size_t i = 0; i < c.dim(); ++i) {
            if (c.basis().at(i, col) != 0) {
                s.push_back(col);
                break;
            }
        }
    }
    return s;
}

inline bool full_support(const LinearCode& c) { return support(c).size() == c.length(); }

inline LinearCode dual(const LinearCode& c) {
    Matrix ns = nullspace(c.basis());
    if (ns.rows() == 0) return LinearCode(Matrix(c.field(), 1, c.length()));  // dual of full space
    return LinearCode(ns);
}

/// True iff the generator columns indexed by K span the full row space,
/// i.e. responses at K determine the whole codeword.
inline bool contains_information_set(const LinearCode& c, const std::vector<std::size_t>& k_set) {
    for (auto i : k_set) {
        if (i >= c.length()) throw ShapeError("index out of range");
    }
    return rank(c.basis().select_columns(k_set)) == c.dim();
}

/// Product Singleton bound: an upper bound on the distance of a star product,
/// max{1, n - dim_c - dim_d + 2}.
inline std::size_t product_singleton_bound(std::size_t dim_c, std::size_t dim_d, std::size_t n) {
    const std::size_t sum = dim_c + dim_d;
    return sum > n + 1 ? std::size_t(1) : n - sum + 2;
}

/// Dimension lower bound for a star product with an MDS full-support factor.
inline std::size_t star_dim_lower_bound(std::size_t dim_c, std::size_t dim_d, std::size_t n) {
    if (dim_c == 0 || dim_d == 0) return 0;
    return std::min(n, dim_c + dim_d - 1);
}

}  // namespace sdmm
