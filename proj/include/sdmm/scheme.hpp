/*
 * scheme.hpp
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
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdmm/linear_code.hpp"
#include "sdmm/matrix.hpp"
#include "sdmm/rng.hpp"

namespace sdmm {

// ---------------------------------------------------------------------------
// Partitioning
// ---------------------------------------------------------------------------

/// Grid-partition parameters.  A is split into an m x p grid, B into a p x n
/// grid.  IPP is m = n = 1 and OPP is p = 1.  Matrix dimensions (t, s, r) are
/// bound at encode time; zero means "not fixed yet".
struct PartitionSpec {
    std::size_t m = 1, n = 1, p = 1;
    std::size_t t = 0, s = 0, r = 0;

    std::size_t mp() const { return m * p; }
    std::size_t np() const { return n * p; }

    void validate_dims(std::size_t t_, std::size_t s_, std::size_t r_) const {
        if (m == 0 || n == 0 || p == 0) throw InvalidParams("partition parameters must be positive");
        if (t_ == 0 || s_ == 0 || r_ == 0) throw ShapeError("matrix dimensions must be positive");
        if (t_ % m != 0) throw ShapeError("m must divide the row count of A");
        if (s_ % p != 0) throw ShapeError("p must divide the inner dimension");
        if (r_ % n != 0) throw ShapeError("n must divide the column count of B");
    }

    PartitionSpec bound(std::size_t t_, std::size_t s_, std::size_t r_) const {
        validate_dims(t_, s_, r_);
        PartitionSpec out = *this;
        out.t = t_;
        out.s = s_;
        out.r = r_;
        return out;
    }
};

/// Blocks of A in the fixed enumeration order: row-major over (i, j), so
/// A_{ij} lands at index i*p + j.  Each block is (t/m) x (s/p).
inline std::vector<Matrix> partition_a(const Matrix& a, const PartitionSpec& spec) {
    if (a.rows() % spec.m != 0) throw ShapeError("m must divide the row count of A");
    if (a.cols() % spec.p != 0) throw ShapeError("p must divide the column count of A");
    const std::size_t bt = a.rows() / spec.m, bs = a.cols() / spec.p;
    std::vector<Matrix> blocks;
    blocks.reserve(spec.mp());
    for (std::size_t i = 0; i < spec.m; ++i)
        for (std::size_t j = 0; j < spec.p; ++j) blocks.push_back(a.block(i * bt, j * bs, bt, bs));
    return blocks;
}

/// Blocks of B in the fixed enumeration order: row-major over (j, k), so
/// B_{jk} lands at index j*n + k.  Each block is (s/p) x (r/n).
inline std::vector<Matrix> partition_b(const Matrix& b, const PartitionSpec& spec) {
    if (b.rows() % spec.p != 0) throw ShapeError("p must divide the row count of B");
    if (b.cols() % spec.n != 0) throw ShapeError("n must divide the column count of B");
    const std::size_t bs = b.rows() / spec.p, br = b.cols() / spec.n;
    std::vector<Matrix> blocks;
    blocks.reserve(spec.np());
    for (std::size_t j = 0; j < spec.p; ++j)
        for (std::size_t k = 0; k < spec.n; ++k) blocks.push_back(b.block(j * bs, k * br, bs, br));
    return blocks;
}

// ---------------------------------------------------------------------------
// Worker I/O containers
// ---------------------------------------------------------------------------

/// Encoded shares: tilde_a[i], tilde_b[i] go to worker i.  Viewed entrywise
/// across workers, the shares are codewords of C_A and C_B.
struct ShareSet {
    std::vector<Matrix> tilde_a;
    std::vector<Matrix> tilde_b;
    std::uint64_t seed = 0;  // RNG seed that produced the padding matrices

    std::size_t workers() const { return tilde_a.size(); }
};

enum class WorkerStatus { ok, straggler };

namespace sim {
struct GroundTruthAccess;  // the simulator's keyhole into ResponseSet
}

/// Per-worker responses.  A straggler has status != ok and no matrix.  The
/// simulator's ground-truth Byzantine set rides along but is private: decoders
/// work from syndromes only.
class ResponseSet {
  public:
    std::vector<std::optional<Matrix>> responses;
    std::vector<WorkerStatus> status;

    ResponseSet() = default;
    explicit ResponseSet(std::size_t n) : responses(n), status(n, WorkerStatus::ok) {}

    std::size_t workers() const { return responses.size(); }

    std::vector<std::size_t> ok_indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < status.size(); ++i) {
            if (status[i] == WorkerStatus::ok) idx.push_back(i);
        }
        return idx;
    }

    std::vector<std::size_t> straggler_indices() const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < status.size(); ++i) {
            if (status[i] != WorkerStatus::ok) idx.push_back(i);
        }
        return idx;
    }

  private:
    friend struct sim::GroundTruthAccess;
    std::vector<std::size_t> truth_byzantine_;
};

namespace sim {
/// Only the fault injector and report code read or write the ground truth.
struct GroundTruthAccess {
    static void set(ResponseSet& rs, std::vector<std::size_t> byz) { rs.truth_byzantine_ = std::move(byz); }
    static const std::vector<std::size_t>& get(const ResponseSet& rs) { return rs.truth_byzantine_; }
};
}  // namespace sim

// ---------------------------------------------------------------------------
// Scheme
// ---------------------------------------------------------------------------

/// RS/GRS description of a scheme's star-product code, when it has one; this
/// is what the error-correction pipeline keys on.
struct StarCodeSpec {
    std::vector<std::uint64_t> alpha;  // distinct, nonzero
    std::vector<std::uint64_t> nu;     // nonzero
    std::size_t k = 0;                 // dimension
};

/// A linear SDMM scheme: the generator matrices F and G together with the
/// partition grid, the security parameter X, and everything derived from
/// them (the codes, their enc/sec decomposition, and the decoding
/// coefficients Lambda).  Immutable after construction.
class SdmmScheme {
  public:
    SdmmScheme(const Field& field, PartitionSpec part, std::size_t x, Matrix f_gen, Matrix g_gen,
               std::string family = "custom")
        : field_(field),
          part_(part),
          x_(x),
          f_(std::move(f_gen)),
          g_(std::move(g_gen)),
          family_(std::move(family)),
          c_a_(f_),
          c_b_(g_),
          c_a_enc_(slice_rows(f_, 0, part.mp())),
          c_a_sec_(slice_rows(f_, part.mp(), x)),
          c_b_enc_(slice_rows(g_, 0, part.np())),
          c_b_sec_(slice_rows(g_, part.np(), x)),
          c_star_(star_product(c_a_, c_b_)) {
        if (f_.rows() != part_.mp() + x_) throw ShapeError("F must have mp + X rows");
        if (g_.rows() != part_.np() + x_) throw ShapeError("G must have np + X rows");
        if (f_.cols() != g_.cols()) throw ShapeError("F and G must agree on the worker count");
        n_ = f_.cols();
        lambda_ = derive_lambda_full();
    }

    const Field& field() const { return field_; }
    std::size_t workers() const { return n_; }
    std::size_t security_param() const { return x_; }
    const PartitionSpec& partition() const { return part_; }
    const Matrix& f() const { return f_; }
    const Matrix& g() const { return g_; }
    const std::string& family() const { return family_; }
    void set_family(std::string name) { family_ = std::move(name); }

    const LinearCode& code_a() const { return c_a_; }
    const LinearCode& code_b() const { return c_b_; }
    const LinearCode& star_code() const { return c_star_; }
    const LinearCode& code_a_enc() const { return c_a_enc_; }
    const LinearCode& code_a_sec() const { return c_a_sec_; }
    const LinearCode& code_b_enc() const { return c_b_enc_; }
    const LinearCode& code_b_sec() const { return c_b_sec_; }

    /// Decoding coefficients for the full worker set: AB = sum Lambda_i (x) C_i.
    const std::vector<Matrix>& lambda() const { return lambda_; }

    const std::optional<StarCodeSpec>& star_spec() const { return star_spec_; }
    void set_star_spec(StarCodeSpec spec) { star_spec_ = std::move(spec); }

    /// Record a distance proven by the family constructor (e.g. an MDS star
    /// code); minimum_distance() then skips enumeration.
    void set_star_distance(std::size_t d) { c_star_.set_known_distance(d); }

    const std::optional<std::vector<std::uint64_t>>& eval_points() const { return alpha_; }
    void set_eval_points(std::vector<std::uint64_t> a) { alpha_ = std::move(a); }

    /// Solve for the decoding coefficients restricted to the workers in K.
    /// Requires K to contain an information set of the star code; the strict
    /// recovery-threshold semantics reject smaller K even if a lucky fixed
    /// subset would happen to suffice.
    std::vector<Matrix> lambda_for(const std::vector<std::size_t>& k_set) const {
        if (!contains_information_set(c_star_, k_set))
            throw InsufficientResponses("worker subset lacks an information set of the star code");
        Matrix mono = monomial_matrix().select_columns(k_set);
        auto sol = solve(mono, rhs_matrix());
        if (!sol) throw NotDecodable("restricted decoding system is inconsistent");  // unreachable given the check
        std::vector<Matrix> out(n_, Matrix(field_, part_.m, part_.n));
        for (std::size_t pos = 0; pos < k_set.size(); ++pos) {
            for (std::size_t a = 0; a < part_.m; ++a)
                for (std::size_t b = 0; b < part_.n; ++b)
                    out[k_set[pos]].at(a, b) = sol->at(pos, a * part_.n + b);
        }
        return out;
    }

  private:
    static Matrix slice_rows(const Matrix& m, std::size_t row0, std::size_t count) {
        if (count == 0) return Matrix(m.field(), 1, m.cols());  // zero code
        return m.block(row0, 0, count, m.cols());
    }

    /// Rows of the monomial system: one per formal product A_u B_v (or R/S),
    /// row value (F_u * G_v) elementwise.  A functional sum_i lambda_i C_i
    /// equals a block of AB for every input and padding exactly when its
    /// coefficients against these rows match rhs_matrix(); this is the
    /// symbolic randomness-annihilation condition.
    Matrix monomial_matrix() const {
        const std::size_t ra = part_.mp() + x_, rb = part_.np() + x_;
        Matrix mono(field_, ra * rb, n_);
        for (std::size_t u = 0; u < ra; ++u)
            for (std::size_t v = 0; v < rb; ++v)
                for (std::size_t i = 0; i < n_; ++i)
                    mono.at(u * rb + v, i) = field_.mul(f_.at(u, i), g_.at(v, i));
        return mono;
    }

    /// Column (a*n + b) marks the monomials A_{aj} B_{jb} that sum to block
    /// (a, b) of AB; every row touching padding is zero.
    Matrix rhs_matrix() const {
        const std::size_t rb = part_.np() + x_;
        Matrix rhs(field_, (part_.mp() + x_) * rb, part_.m * part_.n);
        const std::uint64_t one = field_.one().value();
        for (std::size_t a = 0; a < part_.m; ++a)
            for (std::size_t b = 0; b < part_.n; ++b)
                for (std::size_t j = 0; j < part_.p; ++j) {
                    const std::size_t u = a * part_.p + j;
                    const std::size_t v = j * part_.n + b;
                    rhs.at(u * rb + v, a * part_.n + b) = one;
                }
        return rhs;
    }

    std::vector<Matrix> derive_lambda_full() const {
        auto sol = solve(monomial_matrix(), rhs_matrix());
        if (!sol) throw NotDecodable("no decoding coefficients exist for these generator matrices");
        std::vector<Matrix> out(n_, Matrix(field_, part_.m, part_.n));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t a = 0; a < part_.m; ++a)
                for (std::size_t b = 0; b < part_.n; ++b) out[i].at(a, b) = sol->at(i, a * part_.n + b);
        return out;
    }

    Field field_;
    PartitionSpec part_;
    std::size_t x_;
    Matrix f_, g_;
    std::string family_;
    std::size_t n_ = 0;
    LinearCode c_a_, c_b_, c_a_enc_, c_a_sec_, c_b_enc_, c_b_sec_;
    LinearCode c_star_;
    std::vector<Matrix> lambda_;
    std::optional<StarCodeSpec> star_spec_;
    std::optional<std::vector<std::uint64_t>> alpha_;
};

/// Standalone entry point for the decoding-coefficient solver (the scheme
/// constructor runs the same computation and caches the result).
inline std::vector<Matrix> derive_lambda(const SdmmScheme& scheme) { return scheme.lambda(); }

// ---------------------------------------------------------------------------
// Encode / compute / decode
// ---------------------------------------------------------------------------

/// Split, pad with uniform randomness, and encode with F and G.  With X = 0
/// no randomness is drawn at all; that mode exists for plumbing tests and is
/// insecure by construction.
inline ShareSet encode(const SdmmScheme& scheme, const Matrix& a, const Matrix& b, Rng& rng) {
    require_same_field(scheme.field(), a.field());
    require_same_field(scheme.field(), b.field());
    const PartitionSpec& part = scheme.partition();
    part.validate_dims(a.rows(), a.cols(), b.cols());
    if (a.cols() != b.rows()) throw ShapeError("inner dimensions of A and B differ");

    std::vector<Matrix> a_parts = partition_a(a, part);
    std::vector<Matrix> b_parts = partition_b(b, part);
    const std::size_t bt = a.rows() / part.m, bs = a.cols() / part.p, br = b.cols() / part.n;
    for (std::size_t k = 0; k < scheme.security_param(); ++k)
        a_parts.push_back(Matrix::uniform_random(scheme.field(), bt, bs, rng));
    for (std::size_t k = 0; k < scheme.security_param(); ++k)
        b_parts.push_back(Matrix::uniform_random(scheme.field(), bs, br, rng));

    ShareSet shares;
    shares.seed = rng.seed();
    shares.tilde_a.reserve(scheme.workers());
    shares.tilde_b.reserve(scheme.workers());
    for (std::size_t i = 0; i < scheme.workers(); ++i) {
        Matrix sa(scheme.field(), bt, bs);
        for (std::size_t u = 0; u < a_parts.size(); ++u) sa.axpy(scheme.f().at(u, i), a_parts[u]);
        shares.tilde_a.push_back(std::move(sa));
        Matrix sb(scheme.field(), bs, br);
        for (std::size_t v = 0; v < b_parts.size(); ++v) sb.axpy(scheme.g().at(v, i), b_parts[v]);
        shares.tilde_b.push_back(std::move(sb));
    }
    return shares;
}

/// What honest workers return: the star product of the share vectors.
inline ResponseSet honest_responses(const ShareSet& shares) {
    ResponseSet rs(shares.workers());
    for (std::size_t i = 0; i < shares.workers(); ++i) rs.responses[i] = shares.tilde_a[i] * shares.tilde_b[i];
    return rs;
}

/// Decode AB from the responses of the workers in K (solve the
/// restricted system, then combine blockwise).  K must contain an information
/// set of the star code and consist of responding workers.
inline Matrix decode(const SdmmScheme& scheme, const ResponseSet& responses,
                     const std::vector<std::size_t>& k_set) {
    if (k_set.empty()) throw InsufficientResponses("empty worker subset");
    std::set<std::size_t> distinct(k_set.begin(), k_set.end());
    if (distinct.size() != k_set.size()) throw InvalidParams("worker subset has duplicates");
    for (auto i : k_set) {
        if (i >= responses.workers() || !responses.responses[i] ||
            responses.status[i] != WorkerStatus::ok)
            throw InsufficientResponses("K must index responding workers");
    }
    const bool full = k_set.size() == scheme.workers();
    const std::vector<Matrix> lam_local = full ? std::vector<Matrix>{} : scheme.lambda_for(k_set);
    const std::vector<Matrix>& lam = full ? scheme.lambda() : lam_local;

    const PartitionSpec& part = scheme.partition();
    const Matrix& first = *responses.responses[k_set.front()];
    const std::size_t bt = first.rows(), br = first.cols();
    Matrix out(scheme.field(), bt * part.m, br * part.n);
    for (std::size_t a = 0; a < part.m; ++a) {
        for (std::size_t b = 0; b < part.n; ++b) {
            Matrix blk(scheme.field(), bt, br);
            for (auto i : k_set) blk.axpy(lam[i].at(a, b), *responses.responses[i]);
            out.place_block(a * bt, b * br, blk);
        }
    }
    return out;
}

/// Decode from every responding worker.
inline Matrix decode(const SdmmScheme& scheme, const ResponseSet& responses) {
    return decode(scheme, responses, responses.ok_indices());
}

// ---------------------------------------------------------------------------
// Scheme-level quantities
// ---------------------------------------------------------------------------

/// R = N - D + 1 where D is the minimum distance of the star code.
inline std::size_t recovery_threshold(const SdmmScheme& scheme, std::uint64_t budget = kDefaultEnumBudget) {
    const std::size_t d = minimum_distance(scheme.star_code(), budget);
    return scheme.workers() - d + 1;
}

enum class SecurityVerdict { secure_by_mds, insecure_proven, unknown };

inline const char* to_string(SecurityVerdict v) {
    switch (v) {
        case SecurityVerdict::secure_by_mds: return "SecureByMds";
        case SecurityVerdict::insecure_proven: return "InsecureProven";
        default: return "Unknown";
    }
}

/// Sufficient condition: both security subcodes MDS of full dimension X.
/// Proven insecure when X exceeds a security subcode's dimension, or when the
/// dual-distance hypothesis holds and a security subcode is not MDS.
inline SecurityVerdict is_x_secure(const SdmmScheme& scheme, std::uint64_t budget = kDefaultEnumBudget) {
    const std::size_t x = scheme.security_param();
    if (x == 0) return SecurityVerdict::insecure_proven;  // the X = 0 testing mode hides nothing
    const LinearCode& sa = scheme.code_a_sec();
    const LinearCode& sb = scheme.code_b_sec();
    if (sa.dim() < x || sb.dim() < x) return SecurityVerdict::insecure_proven;

    bool mds_a = false, mds_b = false, mds_known = true;
    try {
        mds_a = is_mds(sa, budget);
        mds_b = is_mds(sb, budget);
    } catch (const TooLarge&) {
        mds_known = false;
    }
    if (mds_known && mds_a && mds_b) return SecurityVerdict::secure_by_mds;

    // The converse direction needs the dual distances of C_A and C_B: when
    // every X columns of F and G are independent, the colluders' shares are
    // uniform, and zero leakage then forces the padding minors invertible.
    try {
        const std::size_t da = minimum_distance(dual(scheme.code_a()), budget);
        const std::size_t db = minimum_distance(dual(scheme.code_b()), budget);
        if (mds_known && x + 1 <= std::min(da, db) && !(mds_a && mds_b))
            return SecurityVerdict::insecure_proven;
    } catch (const TooLarge&) {
    }
    return SecurityVerdict::unknown;
}

/// One lower bound on the recovery threshold, with its attribution.
struct BoundRow {
    std::string name;
    std::size_t value = 0;
    bool applicable = true;
};

struct BoundsReport {
    std::vector<BoundRow> rows;
    bool collusion_cap_ok = true;  // X < N/2 whenever the MDS hypothesis applies
    std::size_t best_applicable = 0;
};

/// The recovery-threshold lower bounds, evaluated as pure formulas.
inline BoundsReport bounds_report(std::size_t m, std::size_t n, std::size_t p, std::size_t x,
                                  std::size_t big_n, bool sec_mds, bool tolerates_stragglers) {
    BoundsReport rep;
    const std::size_t general = (m + n) * p + 2 * x - 1;
    rep.rows.push_back({"product-singleton", std::min(big_n, general), true});
    rep.rows.push_back({"straggler-tolerant", general, tolerates_stragglers});
    rep.rows.push_back({"mds-security", m * n + std::max(m, n) * p + 2 * x - 1, sec_mds});
    if (sec_mds) rep.collusion_cap_ok = 2 * x < big_n;
    for (const auto& row : rep.rows) {
        if (row.applicable) rep.best_applicable = std::max(rep.best_applicable, row.value);
    }
    return rep;
}

/// Total communication cost in field symbols: upload N(ts/mp + sr/pn) plus
/// download R*tr/mn.
inline std::uint64_t communication_cost(std::size_t big_n, std::size_t r_threshold, std::size_t t,
                                        std::size_t s, std::size_t r, std::size_t m, std::size_t n,
                                        std::size_t p) {
    const std::uint64_t upload =
        std::uint64_t(big_n) * (std::uint64_t(t) * s / (m * p) + std::uint64_t(s) * r / (p * n));
    const std::uint64_t download = std::uint64_t(r_threshold) * t * r / (m * n);
    return upload + download;
}

}  // namespace sdmm
