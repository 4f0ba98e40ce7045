/*
 * simulator.hpp
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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sdmm/decoding.hpp"
#include "sdmm/scheme.hpp"
#include "sdmm/schemes.hpp"

namespace sdmm {

// ---------------------------------------------------------------------------
// Fault plans
// ---------------------------------------------------------------------------

enum class ErrorModel { uniform, fixed, low_rank, zero_mimic };

inline const char* to_string(ErrorModel m) {
    switch (m) {
        case ErrorModel::uniform: return "uniform";
        case ErrorModel::fixed: return "fixed";
        case ErrorModel::low_rank: return "low_rank";
        default: return "zero_mimic";
    }
}

inline ErrorModel error_model_from_string(const std::string& s) {
    if (s == "uniform") return ErrorModel::uniform;
    if (s == "fixed") return ErrorModel::fixed;
    if (s == "low_rank") return ErrorModel::low_rank;
    if (s == "zero_mimic") return ErrorModel::zero_mimic;
    throw InvalidParams("unknown error model '" + s + "'");
}

/// One round's fault assignment: who straggles, who lies, and how.
struct FaultPlan {
    std::vector<std::size_t> stragglers;
    std::vector<std::size_t> byzantine;
    ErrorModel model = ErrorModel::uniform;
    std::optional<Matrix> fixed_z;  // shared error matrix for ErrorModel::fixed
    std::size_t low_rank = 1;

    void validate(std::size_t n) const {
        std::set<std::size_t> s(stragglers.begin(), stragglers.end());
        std::set<std::size_t> e(byzantine.begin(), byzantine.end());
        if (s.size() != stragglers.size() || e.size() != byzantine.size())
            throw InvalidParams("fault plan has duplicate indices");
        for (auto i : stragglers) {
            if (i >= n) throw InvalidParams("straggler index out of range");
            if (e.count(i)) throw InvalidParams("straggler and Byzantine sets must be disjoint");
        }
        for (auto i : byzantine) {
            if (i >= n) throw InvalidParams("Byzantine index out of range");
        }
    }
};

namespace detail {

/// Draw a guaranteed-nonzero error matrix for the given model.
inline Matrix draw_error(const Field& f, std::size_t rows, std::size_t cols, const FaultPlan& plan,
                         const Matrix& honest, Rng& rng) {
    switch (plan.model) {
        case ErrorModel::uniform: {
            Matrix z(f, rows, cols);
            do {
                z = Matrix::uniform_random(f, rows, cols, rng);
            } while (z.is_zero());
            return z;
        }
        case ErrorModel::fixed: {
            if (!plan.fixed_z) throw InvalidParams("fixed error model needs a Z matrix");
            if (plan.fixed_z->rows() != rows || plan.fixed_z->cols() != cols)
                throw ShapeError("fixed Z has the wrong block shape");
            if (plan.fixed_z->is_zero()) throw InvalidParams("fixed Z must be nonzero");
            return *plan.fixed_z;
        }
        case ErrorModel::low_rank: {
            Matrix z(f, rows, cols);
            do {
                z = Matrix(f, rows, cols);
                for (std::size_t r = 0; r < plan.low_rank; ++r) {
                    Matrix u(f, rows, 1), v(f, 1, cols);
                    for (std::size_t i = 0; i < rows; ++i) u.at(i, 0) = rng.field_element(f);
                    for (std::size_t j = 0; j < cols; ++j) v.at(0, j) = rng.field_element(f);
                    z = z + u * v;
                }
            } while (z.is_zero());
            return z;
        }
        case ErrorModel::zero_mimic:
            // worker reports an all-zero matrix: Z = -C.  When the honest
            // response is itself zero this introduces no error at all; the
            // report records that blind spot rather than papering over it.
            return honest.scaled(f.neg(f.one().value()));
    }
    throw InvalidParams("unreachable error model");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Round reports
// ---------------------------------------------------------------------------

struct PhaseTimings {
    std::uint64_t encode_us = 0, worker_us = 0, decode_us = 0;
};

struct RoundReport {
    bool success = false;       // pipeline and decode completed
    bool oracle_match = false;  // decoded product equals A*B
    std::vector<std::size_t> located;
    std::vector<std::size_t> true_byzantine;
    bool located_subset_of_truth = true;
    std::size_t n = 0, r = 0, x = 0, s = 0, e = 0, ell = 0;
    PhaseTimings timings;
    std::string failure_reason;
    std::optional<Matrix> decoded;

    bool failed() const { return !(success && oracle_match); }
};

enum class DecoderMode { interleaved, independent };

/// One full round: encode, compute, inject faults, clean, decode, compare
/// against the directly multiplied oracle.  Pipeline or decoding trouble is
/// folded into the report, never thrown.
inline RoundReport run_round(const SdmmScheme& scheme, const Matrix& a, const Matrix& b,
                             const FaultPlan& plan, std::size_t ell, Rng& rng,
                             DecoderMode mode = DecoderMode::interleaved, bool randomize = false) {
    using clock = std::chrono::steady_clock;
    plan.validate(scheme.workers());

    RoundReport rep;
    rep.n = scheme.workers();
    rep.x = scheme.security_param();
    rep.s = plan.stragglers.size();
    rep.e = plan.byzantine.size();
    rep.ell = ell;
    rep.true_byzantine = plan.byzantine;
    std::sort(rep.true_byzantine.begin(), rep.true_byzantine.end());
    try {
        rep.r = recovery_threshold(scheme);
    } catch (const TooLarge&) {
        rep.r = 0;
    }

    const Matrix oracle = a * b;

    auto t0 = clock::now();
    ShareSet shares = encode(scheme, a, b, rng);
    DiagonalMask mask;
    if (randomize) {
        // mask drawn fresh per encode; reuse would leak it to the workers
        mask = draw_mask(scheme.field(), scheme.workers(), shares.tilde_a[0].rows(),
                         shares.tilde_b[0].cols(), rng);
        shares = mask_shares(shares, mask, scheme.field());
    }
    auto t1 = clock::now();

    ResponseSet responses = honest_responses(shares);
    for (auto i : plan.byzantine) {
        const Matrix& honest = *responses.responses[i];
        Matrix z = detail::draw_error(scheme.field(), honest.rows(), honest.cols(), plan, honest, rng);
        responses.responses[i] = honest + z;
    }
    for (auto i : plan.stragglers) {
        responses.responses[i] = std::nullopt;
        responses.status[i] = WorkerStatus::straggler;
    }
    sim::GroundTruthAccess::set(responses, rep.true_byzantine);
    auto t2 = clock::now();

    if (randomize) responses = unmask_responses(responses, mask, scheme.field());

    try {
        PipelineOutcome cleaned = byzantine_pipeline(
            responses, scheme, ell,
            mode == DecoderMode::interleaved ? PipelineMode::interleaved : PipelineMode::independent);
        rep.located = cleaned.located;
        Matrix decoded = decode(scheme, cleaned.cleaned);
        rep.success = true;
        rep.oracle_match = decoded == oracle;
        rep.decoded = std::move(decoded);
    } catch (const PipelineFailure& pf) {
        rep.failure_reason = pf.what();
    } catch (const InsufficientResponses& ir) {
        rep.failure_reason = ir.what();
    } catch (const InsufficientData& id) {
        rep.failure_reason = id.what();
    }
    auto t3 = clock::now();

    for (auto w : rep.located) {
        if (!std::binary_search(rep.true_byzantine.begin(), rep.true_byzantine.end(), w))
            rep.located_subset_of_truth = false;
    }
    auto us = [](auto d) {
        return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(d).count());
    };
    rep.timings = {us(t1 - t0), us(t2 - t1), us(t3 - t2)};
    return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo driver
// ---------------------------------------------------------------------------

/// Distribution of fault plans: per trial, S stragglers and E Byzantine
/// workers are drawn uniformly (disjoint) and errors follow the model.
struct PlanSpec {
    std::size_t s = 0, e = 0;
    ErrorModel model = ErrorModel::uniform;
    std::optional<Matrix> fixed_z;
    std::size_t low_rank = 1;
};

struct TrialRow {
    std::size_t trial = 0;
    std::string scheme;
    std::size_t n = 0, r = 0, x = 0, s = 0, e = 0, ell = 0;
    bool success = false, oracle_match = false, located_correct = false;
    PhaseTimings timings;
};

inline std::string csv_header() {
    return "trial,scheme,N,R,X,S,E,ell,verdict,oracle_match,located_correct,"
           "phase_encode_us,phase_worker_us,phase_decode_us";
}

/// Timings are zeroed by default so that equal seeds give byte-identical
/// rows; pass emit_timings = true to record the measured wall clocks.
inline std::string to_csv_row(const TrialRow& row, bool emit_timings) {
    std::ostringstream os;
    os << row.trial << ',' << row.scheme << ',' << row.n << ',' << row.r << ',' << row.x << ',' << row.s
       << ',' << row.e << ',' << row.ell << ',' << (row.success ? "ok" : "failure") << ','
       << (row.oracle_match ? 1 : 0) << ',' << (row.located_correct ? 1 : 0);
    if (emit_timings)
        os << ',' << row.timings.encode_us << ',' << row.timings.worker_us << ',' << row.timings.decode_us;
    else
        os << ",0,0,0";
    return os.str();
}

struct MonteCarloResult {
    std::size_t trials = 0, failures = 0;
    double failure_rate = 0.0;
    double wilson_low = 0.0, wilson_high = 0.0;
    PhaseTimings mean_timings;
    std::vector<TrialRow> rows;
};

/// 95% Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(std::size_t failures, std::size_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double nf = static_cast<double>(trials);
    const double phat = static_cast<double>(failures) / nf;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nf;
    const double center = (phat + z2 / (2.0 * nf)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)) / denom;
    double lo = std::max(0.0, center - half), hi = std::min(1.0, center + half);
    if (failures == 0) lo = 0.0;  // exact endpoints, no rounding residue
    if (failures == trials) hi = 1.0;
    return {lo, hi};
}

struct ExperimentDims {
    std::size_t t = 0, s = 0, r = 0;

    static ExperimentDims defaults_for(const SdmmScheme& scheme) {
        const auto& part = scheme.partition();
        return {2 * part.m, 2 * part.p, 2 * part.n};
    }
};

/// Reproducible Monte Carlo: trial i uses the child stream (seed, i), so the
/// thread count never changes the results, only the wall clock.
inline MonteCarloResult monte_carlo(const SdmmScheme& scheme, const ExperimentDims& dims,
                                    const PlanSpec& plan_spec, std::size_t trials, std::size_t ell,
                                    std::uint64_t seed, std::size_t threads = 1,
                                    DecoderMode mode = DecoderMode::interleaved, bool randomize = false) {
    if (trials == 0) throw InvalidParams("trials must be positive");
    if (plan_spec.s + plan_spec.e > scheme.workers())
        throw InvalidParams("more faults than workers");
    scheme.partition().validate_dims(dims.t, dims.s, dims.r);
    if (plan_spec.model == ErrorModel::fixed) {
        // validated up front: a throw from inside a worker thread would abort
        if (!plan_spec.fixed_z) throw InvalidParams("fixed error model needs a Z matrix");
        const std::size_t bt = dims.t / scheme.partition().m, br = dims.r / scheme.partition().n;
        if (plan_spec.fixed_z->rows() != bt || plan_spec.fixed_z->cols() != br)
            throw ShapeError("fixed Z has the wrong block shape");
        if (plan_spec.fixed_z->is_zero()) throw InvalidParams("fixed Z must be nonzero");
    }
    const bool is_randomized = randomize || scheme.family() == "rmatdot";

    MonteCarloResult result;
    result.trials = trials;
    result.rows.resize(trials);

    Rng master(seed);
    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t trial = begin; trial < end; ++trial) {
            Rng rng = master.child(trial);
            Matrix a = Matrix::uniform_random(scheme.field(), dims.t, dims.s, rng);
            Matrix b = Matrix::uniform_random(scheme.field(), dims.s, dims.r, rng);
            FaultPlan plan;
            auto faulty = rng.sample_without_replacement(scheme.workers(), plan_spec.s + plan_spec.e);
            plan.stragglers.assign(faulty.begin(), faulty.begin() + plan_spec.s);
            plan.byzantine.assign(faulty.begin() + plan_spec.s, faulty.end());
            plan.model = plan_spec.model;
            plan.fixed_z = plan_spec.fixed_z;
            plan.low_rank = plan_spec.low_rank;

            RoundReport rep = run_round(scheme, a, b, plan, ell, rng, mode, is_randomized);
            TrialRow& row = result.rows[trial];
            row.trial = trial;
            row.scheme = scheme.family();
            row.n = rep.n;
            row.r = rep.r;
            row.x = rep.x;
            row.s = rep.s;
            row.e = rep.e;
            row.ell = rep.ell;
            row.success = rep.success;
            row.oracle_match = rep.oracle_match;
            row.located_correct = rep.located_subset_of_truth;
            row.timings = rep.timings;
        }
    };

    threads = std::max<std::size_t>(1, std::min(threads, trials));
    if (threads == 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (trials + threads - 1) / threads;
        for (std::size_t k = 0; k < threads; ++k) {
            const std::size_t begin = k * chunk, end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::uint64_t enc = 0, wrk = 0, dec = 0;
    for (const auto& row : result.rows) {
        if (!(row.success && row.oracle_match)) ++result.failures;
        enc += row.timings.encode_us;
        wrk += row.timings.worker_us;
        dec += row.timings.decode_us;
    }
    result.failure_rate = static_cast<double>(result.failures) / static_cast<double>(trials);
    std::tie(result.wilson_low, result.wilson_high) = wilson_interval(result.failures, trials);
    result.mean_timings = {enc / trials, wrk / trials, dec / trials};
    return result;
}

}  // namespace sdmm
