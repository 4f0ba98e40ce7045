/*
 * sdmm_cli.cpp — command-line front end
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

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sdmm/audit.hpp"
#include "sdmm/decoding.hpp"
#include "sdmm/io.hpp"
#include "sdmm/schemes.hpp"
#include "sdmm/simulator.hpp"
#include "sdmm/version.hpp"

namespace {

using namespace sdmm;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitDecoding = 4;

std::optional<Field> parse_field(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "gf4") return Field::gf4();
    try {
        return Field::prime(std::stoull(text));
    } catch (const std::logic_error&) {  // stoull rejects, or out of range
        throw InvalidParams("--field expects a prime modulus or 'gf4', got '" + text + "'");
    }
}

/// Every output file starts with this header; identical configs must give
/// byte-identical files, so nothing volatile (timestamps, wall clocks) may
/// appear here.
void write_header(std::ostream& os, const std::string& config, std::uint64_t seed) {
    os << "# sdmm_cli " << kVersion << "\n";
    os << "# config: " << config << "\n";
    os << "# seed: " << seed << "\n";
}

struct OutStream {
    std::ostream* os = &std::cout;
    std::ofstream file;

    explicit OutStream(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
            os = &file;
        }
    }
};

int cmd_scheme_info(const std::string& recipe_text, const std::string& field_text) {
    const SchemeRecipe recipe = parse_recipe(recipe_text);
    const SdmmScheme scheme = build_from_recipe(recipe, parse_field(field_text));
    const auto& part = scheme.partition();

    const std::size_t r = recovery_threshold(scheme);
    const std::size_t d = minimum_distance(scheme.star_code());
    const SecurityVerdict verdict = is_x_secure(scheme);

    std::cout << "scheme: " << scheme.family() << " (" << recipe_text << ")\n";
    std::cout << "field: " << scheme.field().name() << "\n";
    std::cout << "workers N: " << scheme.workers() << "\n";
    std::cout << "partition: m=" << part.m << " n=" << part.n << " p=" << part.p << "\n";
    std::cout << "security X: " << scheme.security_param() << "\n";
    std::cout << "dim C_A: " << scheme.code_a().dim() << "\n";
    std::cout << "dim C_B: " << scheme.code_b().dim() << "\n";
    std::cout << "dim C_A*C_B: " << scheme.star_code().dim() << "\n";
    std::cout << "star distance D: " << d << "\n";
    std::cout << "recovery threshold R: " << r << "\n";
    std::cout << "straggler tolerance: " << d - 1 << "\n";
    std::cout << "security verdict: " << to_string(verdict) << "\n";

    const bool sec_mds = verdict == SecurityVerdict::secure_by_mds;
    const BoundsReport bounds =
        bounds_report(part.m, part.n, part.p, scheme.security_param(), scheme.workers(), sec_mds, d > 1);
    for (const auto& row : bounds.rows) {
        std::cout << "bound[" << row.name << "]: " << row.value
                  << (row.applicable ? "" : " (hypothesis not satisfied)")
                  << (row.applicable && row.value == r ? " (met with equality)" : "") << "\n";
    }
    std::cout << "collusion cap X < N/2: " << (bounds.collusion_cap_ok ? "ok" : "VIOLATED") << "\n";

    // per-entry communication cost: one field element per block
    const std::uint64_t cost =
        communication_cost(scheme.workers(), r, part.m, part.p, part.n, part.m, part.n, part.p);
    std::cout << "communication cost (unit blocks): " << cost << " symbols\n";
    return kExitOk;
}

int cmd_simulate(const std::string& recipe_text, const std::string& field_text, std::size_t trials,
                 std::size_t ell_opt, std::size_t s_faults, std::size_t e_faults, const std::string& model,
                 std::size_t t_dim, std::size_t s_dim, std::size_t r_dim, const std::string& decoder,
                 bool timings, std::uint64_t seed, std::size_t threads, const std::string& out_path,
                 const std::string& config_echo) {
    if (trials == 0) throw CLI::ValidationError("--trials must be positive");
    const SchemeRecipe recipe = parse_recipe(recipe_text);
    const SdmmScheme scheme = build_from_recipe(recipe, parse_field(field_text));

    const std::size_t d = minimum_distance(scheme.star_code());
    const std::size_t ell = ell_opt > 0 ? ell_opt : (d >= 3 ? d - 2 : 1);  // default: the l = D-2 sweet spot

    ExperimentDims dims = ExperimentDims::defaults_for(scheme);
    if (t_dim) dims.t = t_dim;
    if (s_dim) dims.s = s_dim;
    if (r_dim) dims.r = r_dim;

    PlanSpec plan;
    plan.s = s_faults;
    plan.e = e_faults;
    plan.model = error_model_from_string(model);

    const DecoderMode mode = decoder == "independent" ? DecoderMode::independent : DecoderMode::interleaved;
    const MonteCarloResult mc = monte_carlo(scheme, dims, plan, trials, ell, seed, threads, mode);

    OutStream out(out_path);
    write_header(*out.os, config_echo, seed);
    *out.os << csv_header() << "\n";
    for (const auto& row : mc.rows) *out.os << to_csv_row(row, timings) << "\n";

    std::ostringstream summary;
    summary << "# summary: failures=" << mc.failures << "/" << mc.trials << " rate=" << mc.failure_rate
            << " wilson95=[" << mc.wilson_low << "," << mc.wilson_high << "]";
    if (scheme.star_spec() && d >= 2)
        summary << " failure_bound(q,ell,D)=" << static_cast<double>(failure_bound(scheme.field().order(), ell, d));
    *out.os << summary.str() << "\n";

    if (timings) {
        std::cout << "mean timings (us): encode=" << mc.mean_timings.encode_us
                  << " worker=" << mc.mean_timings.worker_us << " decode=" << mc.mean_timings.decode_us
                  << "\n";
    }
    if (trials == 1 && mc.failures > 0) return kExitDecoding;  // single-run mode surfaces the failure
    return kExitOk;
}

int cmd_audit_mi(const std::string& recipe_text, const std::string& field_text, std::size_t collusion,
                 const std::string& out_path, const std::string& config_echo, std::uint64_t seed) {
    const SchemeRecipe recipe = parse_recipe(recipe_text);
    const SdmmScheme scheme = build_from_recipe(recipe, parse_field(field_text));
    AuditConfig cfg;
    cfg.collusion = collusion > 0 ? collusion : scheme.security_param();
    const LeakageReport report = leakage_report(scheme, cfg);

    OutStream out(out_path);
    write_header(*out.os, config_echo, seed);
    *out.os << "collusion_set,mi_bits,mi_zero,shares_uniform,sec_full_rank\n";
    for (const auto& row : report.rows) {
        std::string set;
        for (std::size_t i = 0; i < row.workers.size(); ++i)
            set += (i ? "|" : "") + std::to_string(row.workers[i] + 1);
        *out.os << set << ',' << row.mi_bits << ',' << (row.mi_zero ? 1 : 0) << ','
                << (row.shares_uniform ? 1 : 0) << ',' << (row.sec_full_rank ? 1 : 0) << "\n";
    }
    *out.os << "# summary: max_mi_bits=" << report.max_mi_bits << " all_zero=" << (report.all_zero ? 1 : 0)
            << "\n";
    return kExitOk;
}

int cmd_bounds(std::size_t m, std::size_t n, std::size_t p, std::size_t x, std::size_t big_n, bool sec_mds,
               bool stragglers_tolerated) {
    const BoundsReport rep = bounds_report(m, n, p, x, big_n, sec_mds, stragglers_tolerated);
    std::cout << "lower bounds on the recovery threshold (N=" << big_n << "):\n";
    for (const auto& row : rep.rows) {
        std::cout << "  " << row.name << ": " << row.value
                  << (row.applicable ? "" : " (hypothesis not satisfied)") << "\n";
    }
    std::cout << "  best applicable: " << rep.best_applicable << "\n";
    if (sec_mds && !rep.collusion_cap_ok)
        std::cout << "  WARNING: X >= N/2 violates the collusion cap for MDS C_A, C_B\n";
    return kExitOk;
}

int cmd_bench_decoder(const std::string& recipe_text, const std::string& field_text, std::size_t trials,
                      std::size_t e_faults, std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const SchemeRecipe recipe = parse_recipe(recipe_text);
    const SdmmScheme scheme = build_from_recipe(recipe, parse_field(field_text));
    const std::size_t d = minimum_distance(scheme.star_code());
    if (d < 3) {
        std::cout << "star distance " << d << " leaves no correction radius to benchmark\n";
        return kExitOk;
    }
    const ExperimentDims dims = ExperimentDims::defaults_for(scheme);
    std::cout << "ell,mode,trials,failures,mean_decode_us\n";
    for (std::size_t ell : {std::size_t(1), d - 2, std::size_t(2) * (d - 2)}) {
        for (auto mode : {DecoderMode::interleaved, DecoderMode::independent}) {
            PlanSpec plan;
            plan.e = e_faults ? e_faults : std::min<std::size_t>(d - 2, scheme.workers() - scheme.star_code().dim());
            auto t0 = clock::now();
            const auto mc = monte_carlo(scheme, dims, plan, trials, std::max<std::size_t>(ell, 1), seed, 1, mode);
            auto us = std::chrono::duration_cast<std::chrono::microseconds>(clock::now() - t0).count();
            std::cout << ell << ',' << (mode == DecoderMode::interleaved ? "interleaved" : "independent")
                      << ',' << trials << ',' << mc.failures << ',' << (us / std::max<std::size_t>(trials, 1))
                      << "\n";
        }
    }
    return kExitOk;
}

std::string echo_config(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) s += ' ';
        s += argv[i];
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear SDMM schemes over star-product codes: construction, simulation, auditing"};
    app.require_subcommand(1);
    app.fallthrough();  // shared flags (--seed, --out, ...) may follow the subcommand

    std::string field_text;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::string out_path;
    app.add_option("--field", field_text, "field: a prime modulus, or 'gf4'")->capture_default_str();
    app.add_option("--seed", seed, "master RNG seed")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for Monte Carlo trials")->capture_default_str();
    app.add_option("--out", out_path, "output file (default stdout)");

    auto* info = app.add_subcommand("scheme-info", "construct a scheme and print its parameters and bounds");
    std::string info_recipe;
    info->add_option("recipe", info_recipe, "e.g. matdot:p=2,X=1,N=6 | gasp33x2:seed=7 | dft:p=4,X=2 | hermitian")
        ->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo worker-pool simulation, CSV output");
    std::string sim_recipe, sim_model = "uniform", sim_decoder = "interleaved";
    std::size_t sim_trials = 1000, sim_ell = 0, sim_s = 0, sim_e = 0, sim_t = 0, sim_sdim = 0, sim_r = 0;
    bool sim_timings = false;
    simulate->add_option("recipe", sim_recipe)->required();
    simulate->add_option("--trials", sim_trials, "number of rounds")->capture_default_str();
    simulate->add_option("--ell", sim_ell, "interleaving order (default D-2)");
    simulate->add_option("--stragglers", sim_s, "stragglers per round")->capture_default_str();
    simulate->add_option("--byzantine", sim_e, "Byzantine workers per round")->capture_default_str();
    simulate->add_option("--model", sim_model, "uniform|fixed|low_rank|zero_mimic")->capture_default_str();
    simulate->add_option("--t", sim_t, "rows of A");
    simulate->add_option("--s", sim_sdim, "inner dimension");
    simulate->add_option("--r", sim_r, "columns of B");
    simulate->add_option("--decoder", sim_decoder, "interleaved|independent")->capture_default_str();
    simulate->add_flag("--timings", sim_timings, "emit measured wall clocks (breaks byte-determinism)");

    auto* audit = app.add_subcommand("audit-mi", "exhaustive mutual-information audit, CSV output");
    std::string audit_recipe;
    std::size_t audit_collusion = 0;
    audit->add_option("recipe", audit_recipe)->required();
    audit->add_option("--collusion", audit_collusion, "collusion size X' (default: the scheme's X)");

    auto* bounds = app.add_subcommand("bounds", "evaluate the recovery-threshold lower bounds");
    std::size_t b_m = 1, b_n = 1, b_p = 1, b_x = 1, b_bign = 0;
    bool b_secmds = false, b_stragglers = false;
    bounds->add_option("--m", b_m)->required();
    bounds->add_option("--n", b_n)->required();
    bounds->add_option("--p", b_p)->required();
    bounds->add_option("--X", b_x)->required();
    bounds->add_option("--N", b_bign)->required();
    bounds->add_flag("--sec-mds", b_secmds, "security subcodes are MDS");
    bounds->add_flag("--stragglers-tolerated", b_stragglers, "scheme tolerates at least one straggler");

    auto* bench = app.add_subcommand("bench-decoder", "time the interleaved vs independent decoders");
    std::string bench_recipe;
    std::size_t bench_trials = 100, bench_e = 0;
    bench->add_option("recipe", bench_recipe)->required();
    bench->add_option("--trials", bench_trials)->capture_default_str();
    bench->add_option("--byzantine", bench_e, "Byzantine workers per round (default D-2)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    const std::string config = echo_config(argc, argv);
    try {
        if (info->parsed()) return cmd_scheme_info(info_recipe, field_text);
        if (simulate->parsed())
            return cmd_simulate(sim_recipe, field_text, sim_trials, sim_ell, sim_s, sim_e, sim_model, sim_t,
                                sim_sdim, sim_r, sim_decoder, sim_timings, seed, threads, out_path, config);
        if (audit->parsed()) return cmd_audit_mi(audit_recipe, field_text, audit_collusion, out_path, config, seed);
        if (bounds->parsed()) return cmd_bounds(b_m, b_n, b_p, b_x, b_bign, b_secmds, b_stragglers);
        if (bench->parsed()) return cmd_bench_decoder(bench_recipe, field_text, bench_trials, bench_e, seed);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidParams& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidPoints& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ShapeError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConstructionFailed& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const NotDecodable& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const NoRootOfUnity& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return kExitConstruction;
    } catch (const PipelineFailure& e) {
        std::cerr << "decoding failed: " << e.what() << "\n";
        return kExitDecoding;
    } catch (const InsufficientResponses& e) {
        std::cerr << "decoding failed: " << e.what() << "\n";
        return kExitDecoding;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
