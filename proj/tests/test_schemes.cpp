#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "oracles.hpp"
#include "sdmm/schemes.hpp"

using namespace sdmm;

TEST_CASE("secure MatDot") {
    SECTION("recovery thresholds match 2p + 2X - 1") {
        CHECK(recovery_threshold(build_matdot(Field::prime(101), 1, 1, 3)) == 3);
        CHECK(recovery_threshold(build_matdot(Field::prime(101), 2, 1, 6)) == 5);
        CHECK(recovery_threshold(build_matdot(Field::prime(101), 2, 2, 8)) == 7);
    }

    SECTION("C_A * C_B is RS_{2p+2X-1}(alpha) as a row space") {
        Field f = Field::prime(101);
        SdmmScheme scheme = build_matdot(f, 2, 1, 6);
        std::vector<std::uint64_t> alpha{1, 2, 3, 4, 5, 6};
        CHECK(scheme.star_code().same_code(rs_code(f, alpha, 5)));
    }

    SECTION("decomposition: C_A^enc = RS_p, C_A^sec = GRS_X(alpha, alpha^p)") {
        Field f = Field::prime(101);
        SdmmScheme scheme = build_matdot(f, 2, 1, 6);
        std::vector<std::uint64_t> alpha{1, 2, 3, 4, 5, 6};
        CHECK(scheme.code_a_enc().same_code(rs_code(f, alpha, 2)));
        std::vector<std::uint64_t> nu(6);
        for (std::size_t i = 0; i < 6; ++i) nu[i] = f.pow(alpha[i], 2);
        CHECK(scheme.code_a_sec().same_code(grs_code(f, alpha, nu, 1)));
        // G differs from F even though the codes agree: the generator matters
        CHECK(scheme.code_a().same_code(scheme.code_b()));
        CHECK(scheme.f() != scheme.g());
    }

    SECTION("solver lambda equals the Lagrange closed form when N = R") {
        // unique solution: Lambda_i is the x^{p-1} coefficient of the i-th
        // Lagrange basis polynomial
        Field f = Field::prime(101);
        const std::size_t p = 2, x = 1, n = 5;
        SdmmScheme scheme = build_matdot(f, p, x, n);
        std::vector<std::uint64_t> alpha{1, 2, 3, 4, 5};
        for (std::size_t i = 0; i < n; ++i)
            CHECK(scheme.lambda()[i].at(0, 0) == oracles::lagrange_coefficient(f, alpha, i, p - 1));
    }

    SECTION("the Lagrange closed form decodes any MatDot instance") {
        Field f = Field::prime(101);
        const std::size_t p = 2, x = 1, n = 7;
        SdmmScheme scheme = build_matdot(f, p, x, n);
        std::vector<std::uint64_t> alpha{1, 2, 3, 4, 5, 6, 7};
        Rng rng(77);
        Matrix a = Matrix::uniform_random(f, 2, 2, rng);
        Matrix b = Matrix::uniform_random(f, 2, 2, rng);
        ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
        Matrix sum(f, 2, 2);
        for (std::size_t i = 0; i < n; ++i)
            sum.axpy(oracles::lagrange_coefficient(f, alpha, i, p - 1), *resp.responses[i]);
        CHECK(sum == a * b);
    }

    SECTION("bad parameters") {
        CHECK_THROWS_AS(build_matdot(Field::prime(101), 2, 1, 4), InvalidParams);  // N < R
        CHECK_THROWS_AS(build_matdot(Field::prime(101), 2, 1, 6, {1, 1, 2, 3, 4, 5}), InvalidPoints);
        CHECK_THROWS_AS(build_matdot(Field::prime(101), 2, 1, 6, {0, 1, 2, 3, 4, 5}), InvalidPoints);
        CHECK_THROWS_AS(build_matdot(Field::prime(5), 2, 1, 6), InvalidParams);  // too few points
    }
}

TEST_CASE("GASP 3x3 X=2") {
    Field f = Field::prime((std::uint64_t(1) << 61) - 1);
    SdmmScheme scheme = build_gasp33x2(f, 7);

    SECTION("shape and threshold") {
        CHECK(scheme.workers() == 18);
        CHECK(scheme.code_a().dim() == 5);
        CHECK(scheme.star_code().dim() == 18);
        CHECK(recovery_threshold(scheme) == 18);
        CHECK(is_x_secure(scheme) == SecurityVerdict::secure_by_mds);
    }

    SECTION("product exponents are the pairwise sums") {
        std::set<std::uint64_t> sums;
        for (auto ea : gasp33x2_a_exponents())
            for (auto eb : gasp33x2_b_exponents()) sums.insert(ea + eb);
        std::vector<std::uint64_t> eta(sums.begin(), sums.end());
        CHECK(eta == gasp33x2_product_exponents());
        CHECK(eta.size() == 18);
    }

    SECTION("solver lambda matches the H^{-1} arrangement") {
        REQUIRE(scheme.eval_points());
        const auto& alpha = *scheme.eval_points();
        const auto& eta = gasp33x2_product_exponents();
        Matrix h(f, 18, 18);
        for (std::size_t j = 0; j < 18; ++j)
            for (std::size_t i = 0; i < 18; ++i) h.at(j, i) = f.pow(alpha[i], eta[j]);
        Matrix hinv = inverse(h);
        // coefficient of x^{(a) + 3(b)} is block (a, b) of AB, a, b in 0..2
        for (std::size_t i = 0; i < 18; ++i)
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b)
                    CHECK(scheme.lambda()[i].at(a, b) == hinv.at(i, a + 3 * b));
    }

    SECTION("decode of a random 6x6 product equals the oracle") {
        Rng rng(3);
        Matrix a = Matrix::uniform_random(f, 6, 6, rng);
        Matrix b = Matrix::uniform_random(f, 6, 6, rng);
        CHECK(decode(scheme, honest_responses(encode(scheme, a, b, rng))) == a * b);
    }

    SECTION("tiny fields exhaust the search budget") {
        CHECK_THROWS_AS(build_gasp33x2(Field::prime(19), 1, 50), ConstructionFailed);
    }

    SECTION("reconstruction is seed-deterministic") {
        SdmmScheme again = build_gasp33x2(f, 7);
        CHECK(again.f() == scheme.f());
        CHECK(again.g() == scheme.g());
    }
}

TEST_CASE("DFT scheme") {
    SECTION("p=2, X=1 over GF(13): decode is the average of all responses") {
        Field f = Field::prime(13);
        SdmmScheme scheme = build_dft(f, 2, 1);
        CHECK(scheme.workers() == 4);
        CHECK(recovery_threshold(scheme) == 4);
        // lambda is (1/N) * identity for every worker
        for (const auto& lam : scheme.lambda()) CHECK(lam.at(0, 0) == f.inv(4));
        Rng rng(5);
        for (int trial = 0; trial < 50; ++trial) {
            Matrix a = Matrix::uniform_random(f, 2, 2, rng);
            Matrix b = Matrix::uniform_random(f, 2, 2, rng);
            ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
            Matrix avg(f, 2, 2);
            for (std::size_t i = 0; i < 4; ++i) avg.axpy(f.inv(4), *resp.responses[i]);
            CHECK(avg == a * b);
            CHECK(decode(scheme, resp) == a * b);
        }
    }

    SECTION("star product is the full space; R = N = p + 2X") {
        Field f = Field::prime(13);
        for (std::size_t p : {1, 2}) {
            SdmmScheme scheme = build_dft(f, p, 1);
            CHECK(scheme.star_code().dim() == scheme.workers());
            CHECK(recovery_threshold(scheme) == p + 2);
        }
    }

    SECTION("C_A and C_B are (G)RS codes on the root-of-unity points") {
        // the G rows span the consecutive exponent range [-(p-1), X] mod N,
        // i.e. C_B = GRS_{p+X}(alpha, alpha^{-(p-1)})
        Field f = Field::prime(13);
        const std::size_t p = 2, x = 1, n = 4;
        SdmmScheme scheme = build_dft(f, p, x);
        REQUIRE(scheme.eval_points());
        const auto& alpha = *scheme.eval_points();
        std::vector<std::uint64_t> nu(n);
        for (std::size_t i = 0; i < n; ++i) nu[i] = f.inv(f.pow(alpha[i], p - 1));
        CHECK(scheme.code_b().same_code(grs_code(f, alpha, nu, p + x)));
        CHECK(scheme.code_a().same_code(rs_code(f, alpha, p + x)));
        // decomposition: C_B^enc = RS_p(alpha^{-1}), C_B^sec = GRS_X(alpha^{-1}, alpha^{-(p+X)})
        std::vector<std::uint64_t> alpha_inv(n), nu_sec(n);
        for (std::size_t i = 0; i < n; ++i) {
            alpha_inv[i] = f.inv(alpha[i]);
            nu_sec[i] = f.pow(alpha_inv[i], p + x);
        }
        CHECK(scheme.code_b_enc().same_code(rs_code(f, alpha_inv, p)));
        CHECK(scheme.code_b_sec().same_code(grs_code(f, alpha_inv, nu_sec, x)));
    }

    SECTION("every proper subset fails to decode (exhaustive, N <= 8)") {
        Field f = Field::prime(13);
        SdmmScheme scheme = build_dft(f, 2, 1);
        Rng rng(8);
        Matrix a = Matrix::uniform_random(f, 1, 2, rng);
        Matrix b = Matrix::uniform_random(f, 2, 1, rng);
        ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
        for (std::size_t mask = 1; mask + 1 < (1u << 4); ++mask) {
            std::vector<std::size_t> k;
            for (std::size_t i = 0; i < 4; ++i)
                if (mask & (1u << i)) k.push_back(i);
            CHECK_THROWS_AS(decode(scheme, resp, k), InsufficientResponses);
        }
    }

    SECTION("missing root of unity") {
        CHECK_THROWS_AS(build_dft(Field::prime(13), 3, 1), NoRootOfUnity);  // N = 5 does not divide 12
    }
}

TEST_CASE("Hermitian-curve scheme") {
    SECTION("place table: 8 affine points, 7 kept after dropping the zero of y") {
        // oracle: exhaustive scan over the 16 candidate pairs
        Field g = Field::gf4();
        std::size_t affine = 0;
        for (std::uint64_t xv = 0; xv < 4; ++xv)
            for (std::uint64_t yv = 0; yv < 4; ++yv)
                if (g.add(g.mul(yv, yv), yv) == g.mul(xv, g.mul(xv, xv))) ++affine;
        CHECK(affine == 8);
        const auto places = hermitian_places();
        CHECK(places.size() == 7);
        for (const auto& [xv, yv] : places) CHECK_FALSE((xv == 0 && yv == 0));
        CHECK(std::is_sorted(places.begin(), places.end()));
    }

    SECTION("N = 7, D = 1, R = 7; star code spanned by {1,x,y,x^2,xy,y^2}") {
        SdmmScheme scheme = build_hermitian();
        CHECK(scheme.workers() == 7);
        CHECK(scheme.security_param() == 1);
        CHECK(scheme.star_code().dim() == 6);
        CHECK(minimum_distance(scheme.star_code()) == 1);
        CHECK(recovery_threshold(scheme) == 7);
        // brute-force distance agrees (4^6 codewords)
        CHECK(oracles::brute_min_distance(scheme.star_code().basis()) == 1);
    }

    SECTION("security subcode is full support (and MDS as a [7,1] code)") {
        SdmmScheme scheme = build_hermitian();
        CHECK(full_support(scheme.code_a_sec()));
        CHECK(is_mds(scheme.code_a_sec()));
        CHECK(is_x_secure(scheme) == SecurityVerdict::secure_by_mds);
    }

    SECTION("decode equals the oracle over GF(4)") {
        SdmmScheme scheme = build_hermitian();
        Field g = Field::gf4();
        Rng rng(21);
        for (int trial = 0; trial < 100; ++trial) {
            Matrix a = Matrix::uniform_random(g, 2, 2, rng);
            Matrix b = Matrix::uniform_random(g, 2, 2, rng);
            CHECK(decode(scheme, honest_responses(encode(scheme, a, b, rng))) == a * b);
        }
    }

    SECTION("some 6-worker subset lacks an information set (R = 7 is tight)") {
        SdmmScheme scheme = build_hermitian();
        std::size_t failing = 0;
        for (std::size_t drop = 0; drop < 7; ++drop) {
            std::vector<std::size_t> k;
            for (std::size_t i = 0; i < 7; ++i)
                if (i != drop) k.push_back(i);
            if (!contains_information_set(scheme.star_code(), k)) ++failing;
        }
        CHECK(failing >= 1);
    }
}

TEST_CASE("randomized MatDot masking") {
    Field f = Field::prime(65537);
    SdmmScheme scheme = build_matdot(f, 2, 1, 6);
    Rng rng(31);
    Matrix a = Matrix::uniform_random(f, 2, 2, rng);
    Matrix b = Matrix::uniform_random(f, 2, 2, rng);

    SECTION("honest path is bit-identical after unmasking") {
        ShareSet shares = encode(scheme, a, b, rng);
        ResponseSet plain = honest_responses(shares);
        DiagonalMask mask = draw_mask(f, scheme.workers(), 2, 2, rng);
        ResponseSet masked = honest_responses(mask_shares(shares, mask, f));
        ResponseSet unmasked = unmask_responses(masked, mask, f);
        for (std::size_t i = 0; i < scheme.workers(); ++i)
            CHECK(*unmasked.responses[i] == *plain.responses[i]);
    }

    SECTION("uniform Z stays uniform under the mask (entry marginals)") {
        Field f5 = Field::prime(5);
        const std::size_t trials = 20000;
        std::array<std::array<std::size_t, 5>, 4> counts{};
        Rng mrng(101);
        for (std::size_t trial = 0; trial < trials; ++trial) {
            DiagonalMask mask = draw_mask(f5, 1, 2, 2, mrng);
            Matrix z = Matrix::uniform_random(f5, 2, 2, mrng);
            Matrix masked = detail::diag_scale_rows(f5, mask.u[0], z, false);
            masked = detail::diag_scale_cols(f5, masked, mask.v[0], false);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) ++counts[i * 2 + j][masked.at(i, j)];
        }
        // each entry marginal should be ~uniform: expect trials/5 per value
        const double expect = trials / 5.0;
        const double tol = 5.0 * std::sqrt(expect);  // five sigmas
        for (const auto& entry : counts)
            for (auto c : entry) CHECK(std::abs(static_cast<double>(c) - expect) < tol);
    }

    SECTION("adversarial all-ones Z gets i.i.d.-scaled rows and columns") {
        Field f5 = Field::prime(5);
        Matrix ones(f5, 2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) ones.at(i, j) = 1;
        const std::size_t trials = 20000;
        std::array<std::array<std::size_t, 5>, 4> counts{};
        Rng mrng(303);
        for (std::size_t trial = 0; trial < trials; ++trial) {
            DiagonalMask mask = draw_mask(f5, 1, 2, 2, mrng);
            Matrix masked = detail::diag_scale_rows(f5, mask.u[0], ones, false);
            masked = detail::diag_scale_cols(f5, masked, mask.v[0], false);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) ++counts[i * 2 + j][masked.at(i, j)];
        }
        // entries are u_i * v_j: uniform over the nonzero values, never zero
        const double expect = trials / 4.0;
        const double tol = 5.0 * std::sqrt(expect);
        for (const auto& entry : counts) {
            CHECK(entry[0] == 0);
            for (std::size_t v = 1; v < 5; ++v)
                CHECK(std::abs(static_cast<double>(entry[v]) - expect) < tol);
        }
    }
}

TEST_CASE("star-product bounds hold on every family's codes") {
    struct Entry {
        SdmmScheme scheme;
    };
    std::vector<Entry> entries;
    entries.push_back({build_matdot(Field::prime(101), 2, 1, 6)});
    entries.push_back({build_matdot(Field::prime(101), 1, 2, 7)});
    entries.push_back({build_dft(Field::prime(13), 2, 1)});
    entries.push_back({build_hermitian()});
    entries.push_back({build_gasp33x2(Field::prime((std::uint64_t(1) << 61) - 1), 7)});
    for (const auto& e : entries) {
        const auto& ca = e.scheme.code_a();
        const auto& cb = e.scheme.code_b();
        const auto& st = e.scheme.star_code();
        const std::size_t n = e.scheme.workers();
        // dimension lower bound whenever one factor is MDS and both have full support
        bool ca_mds = false, cb_mds = false, known = true;
        try {
            ca_mds = is_mds(ca);
            cb_mds = is_mds(cb);
        } catch (const TooLarge&) {
            known = false;
        }
        if (known && full_support(ca) && full_support(cb) && (ca_mds || cb_mds))
            CHECK(st.dim() >= star_dim_lower_bound(ca.dim(), cb.dim(), n));
        // distance upper bound whenever the distance is available
        try {
            CHECK(minimum_distance(st) <= product_singleton_bound(ca.dim(), cb.dim(), n));
        } catch (const TooLarge&) {
        }
    }
}

TEST_CASE("DFT N = 8: every proper subset fails, exhaustively") {
    Field f = Field::prime(17);  // 8 divides 16
    SdmmScheme scheme = build_dft(f, 4, 2);
    REQUIRE(scheme.workers() == 8);
    CHECK(recovery_threshold(scheme) == 8);
    for (std::uint32_t mask = 1; mask + 1 < (1u << 8); ++mask) {
        std::vector<std::size_t> k;
        for (std::size_t i = 0; i < 8; ++i)
            if (mask & (1u << i)) k.push_back(i);
        CHECK_FALSE(contains_information_set(scheme.star_code(), k));
    }
}

TEST_CASE("every family round-trips 100 random products") {
    struct Family {
        SdmmScheme scheme;
        std::size_t t, s, r;
    };
    std::vector<Family> families;
    families.push_back({build_matdot(Field::prime(101), 2, 1, 6), 2, 2, 2});
    families.push_back({build_dft(Field::prime(13), 2, 1), 2, 2, 2});
    families.push_back({build_hermitian(), 2, 2, 2});
    families.push_back({build_gasp33x2(Field::prime((std::uint64_t(1) << 61) - 1), 11), 3, 1, 3});
    for (auto& fam : families) {
        Rng rng(2025);
        for (int trial = 0; trial < 100; ++trial) {
            Matrix a = Matrix::uniform_random(fam.scheme.field(), fam.t, fam.s, rng);
            Matrix b = Matrix::uniform_random(fam.scheme.field(), fam.s, fam.r, rng);
            REQUIRE(decode(fam.scheme, honest_responses(encode(fam.scheme, a, b, rng))) == a * b);
        }
    }
}

TEST_CASE("collusion beyond half the workers is rejected at construction") {
    // X >= N/2 forces 2p + 2X - 1 > N for every p >= 1
    CHECK_THROWS_AS(build_matdot(Field::prime(101), 1, 3, 6), InvalidParams);
    CHECK_THROWS_AS(build_matdot(Field::prime(101), 2, 4, 8), InvalidParams);
    CHECK_THROWS_AS(build_dft(Field::prime(101), 0, 2), InvalidParams);  // p = 0 degenerate
}

TEST_CASE("X = 0 draws no randomness at all") {
    Field f = Field::prime(101);
    SdmmScheme scheme = build_matdot(f, 2, 0, 5);
    Rng r1(1), r2(999);
    Matrix a(f, 2, 2), b(f, 2, 2);
    a.set_row(0, {1, 2});
    a.set_row(1, {3, 4});
    b.set_row(0, {5, 6});
    b.set_row(1, {7, 8});
    ShareSet s1 = encode(scheme, a, b, r1);
    ShareSet s2 = encode(scheme, a, b, r2);
    for (std::size_t i = 0; i < scheme.workers(); ++i) {
        CHECK(s1.tilde_a[i] == s2.tilde_a[i]);  // seed-independent: nothing was drawn
        CHECK(s1.tilde_b[i] == s2.tilde_b[i]);
    }
}

TEST_CASE("recipe parsing") {
    SECTION("round trips") {
        SchemeRecipe r = parse_recipe("matdot:p=2,X=1,N=6");
        CHECK(r.family == SchemeFamily::matdot);
        CHECK(r.p == 2);
        CHECK(r.x == 1);
        CHECK(r.n == 6);
        CHECK(parse_recipe("gasp33x2:seed=7").seed == 7);
        CHECK(parse_recipe("dft:p=4,X=2").family == SchemeFamily::dft);
        CHECK(parse_recipe("hermitian").family == SchemeFamily::hermitian);
        CHECK(parse_recipe("rmatdot:p=2,X=1,N=8").family == SchemeFamily::randomized_matdot);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(parse_recipe("polydot:p=2"), InvalidParams);
        CHECK_THROWS_AS(parse_recipe("matdot:p=2"), InvalidParams);      // missing N
        CHECK_THROWS_AS(parse_recipe("matdot:p=2,zz=1,N=6"), InvalidParams);
        CHECK_THROWS_AS(parse_recipe("matdot:p=x,N=6"), InvalidParams);
    }
    SECTION("recipes build") {
        CHECK(build_from_recipe(parse_recipe("matdot:p=2,X=1,N=6")).family() == "matdot");
        CHECK(build_from_recipe(parse_recipe("hermitian")).workers() == 7);
        CHECK(build_from_recipe(parse_recipe("rmatdot:p=2,X=1,N=8")).family() == "rmatdot");
        CHECK(build_from_recipe(parse_recipe("dft:p=4,X=2")).workers() == 8);
    }
}
