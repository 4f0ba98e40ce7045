#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "sdmm/scheme.hpp"
#include "sdmm/schemes.hpp"

using namespace sdmm;

namespace {

std::vector<std::uint64_t> entry_vector(const std::vector<Matrix>& mats, std::size_t i, std::size_t j) {
    std::vector<std::uint64_t> v(mats.size());
    for (std::size_t w = 0; w < mats.size(); ++w) v[w] = mats[w].at(i, j);
    return v;
}

}  // namespace

TEST_CASE("grid partitioning") {
    Field f = Field::prime(11);

    SECTION("2x2 A with p = 2 (IPP) gives two column blocks") {
        Matrix a(f, 2, 2);
        a.set_row(0, {1, 2});
        a.set_row(1, {3, 4});
        PartitionSpec spec;
        spec.p = 2;
        auto blocks = partition_a(a, spec);
        REQUIRE(blocks.size() == 2);
        CHECK(blocks[0].rows() == 2);
        CHECK(blocks[0].cols() == 1);
        CHECK(blocks[0].at(0, 0) == 1);
        CHECK(blocks[1].at(0, 0) == 2);
    }

    SECTION("3x1 A with m = 3 (OPP) gives three 1x1 blocks") {
        Matrix a(f, 3, 1);
        a.at(0, 0) = 5; a.at(1, 0) = 6; a.at(2, 0) = 7;
        PartitionSpec spec;
        spec.m = 3;
        auto blocks = partition_a(a, spec);
        REQUIRE(blocks.size() == 3);
        CHECK(blocks[0].at(0, 0) == 5);
        CHECK(blocks[2].at(0, 0) == 7);
    }

    SECTION("4x4 with m = p = 2: row-major block order A11 A12 A21 A22") {
        Matrix a(f, 4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a.at(i, j) = (i / 2) * 2 + (j / 2);  // block id
        PartitionSpec spec;
        spec.m = spec.p = 2;
        auto blocks = partition_a(a, spec);
        REQUIRE(blocks.size() == 4);
        for (std::size_t b = 0; b < 4; ++b) {
            CHECK(blocks[b].rows() == 2);
            CHECK(blocks[b].at(0, 0) == b);
            CHECK(blocks[b].at(1, 1) == b);
        }
    }

    SECTION("B blocks are row-major over (j, k)") {
        Matrix b(f, 4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) b.at(i, j) = (i / 2) * 2 + (j / 2);
        PartitionSpec spec;
        spec.p = spec.n = 2;
        auto blocks = partition_b(b, spec);
        REQUIRE(blocks.size() == 4);
        for (std::size_t blk = 0; blk < 4; ++blk) CHECK(blocks[blk].at(0, 0) == blk);
    }

    SECTION("divisibility violations") {
        Matrix a(f, 3, 2);
        PartitionSpec spec;
        spec.m = 2;
        CHECK_THROWS_AS(partition_a(a, spec), ShapeError);
    }
}

TEST_CASE("encode") {
    SECTION("X = 0 with identity F: shares are the blocks themselves") {
        Field f = Field::prime(7);
        PartitionSpec part;
        part.p = 2;  // IPP, two blocks
        Matrix f_gen = Matrix::identity(f, 2);
        Matrix g_gen = Matrix::identity(f, 2);
        SdmmScheme scheme(f, part, 0, f_gen, g_gen, "plain");
        Matrix a(f, 1, 2), b(f, 2, 1);
        a.set_row(0, {3, 4});
        b.at(0, 0) = 5; b.at(1, 0) = 6;
        Rng rng(1);
        ShareSet shares = encode(scheme, a, b, rng);
        CHECK(shares.tilde_a[0].at(0, 0) == 3);
        CHECK(shares.tilde_a[1].at(0, 0) == 4);
        CHECK(shares.tilde_b[0].at(0, 0) == 5);
        CHECK(shares.tilde_b[1].at(0, 0) == 6);
        // and decoding reproduces the inner product
        CHECK(decode(scheme, honest_responses(shares)).at(0, 0) == (3 * 5 + 4 * 6) % 7);
    }

    SECTION("secure MatDot p=1, X=1 on 1x1 matrices: share i = A + R * alpha_i") {
        Field f = Field::prime(5);
        SdmmScheme scheme = build_matdot(f, 1, 1, 3);  // alpha = 1, 2, 3
        Matrix a(f, 1, 1), b(f, 1, 1);
        a.at(0, 0) = 2;
        b.at(0, 0) = 4;
        Rng rng(9);
        ShareSet shares = encode(scheme, a, b, rng);
        // recover R from share 1 (alpha = 1): R = share - A
        const std::uint64_t r = f.sub(shares.tilde_a[0].at(0, 0), 2);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(shares.tilde_a[i].at(0, 0) == f.add(2, f.mul(r, i + 1)));
    }

    SECTION("share entry-vectors lie in C_A and C_B") {
        Field f = Field::prime(101);
        SdmmScheme scheme = build_matdot(f, 2, 1, 6);
        Rng rng(33);
        for (int trial = 0; trial < 20; ++trial) {
            Matrix a = Matrix::uniform_random(f, 2, 4, rng);
            Matrix b = Matrix::uniform_random(f, 4, 2, rng);
            ShareSet shares = encode(scheme, a, b, rng);
            for (std::size_t i = 0; i < shares.tilde_a[0].rows(); ++i)
                for (std::size_t j = 0; j < shares.tilde_a[0].cols(); ++j)
                    CHECK(scheme.code_a().contains(entry_vector(shares.tilde_a, i, j)));
            for (std::size_t i = 0; i < shares.tilde_b[0].rows(); ++i)
                for (std::size_t j = 0; j < shares.tilde_b[0].cols(); ++j)
                    CHECK(scheme.code_b().contains(entry_vector(shares.tilde_b, i, j)));
        }
    }

    SECTION("shape violations") {
        Field f = Field::prime(101);
        SdmmScheme scheme = build_matdot(f, 2, 1, 6);
        Rng rng(1);
        Matrix a(f, 2, 3);  // 2 does not divide 3
        Matrix b(f, 3, 2);
        CHECK_THROWS_AS(encode(scheme, a, b, rng), ShapeError);
        Matrix a2(f, 2, 4), b2(f, 2, 2);  // inner mismatch
        CHECK_THROWS_AS(encode(scheme, a2, b2, rng), ShapeError);
    }
}

TEST_CASE("honest responses live in the star code") {
    Field f = Field::prime(101);
    SdmmScheme scheme = build_matdot(f, 2, 1, 6);
    Rng rng(41);

    SECTION("entry-vectors of C lie in C_A * C_B") {
        Matrix a = Matrix::uniform_random(f, 2, 2, rng);
        Matrix b = Matrix::uniform_random(f, 2, 2, rng);
        ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                std::vector<std::uint64_t> v(scheme.workers());
                for (std::size_t w = 0; w < scheme.workers(); ++w) v[w] = resp.responses[w]->at(i, j);
                CHECK(scheme.star_code().contains(v));
            }
    }

    SECTION("zero A: responses lie in Mat(C_A^sec * C_B)") {
        Matrix a(f, 2, 2);  // zero
        Matrix b = Matrix::uniform_random(f, 2, 2, rng);
        ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
        LinearCode sec_star = star_product(scheme.code_a_sec(), scheme.code_b());
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                std::vector<std::uint64_t> v(scheme.workers());
                for (std::size_t w = 0; w < scheme.workers(); ++w) v[w] = resp.responses[w]->at(i, j);
                CHECK(sec_star.contains(v));
            }
    }
}

TEST_CASE("decode") {
    Field f = Field::prime(101);
    SdmmScheme scheme = build_matdot(f, 2, 1, 6);  // R = 5
    Rng rng(55);

    SECTION("full responses decode to AB (oracle: direct product)") {
        for (int trial = 0; trial < 100; ++trial) {
            Matrix a = Matrix::uniform_random(f, 2, 2, rng);
            Matrix b = Matrix::uniform_random(f, 2, 2, rng);
            CHECK(decode(scheme, honest_responses(encode(scheme, a, b, rng))) == a * b);
        }
    }

    SECTION("any 5 responses suffice; 4 throw") {
        Matrix a = Matrix::uniform_random(f, 2, 2, rng);
        Matrix b = Matrix::uniform_random(f, 2, 2, rng);
        ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
        const Matrix oracle = a * b;
        for (std::size_t drop = 0; drop < 6; ++drop) {
            std::vector<std::size_t> k;
            for (std::size_t i = 0; i < 6; ++i) {
                if (i != drop) k.push_back(i);
            }
            CHECK(decode(scheme, resp, k) == oracle);
        }
        CHECK_THROWS_AS(decode(scheme, resp, std::vector<std::size_t>{0, 1, 2, 3}), InsufficientResponses);
    }

    SECTION("randomness independence: same product under fresh paddings") {
        Matrix a = Matrix::uniform_random(f, 2, 2, rng);
        Matrix b = Matrix::uniform_random(f, 2, 2, rng);
        const Matrix expected = a * b;
        for (int reenc = 0; reenc < 10; ++reenc) {
            Rng fresh(1000 + reenc);
            CHECK(decode(scheme, honest_responses(encode(scheme, a, b, fresh))) == expected);
        }
    }

    SECTION("some size R-1 subset fails (definition of R)") {
        Matrix a = Matrix::uniform_random(f, 2, 2, rng);
        Matrix b = Matrix::uniform_random(f, 2, 2, rng);
        ResponseSet resp = honest_responses(encode(scheme, a, b, rng));
        std::size_t failures = 0;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = i + 1; j < 6; ++j) {
                std::vector<std::size_t> k;
                for (std::size_t w = 0; w < 6; ++w)
                    if (w != i && w != j) k.push_back(w);
                try {
                    decode(scheme, resp, k);
                } catch (const InsufficientResponses&) {
                    ++failures;
                }
            }
        CHECK(failures >= 1);
    }
}

TEST_CASE("derive_lambda properties") {
    SECTION("monomial solver rejects an undecodable construction") {
        // all shares proportional: the needed functionals cannot be separated
        Field f = Field::prime(7);
        PartitionSpec part;
        part.p = 2;
        Matrix gen(f, 2, 3);
        gen.set_row(0, {1, 1, 1});
        gen.set_row(1, {1, 1, 1});
        CHECK_THROWS_AS(SdmmScheme(f, part, 0, gen, gen, "broken"), NotDecodable);
    }

    SECTION("lambda is padding-independent by construction") {
        Field f = Field::prime(101);
        SdmmScheme scheme = build_matdot(f, 1, 2, 5);
        Rng rng(2);
        Matrix a = Matrix::uniform_random(f, 1, 1, rng);
        Matrix b = Matrix::uniform_random(f, 1, 1, rng);
        const Matrix oracle = a * b;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Rng r2(seed);
            CHECK(decode(scheme, honest_responses(encode(scheme, a, b, r2))) == oracle);
        }
    }
}

TEST_CASE("is_x_secure") {
    SECTION("secure MatDot is SecureByMds") {
        CHECK(is_x_secure(build_matdot(Field::prime(101), 2, 1, 6)) == SecurityVerdict::secure_by_mds);
        CHECK(is_x_secure(build_matdot(Field::prime(101), 1, 2, 6)) == SecurityVerdict::secure_by_mds);
    }

    SECTION("X exceeding the security subcode dimension is insecure (duplicate padding rows)") {
        // F = G: rows {1, alpha, alpha} -- declared X = 2 but dim C^sec = 1
        Field f = Field::prime(11);
        Matrix gen(f, 3, 5);
        for (std::size_t i = 0; i < 5; ++i) {
            gen.at(0, i) = 1;
            gen.at(1, i) = i + 1;
            gen.at(2, i) = i + 1;
        }
        PartitionSpec part;  // p = m = n = 1
        SdmmScheme scheme(f, part, 2, gen, gen, "degenerate");
        CHECK(scheme.code_a_sec().dim() == 1);
        CHECK(is_x_secure(scheme) == SecurityVerdict::insecure_proven);
    }

    SECTION("non-MDS security subcode under the dual-distance hypothesis is insecure") {
        // Padding rows w = x(x-1)(x-2) and x^3 are constant-free, so every
        // product monomial touching the padding misses the constant term and
        // the scheme stays decodable; but w vanishes at two evaluation
        // points, giving the security subcode a weight-(N-2) word: not MDS.
        Field f = Field::prime(11);
        const std::size_t n = 8;
        Matrix gen(f, 3, n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t x = i + 1;
            gen.at(0, i) = 1;
            gen.at(1, i) = f.mul(x, f.mul(f.sub(x, 1), f.sub(x, 2)));
            gen.at(2, i) = f.pow(x, 3);
        }
        PartitionSpec part;  // p = m = n = 1
        SdmmScheme scheme(f, part, 2, gen, gen, "nonmds-sec");
        CHECK(scheme.code_a_sec().dim() == 2);
        CHECK_FALSE(is_mds(scheme.code_a_sec()));
        CHECK(minimum_distance(scheme.code_a_sec()) <= n - 2);  // the weight-(N-2) word
        CHECK(is_x_secure(scheme) == SecurityVerdict::insecure_proven);
    }

    SECTION("X = 0 testing mode is never secure") {
        Field f = Field::prime(7);
        PartitionSpec part;
        part.p = 2;
        SdmmScheme scheme(f, part, 0, Matrix::identity(f, 2), Matrix::identity(f, 2), "plain");
        CHECK(is_x_secure(scheme) == SecurityVerdict::insecure_proven);
    }
}

TEST_CASE("bounds report") {
    SECTION("secure MatDot (p=2, X=1) meets the straggler-tolerant bound") {
        BoundsReport rep = bounds_report(1, 1, 2, 1, 6, true, true);
        REQUIRE(rep.rows.size() == 3);
        CHECK(rep.rows[1].name == "straggler-tolerant");
        CHECK(rep.rows[1].value == 5);
        CHECK(rep.rows[1].applicable);
    }

    SECTION("DFT (m=n=1) meets the MDS-security bound with R = N = p + 2X") {
        for (std::size_t p = 1; p <= 4; ++p)
            for (std::size_t x = 1; x <= 2; ++x) {
                BoundsReport rep = bounds_report(1, 1, p, x, p + 2 * x, true, false);
                CHECK(rep.rows[2].value == p + 2 * x);
            }
    }

    SECTION("GASP point (3,3,1,2): bound 15 below the scheme's R = 18") {
        BoundsReport rep = bounds_report(3, 3, 1, 2, 18, true, true);
        CHECK(rep.rows[2].value == 9 + 3 + 4 - 1);
        CHECK(rep.rows[2].value <= 18);
        CHECK(rep.rows[0].value == std::min<std::size_t>(18, 6 + 4 - 1));
    }

    SECTION("collusion cap flags X >= N/2") {
        CHECK(bounds_report(1, 1, 1, 3, 6, true, false).collusion_cap_ok == false);
        CHECK(bounds_report(1, 1, 1, 2, 6, true, false).collusion_cap_ok == true);
    }
}

TEST_CASE("communication cost formula") {
    // N(ts/mp + sr/pn) + R tr/mn with small concrete dims
    CHECK(communication_cost(6, 5, 2, 2, 2, 1, 1, 2) == 6 * (4 / 2 + 4 / 2) + 5 * 4);
    CHECK(communication_cost(18, 18, 3, 1, 3, 3, 3, 1) == 18 * (3 / 3 + 3 / 3) + 18 * 9 / 9);
}

TEST_CASE("theorem bounds never exceed measured R on constructed schemes") {
    struct Case {
        SdmmScheme scheme;
        bool tolerates;
    };
    std::vector<Case> cases;
    cases.push_back({build_matdot(Field::prime(101), 2, 1, 6), true});
    cases.push_back({build_matdot(Field::prime(101), 1, 2, 7), true});
    cases.push_back({build_dft(Field::prime(13), 2, 1), false});
    cases.push_back({build_hermitian(), false});
    for (const auto& c : cases) {
        const auto& part = c.scheme.partition();
        const std::size_t r = recovery_threshold(c.scheme);
        const bool sec_mds = is_x_secure(c.scheme) == SecurityVerdict::secure_by_mds;
        BoundsReport rep = bounds_report(part.m, part.n, part.p, c.scheme.security_param(),
                                         c.scheme.workers(), sec_mds, c.tolerates);
        for (const auto& row : rep.rows) {
            if (row.applicable) CHECK(row.value <= r);
        }
    }
}
