/*
 * galois.hpp
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

#include <array>
#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "sdmm/errors.hpp"

namespace sdmm {

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 acc = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) acc = mulmod(acc, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return acc;
}

// Deterministic Miller-Rabin; this witness set is exact for all n < 3.3e24.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

inline u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            u64 diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
        ++c;  // cycle hit the full modulus, retry with a new offset
    }
}

// Distinct prime factors, ascending.
inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    std::vector<u64> stack{n};
    while (!stack.empty()) {
        u64 v = stack.back();
        stack.pop_back();
        if (v < 2) continue;
        if (is_prime_u64(v)) {
            out.push_back(v);
            continue;
        }
        u64 d = pollard_rho(v);
        stack.push_back(d);
        stack.push_back(v / d);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// GF(4) = {0, 1, w, w^2} indexed 0..3 with w^2 = w + 1.  Addition is the
// XOR of the GF(2)[x] bit patterns; multiplication is tabulated.
inline constexpr std::array<std::array<u64, 4>, 4> kGf4Mul = {{
    {0, 0, 0, 0},
    {0, 1, 2, 3},
    {0, 2, 3, 1},
    {0, 3, 1, 2},
}};
inline constexpr std::array<u64, 4> kGf4Inv = {0, 1, 3, 2};

inline bool gf4_tables_consistent() {
    auto add = [](u64 a, u64 b) { return a ^ b; };
    auto mul = [](u64 a, u64 b) { return kGf4Mul[a][b]; };
    for (u64 a = 0; a < 4; ++a) {
        if (add(a, 0) != a || mul(a, 1) != a) return false;
        if (add(a, a) != 0) return false;  // characteristic 2
        if (a != 0 && mul(a, kGf4Inv[a]) != 1) return false;
        for (u64 b = 0; b < 4; ++b) {
            if (mul(a, b) != mul(b, a) || add(a, b) != add(b, a)) return false;
            for (u64 c = 0; c < 4; ++c) {
                if (mul(a, mul(b, c)) != mul(mul(a, b), c)) return false;
                if (add(a, add(b, c)) != add(add(a, b), c)) return false;
                if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c))) return false;
            }
        }
    }
    // w^2 = w + 1 and w^3 = 1
    if (mul(2, 2) != add(2, 1)) return false;
    if (mul(2, mul(2, 2)) != 1) return false;
    return true;
}

}  // namespace detail

class FieldElement;

/// A finite field: either GF(p) for a prime p < 2^61 (products of canonical
/// representatives then fit in 128-bit intermediates), or the fixed four
/// element field GF(4) used by the Hermitian-curve construction.
///
/// Field is a small value type: two Field objects compare equal iff they
/// describe the same field, so copies are interchangeable.  All element
/// operations work on canonical raw representatives (integers in [0, p) for
/// prime fields, table indices in {0..3} for GF(4)).
class Field {
  public:
    enum class Kind : std::uint8_t { prime, gf4 };

    static constexpr std::uint64_t kMaxPrime = (std::uint64_t(1) << 61) - 1;

    static Field prime(std::uint64_t p) {
        if (p > kMaxPrime) throw InvalidParams("prime modulus must be < 2^61");
        if (!detail::is_prime_u64(p)) throw InvalidParams("modulus " + std::to_string(p) + " is not prime");
        return Field(Kind::prime, p);
    }

    static Field gf4() {
        static const bool ok = detail::gf4_tables_consistent();
        if (!ok) throw std::logic_error("GF(4) tables violate the field axioms");
        return Field(Kind::gf4, 4);
    }

    Kind kind() const { return kind_; }
    std::uint64_t order() const { return q_; }
    std::uint64_t characteristic() const { return kind_ == Kind::gf4 ? 2 : q_; }

    bool operator==(const Field& o) const { return kind_ == o.kind_ && q_ == o.q_; }
    bool operator!=(const Field& o) const { return !(*this == o); }

    // --- arithmetic on canonical raw values -------------------------------

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (kind_ == Kind::gf4) return a ^ b;
        std::uint64_t s = a + b;  // no overflow: a, b < 2^61
        return s >= q_ ? s - q_ : s;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        if (kind_ == Kind::gf4) return a ^ b;
        return a >= b ? a - b : a + q_ - b;
    }

    std::uint64_t neg(std::uint64_t a) const {
        if (kind_ == Kind::gf4) return a;
        return a == 0 ? 0 : q_ - a;
    }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        if (kind_ == Kind::gf4) return detail::kGf4Mul[a][b];
        return detail::mulmod(a, b, q_);
    }

    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw DivisionByZero("inverse of zero");
        if (kind_ == Kind::gf4) return detail::kGf4Inv[a];
        return detail::powmod(a, q_ - 2, q_);  // Fermat
    }

    std::uint64_t div(std::uint64_t a, std::uint64_t b) const { return mul(a, inv(b)); }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        if (kind_ == Kind::gf4) {
            if (a == 0) return e == 0 ? 1 : 0;
            // nonzero elements have order dividing 3
            std::uint64_t acc = 1;
            for (std::uint64_t i = 0, r = e % 3; i < r; ++i) acc = mul(acc, a);
            return acc;
        }
        return detail::powmod(a, e, q_);
    }

    /// Canonicalize an unsigned value: reduced mod p for prime fields; GF(4)
    /// has no natural integer embedding, so values must already be indices.
    std::uint64_t canonical(std::uint64_t v) const {
        if (kind_ == Kind::gf4) {
            if (v >= 4) throw InvalidParams("GF(4) elements are indices 0..3");
            return v;
        }
        return v % q_;
    }

    FieldElement element(std::uint64_t v) const;
    FieldElement zero() const;
    FieldElement one() const;

    std::string name() const {
        return kind_ == Kind::gf4 ? "gf4" : "gf(" + std::to_string(q_) + ")";
    }

  private:
    Field(Kind k, std::uint64_t q) : kind_(k), q_(q) {}

    Kind kind_;
    std::uint64_t q_;
};

inline void require_same_field(const Field& a, const Field& b) {
    if (a != b) throw FieldMismatch("elements of distinct fields must not mix");
}

/// One element of a Field, always held in canonical form.
class FieldElement {
  public:
    FieldElement(const Field& f, std::uint64_t v) : field_(f), v_(f.canonical(v)) {}

    const Field& field() const { return field_; }
    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    FieldElement operator+(const FieldElement& o) const {
        require_same_field(field_, o.field_);
        return raw(field_, field_.add(v_, o.v_));
    }
    FieldElement operator-(const FieldElement& o) const {
        require_same_field(field_, o.field_);
        return raw(field_, field_.sub(v_, o.v_));
    }
    FieldElement operator*(const FieldElement& o) const {
        require_same_field(field_, o.field_);
        return raw(field_, field_.mul(v_, o.v_));
    }
    FieldElement operator/(const FieldElement& o) const {
        require_same_field(field_, o.field_);
        return raw(field_, field_.div(v_, o.v_));
    }
    FieldElement operator-() const { return raw(field_, field_.neg(v_)); }

    FieldElement inverse() const { return raw(field_, field_.inv(v_)); }
    FieldElement pow(std::uint64_t e) const { return raw(field_, field_.pow(v_, e)); }

    bool operator==(const FieldElement& o) const {
        require_same_field(field_, o.field_);
        return v_ == o.v_;
    }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    friend std::ostream& operator<<(std::ostream& os, const FieldElement& e) { return os << e.v_; }

  private:
    static FieldElement raw(const Field& f, std::uint64_t canonical) {
        FieldElement e(f);
        e.v_ = canonical;
        return e;
    }
    explicit FieldElement(const Field& f) : field_(f), v_(0) {}

    Field field_;
    std::uint64_t v_;
};

inline FieldElement Field::element(std::uint64_t v) const { return FieldElement(*this, v); }
inline FieldElement Field::zero() const { return FieldElement(*this, 0); }
inline FieldElement Field::one() const { return FieldElement(*this, kind_ == Kind::gf4 ? 1 : 1 % q_); }

/// Smallest multiplicative generator of GF(q)^x.  Needs the factorization of
/// q - 1, hence the Pollard-rho machinery above.
inline std::uint64_t smallest_generator(const Field& field) {
    if (field.kind() == Field::Kind::gf4) return 2;  // w generates the order-3 unit group
    const std::uint64_t p = field.order();
    if (p == 2) return 1;
    const auto factors = detail::prime_factors(p - 1);
    for (std::uint64_t g = 2; g < p; ++g) {
        bool generates = true;
        for (std::uint64_t r : factors) {
            if (detail::powmod(g, (p - 1) / r, p) == 1) {
                generates = false;
                break;
            }
        }
        if (generates) return g;
    }
    throw std::logic_error("no generator found in a field of prime order");
}

/// Deterministic primitive N-th root of unity: g^((q-1)/N) for the smallest
/// generator g.  Throws NoRootOfUnity when N does not divide q - 1.
inline FieldElement primitive_root_of_unity(const Field& field, std::uint64_t n) {
    if (n == 0) throw InvalidParams("root-of-unity order must be positive");
    const std::uint64_t units = field.order() - 1;
    if (units % n != 0)
        throw NoRootOfUnity(std::to_string(n) + " does not divide " + std::to_string(units));
    const std::uint64_t g = smallest_generator(field);
    return field.element(field.pow(g, units / n));
}

}  // namespace sdmm
