#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "jacobi/arith.hpp"
#include "jacobi/cyclotomic.hpp"
#include "jacobi/errors.hpp"

using namespace jacobi;

namespace {

// Legendre symbol by listing squares.
int legendre_brute(i64 a, i64 p) {
    a = mod(a, p);
    if (a == 0) return 0;
    for (i64 x = 1; x < p; ++x)
        if (x * x % p == a) return 1;
    return -1;
}

}  // namespace

TEST_CASE("kronecker small values") {
    CHECK(kronecker(-1, 3) == -1);
    CHECK(kronecker(-2, 7) == -1);
    for (i64 a = -20; a <= 20; ++a) CHECK(kronecker(a, 1) == 1);
    for (i64 p : {3, 5, 7, 11, 13, 17})
        for (i64 a = -30; a <= 30; ++a) CHECK(kronecker(a, p) == legendre_brute(a, p));
}

TEST_CASE("kronecker multiplicative and rule at 2") {
    for (i64 n = 1; n <= 50; ++n)
        for (i64 a = -50; a <= 50; ++a)
            for (i64 b = -50; b <= 50; b += 7) CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
    for (i64 a = -40; a <= 40; ++a) {
        int want = (a % 2 == 0) ? 0 : ((mod(a, 8) == 1 || mod(a, 8) == 7) ? 1 : -1);
        CHECK(kronecker(a, 2) == want);
    }
    CHECK(kronecker(-1, -1) == -1);
    CHECK(kronecker(1, 0) == 1);
    CHECK(kronecker(2, 0) == 0);
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(3, 8) == 3);
    CHECK(mod_inverse(1, 7) == 1);
    i64 want = -1;
    for (i64 b = 1; b < 27; ++b)
        if (5 * b % 27 == 1) want = b;
    CHECK(mod_inverse(5, 27) == want);
    CHECK_THROWS_AS(mod_inverse(6, 27), Error);
}

TEST_CASE("factorize") {
    auto f = factorize(36);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == std::make_pair(u64{2}, 2));
    CHECK(f.factors[1] == std::make_pair(u64{3}, 2));
    CHECK(factorize(1).factors.empty());
    u64 n = u64{64} * 27 * 125 * 343;
    auto g = factorize(n);
    REQUIRE(g.factors.size() == 4);
    CHECK(g.value() == n);
    CHECK(g.exponent(7) == 3);
    u64 big = u64{1000000007} * u64{998244353};
    auto h = factorize(big);
    REQUIRE(h.factors.size() == 2);
    CHECK(h.factors[0].first == u64{998244353});
}

TEST_CASE("cyc_e and arithmetic") {
    CHECK(cyc_e(QmodZ(0, 1), 12) == CycScalar::from_int(1, 12));
    CHECK(cyc_e(QmodZ(1, 2), 2) == CycScalar::from_int(-1, 2));
    CycScalar z = cyc_e(QmodZ(1, 8), 8), p = CycScalar::from_int(1, 8);
    for (int i = 0; i < 8; ++i) p *= z;
    CHECK(p == CycScalar::from_int(1, 8));
    CHECK_THROWS_AS(cyc_e(QmodZ(1, 3), 8), Error);
    CHECK(cyc_e(QmodZ(1, 3), 3) + cyc_e(QmodZ(2, 3), 3) == CycScalar::from_int(-1, 3));
    CycScalar i = cyc_e(QmodZ(1, 4), 4);
    CHECK(i * i == CycScalar::from_int(-1, 4));
    CHECK((CycScalar::from_int(1, 5) - CycScalar::from_int(1, 5)).is_zero());
    CHECK(cyc_e(QmodZ(1, 5), 5).conj() == cyc_e(QmodZ(4, 5), 5));
}

TEST_CASE("canonical products of roots") {
    std::mt19937 rng(7);
    for (int it = 0; it < 300; ++it) {
        int L = 1 + static_cast<int>(rng() % 60);
        i64 a = rng() % L, b = rng() % L;
        CHECK(cyc_e(QmodZ(a, L), L) * cyc_e(QmodZ(b, L), L) == cyc_e(QmodZ((a + b) % L, L), L));
    }
}

TEST_CASE("conjugation is multiplicative and inverse works") {
    CycScalar x = CycScalar::root(1, 21) + CycScalar::from_int(3, 21) - CycScalar::root(5, 21).scaled(2);
    CycScalar y = CycScalar::root(7, 21) - CycScalar::root(2, 21);
    CHECK((x * y).conj() == x.conj() * y.conj());
    CHECK(x * x.inverse() == CycScalar::from_int(1, 21));
}

TEST_CASE("quadratic Gauss sums") {
    CycScalar g4 = quadratic_gauss_sum(1, 4);
    CHECK(g4 == CycScalar::from_int(2, 4) + CycScalar::root(1, 4).scaled(2));
    CHECK(quadratic_gauss_sum(1, 3) == CycScalar::root(1, 3) - CycScalar::root(2, 3));
    CHECK(quadratic_gauss_sum(1, 1) == CycScalar::from_int(1, 1));
}

TEST_CASE("Gauss sums at odd prime powers") {
    // G(b, p^m) = (b/p) * G(1,p) * p^{(m-1)/2} for odd m
    for (i64 p : {3, 5, 7, 11, 13})
        for (int m : {1, 3}) {
            if (ipow(p, m) > 400) continue;
            i64 M = ipow(p, m);
            CycScalar g1 = quadratic_gauss_sum(1, p, static_cast<int>(M));
            for (i64 b = 1; b < p; ++b) {
                CycScalar want = g1.scaled(mpq_class(static_cast<long>(kronecker(b, p) * ipow(p, (m - 1) / 2))));
                CHECK(quadratic_gauss_sum(b, M) == want);
            }
        }
}

TEST_CASE("exact square roots") {
    for (i64 n : {2, 3, 5, 6, 7, 12, 18, 45, 98}) {
        int L = sqrt_conductor(n);
        CycScalar r = exact_sqrt(n, L);
        CHECK(r * r == CycScalar::from_int(n, L));
        CHECK(r.to_complex().real() > 0);
    }
}
