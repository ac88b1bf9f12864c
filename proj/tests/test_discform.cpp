#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "jacobi/cyclotomic.hpp"
#include "jacobi/discform.hpp"
#include "jacobi/errors.hpp"

using namespace jacobi;

TEST_CASE("make_D values") {
    auto d1 = make_D(1, 1);
    CHECK(d1.q_value({0}) == QmodZ(0, 1));
    CHECK(d1.q_value({1}) == QmodZ(1, 4));
    CHECK(make_D(9, -1).q_value({3}) == QmodZ(3, 4));
    CHECK(make_D(2, 3).q_value({1}) == QmodZ(3, 8));
    CHECK_THROWS_AS(make_D(3, 3), Error);
    CHECK(d1.str() == "D_1(1)");
}

TEST_CASE("make_L values") {
    CHECK(make_L(9, 1).q_value({3}) == QmodZ(0, 1));
    CHECK(make_L(3, 2).q_value({1}) == QmodZ(2, 3));
    auto l1 = make_L(1, 1);
    CHECK(l1.order() == 1);
    CHECK(l1.q_value({0}).is_zero());
    try {
        make_L(4, 1);
        FAIL("expected EvenModulus");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EvenModulus);
    }
    CHECK_THROWS_AS(make_L(9, 3), Error);
}

TEST_CASE("bilinear form") {
    CHECK(make_D(1, 1).b_value({1}, {1}) == QmodZ(1, 2));
    CHECK(make_L(9, 1).b_value({1}, {3}) == QmodZ(2, 3));
    auto f = direct_sum(make_D(3, 5), make_L(5, 2));
    for (i64 x = 0; x < f.order(); ++x) {
        CHECK(f.b_value(f.element(x), f.element(0)).is_zero());
        for (i64 y = 0; y < f.order(); ++y) {
            QmodZ b = f.q_value(f.element(f.add(x, y))) - f.q_value(f.element(x)) - f.q_value(f.element(y));
            CHECK(b == f.b_value(f.element(x), f.element(y)));
            CHECK(f.b_num(x, y) == b.num * (f.level() / b.den));
        }
        CHECK(f.q_num(x) * 1 == f.q_value(f.element(x)).num * (f.level() / f.q_value(f.element(x)).den));
        CHECK(f.q_value(f.element(f.scale(x, 3))) == f.q_value(f.element(x)).scaled(9));
    }
}

TEST_CASE("level") {
    CHECK(make_D(1, 1).level() == 4);
    CHECK(make_L(9, 1).level() == 9);
    CHECK(make_L(1, 1).level() == 1);
    for (i64 m = 1; m <= 12; ++m) CHECK(make_D(m, 1).level_exhaustive() == make_D(m, 1).level());
}

TEST_CASE("p-part decomposition coefficients") {
    auto d1 = p_part_decompose(1);
    REQUIRE(d1.size() == 1);
    CHECK(d1[0].second == factor_D(1, 1));
    auto d9 = p_part_decompose(9);
    REQUIRE(d9.size() == 2);
    CHECK(d9[0].second == factor_D(1, 1));
    CHECK(d9[1].second == factor_L(9, 7));
    auto d6 = p_part_decompose(6);
    CHECK(d6[0].second == factor_D(2, 3));
    CHECK(d6[1].second == factor_L(3, 2));
}

TEST_CASE("p-part decomposition preserves Q pointwise") {
    for (i64 m = 1; m <= 60; ++m)
        for (i64 a : {1, -1}) {
            auto parts = p_part_decompose(m, a);
            auto f = make_D(m, a);
            for (i64 g = 0; g < 2 * m; ++g) {
                QmodZ s;
                for (auto& [p, c] : parts) s = s + c.q(g);
                CHECK(s == f.q_value({g}));
            }
        }
}

TEST_CASE("non-degeneracy") {
    std::vector<DiscriminantForm> forms = {make_D(1, 1), make_D(4, 3), make_L(9, 2), make_L(25, 1),
                                           direct_sum(make_D(2, 1), make_L(3, 1)), direct_sum(make_L(9, 1), make_L(3, 2))};
    for (auto& f : forms)
        for (i64 x = 1; x < f.order(); ++x) {
            bool found = false;
            for (i64 y = 0; y < f.order() && !found; ++y) found = f.b_num(x, y) != 0;
            CHECK(found);
        }
}

TEST_CASE("closed signatures") {
    CHECK(signature_closed(factor_L(5, 1)) == 0);
    CHECK(signature_closed(factor_L(3, 1)) == 2);
    CHECK(signature_closed(factor_D(2, 1)) == 1);
    CHECK(signature_closed(factor_L(1, 1)) == 0);
    CHECK_THROWS_AS(signature_closed(factor_D(3, 1)), Error);
}

TEST_CASE("Milgram signatures") {
    for (i64 m = 1; m <= 20; ++m) CHECK(signature_milgram(make_D(m, 1)) == 1);
    CHECK(signature_milgram(make_L(1, 1)) == 0);
    CHECK(signature_milgram(direct_sum(make_D(1, 1), make_D(1, 1))) == 2);
}

TEST_CASE("Milgram agrees with closed form on random sums") {
    std::mt19937 rng(2024);
    int done = 0;
    while (done < 120) {
        std::vector<CyclicFactor> fs;
        int nf = 1 + static_cast<int>(rng() % 3);
        i64 ord = 1;
        for (int i = 0; i < nf; ++i) {
            bool isD = rng() % 2;
            i64 m = isD ? 1 + static_cast<i64>(rng() % 24) : 1 + 2 * static_cast<i64>(rng() % 13);
            i64 mod_ = isD ? 4 * m : m;
            i64 a = static_cast<i64>(rng() % mod_);
            if (gcd(a, isD ? 2 * m : m) != 1) continue;
            fs.push_back(isD ? factor_D(m, a) : factor_L(m, a));
            ord *= fs.back().order();
        }
        if (fs.empty() || ord > 500) continue;
        DiscriminantForm f(fs);
        CHECK_MESSAGE(signature_closed(f) == signature_milgram(f), f.str());
        ++done;
    }
}
