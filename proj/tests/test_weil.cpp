#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "jacobi/errors.hpp"
#include "jacobi/weil.hpp"

using namespace jacobi;

namespace {

CycScalar E(i64 num, i64 den, int L) { return cyc_e(QmodZ(num, den), L); }

std::vector<DiscriminantForm> small_forms() {
    std::vector<DiscriminantForm> out;
    for (i64 m = 1; m <= 16; ++m)
        for (i64 a = 1; a < 4 * m; a += 2)
            if (gcd(a, 2 * m) == 1 && (a == 1 || a == 4 * m - 1 || (a < 8 && m >= 2))) out.push_back(make_D(m, a));
    for (i64 n = 1; n <= 63; n += 2)
        for (i64 b : {1, 2})
            if (gcd(b, n) == 1) out.push_back(make_L(n, b));
    out.push_back(direct_sum(make_D(1, 1), make_D(1, 1)));
    out.push_back(direct_sum(make_D(2, 3), make_L(3, 1)));
    out.push_back(direct_sum(make_L(3, 1), make_L(9, 2)));
    out.push_back(direct_sum(make_D(1, 3), make_D(4, 1)));
    return out;
}

}  // namespace

TEST_CASE("T action") {
    WeilRep w(make_D(1, 1));
    int L = w.conductor();
    CHECK(w.T(w.basis(1)) == w.basis(1).scaled(E(1, 4, L)));
    CHECK(w.T(w.basis(0)) == w.basis(0));
    WeilRep l(make_L(9, 7));
    CHECK(l.T(l.basis(3)) == l.basis(3));
}

TEST_CASE("S action examples") {
    WeilRep w(make_D(1, 1));
    int L = w.conductor();
    CycScalar r2 = exact_sqrt(2, L);
    FormVector want = (w.basis(0) + w.basis(1)).scaled(E(-1, 8, L) * r2.inverse());
    CHECK(w.S(w.basis(0)) == want);
    CHECK(w.S(w.S(w.basis(0))) == w.basis(0).scaled(E(-1, 4, L)));
    WeilRep t(make_L(1, 1));
    CHECK(t.S(t.basis(0)) == t.basis(0));
    CHECK(t.Z(t.basis(0)) == t.basis(0));
}

TEST_CASE("Z action") {
    WeilRep w(make_L(3, 1));
    CHECK(w.signature() == 2);
    // e(-sign/4) = e(-1/2) = -1
    CHECK(w.Z(w.basis(1)) == w.basis(2).scaled(CycScalar::from_int(-1, w.conductor())));
    WeilRep w12(make_L(3, 1), 12);
    CHECK(w12.Z(w12.basis(1)) == w12.basis(2).scaled(E(-2, 4, 12)));
    // D_1(-1) + D_1(-1): (+,+) vector e0 (x) e0 + e1 (x) e1 with total sign 6
    WeilRep u(direct_sum(make_D(1, -1), make_D(1, -1)));
    FormVector v = u.basis(0) + u.basis(3);
    CHECK(u.signature() == 6);
    CHECK(u.Z(v) == v.scaled(E(-6, 4, u.conductor())));
    CHECK(u.Z(v) == v.scaled(CycScalar::from_int(-1, u.conductor())));
}

TEST_CASE("generator relations") {
    GroupWord ss = parse_word("S S"), st3 = parse_word("S T S T S T");
    for (auto& f : small_forms()) {
        if (f.order() > 64) continue;
        WeilRep w(f);
        WordEvaluator ev(w);
        for (i64 g = 0; g < f.order(); ++g) {
            FormVector z = w.Z(w.basis(g));
            CHECK_MESSAGE(ev.apply(ss, g) == z, f.str());
            CHECK_MESSAGE(ev.apply(st3, g) == z, f.str());
        }
    }
    // the evaluator against plain application on a few forms
    for (auto& f : {make_D(2, 3), make_L(9, 2), direct_sum(make_D(1, 1), make_L(3, 1))}) {
        WeilRep w(f);
        WordEvaluator ev(w);
        GroupWord word = parse_word("S T^2 S T^-1 S Z T");
        for (i64 g = 0; g < f.order(); ++g) CHECK(ev.apply(word, g) == w.apply(word, w.basis(g)));
    }
    WeilRep w(make_D(3, 1));
    CHECK(w.apply(GroupWord{}, w.basis(2)) == w.basis(2));
}

TEST_CASE("word convention and matrices") {
    GroupWord w = parse_word("S T^3 S");
    CHECK(word_str(w) == "S T^3 S");
    CHECK(word_matrix(w) == Mat2{-1, 0, 3, -1});
    WeilRep r(make_L(5, 2));
    FormVector v = r.basis(1);
    CHECK(r.apply(w, v) == r.S(r.T(r.S(v), 3)));
    CHECK_THROWS_AS(parse_word("S X"), Error);
}

TEST_CASE("unitarity of S") {
    for (auto& f : {make_D(2, 1), make_L(9, 2), make_D(4, 3), direct_sum(make_D(1, 1), make_L(5, 1))}) {
        WeilRep w(f);
        int L = w.conductor();
        FormVector v = w.basis(1) + w.basis(0).scaled(CycScalar::root(1, L)), u = w.basis(2).scaled(CycScalar::from_int(3, L)) - w.basis(1);
        CHECK(w.inner(w.S(v), w.S(u)) == w.inner(v, u));
        CHECK(w.inner(w.S(v), w.S(v)) == w.inner(v, v));
    }
}

TEST_CASE("plus and minus subspaces") {
    CHECK(WeilRep(make_D(1, 1)).pm_basis(-1).empty());
    WeilRep d2(make_D(2, 1));
    auto plus = d2.pm_basis(1), minus = d2.pm_basis(-1);
    CHECK(plus.size() == 3);
    REQUIRE(minus.size() == 1);
    CHECK(minus[0] == d2.basis(1) - d2.basis(3));
    WeilRep l3(make_L(3, 1));
    CHECK(l3.pm_basis(1).size() == 2);
    CHECK(l3.pm_basis(-1).size() == 1);
    FormVector v = d2.basis(1);
    CHECK(d2.symmetrize(v, 1) + d2.symmetrize(v, -1) == v);
}

TEST_CASE("monomial formula examples") {
    WeilRep l9(make_L(9, 1));
    int L = l9.conductor();
    auto op = l9.ST_pair_closed(1, 1);
    CHECK(op.apply(l9.basis(1)) == l9.basis(8).scaled(E(-1, 9, L)));
    WeilRep l3(make_L(3, 1));
    CHECK(l3.ST_pair_closed(1, 1).apply(l3.basis(1)) == l3.basis(2).scaled(-E(2, 3, l3.conductor())));
    WeilRep d2(make_D(2, 1));
    int L2 = d2.conductor();
    CHECK(d2.ST_pair_closed(1, 1).apply(d2.basis(1)) == d2.basis(3).scaled(E(-1, 4, L2) * E(-1, 8, L2)));
    CHECK_THROWS_AS(l9.ST_pair_closed(3, 1), Error);
}

TEST_CASE("monomial formulas agree with word application") {
    std::vector<DiscriminantForm> forms;
    for (i64 p : {3, 5, 7})
        for (int n = 1; n <= 3; ++n) {
            if (ipow(p, n) > 125) continue;
            for (i64 a = 1; a < std::min<i64>(p, 4); ++a) forms.push_back(make_L(ipow(p, n), a));
        }
    for (int n = 0; n <= 4; ++n)
        for (i64 a : {1, 3, 5, 7}) forms.push_back(make_D(ipow(2, n), a));
    for (auto& f : forms) {
        WeilRep w(f);
        WordEvaluator ev(w);
        const auto& c = f.factors()[0];
        i64 den = c.qden();
        for (i64 m = 1; m < den && m <= 5; ++m) {
            if (gcd(m, den) != 1) continue;
            i64 m2 = mod_inverse(m, den);
            auto op = w.ST_pair_closed(m, m2);
            GroupWord word{{Letter::S, 1}, {Letter::T, m2}, {Letter::S, 1}, {Letter::T, m}, {Letter::S, 1}};
            for (i64 g = 0; g < f.order(); ++g)
                CHECK_MESSAGE(op.apply(w.basis(g)) == ev.apply(word, g), f.str() << " m=" << m);
            if (f.order() <= 27) {
                auto closed = w.STmS_closed(m);
                GroupWord w3{{Letter::S, 1}, {Letter::T, m}, {Letter::S, 1}};
                for (i64 g = 0; g < f.order(); ++g) CHECK_MESSAGE(closed[g] == ev.apply(w3, g), f.str() << " m=" << m);
            }
        }
    }
}

TEST_CASE("scaled embeddings") {
    auto e = embed_scaled(factor_D(1, 1), 2);
    CHECK(e.images[0] == std::vector<i64>{0, 4});
    CHECK(e.images[1] == std::vector<i64>{2, 6});
    auto l = embed_scaled(factor_L(1, 1), 3);
    CHECK(l.images[0] == std::vector<i64>{0, 3, 6});
    auto id = embed_scaled(factor_D(3, 1), 1);
    for (i64 g = 0; g < 6; ++g) CHECK(id.images[g] == std::vector<i64>{g});
    for (auto [m, d] : std::vector<std::pair<i64, i64>>{{1, 2}, {1, 3}, {2, 2}, {3, 2}}) {
        auto emb = embed_scaled(factor_D(m, 1), d);
        WeilRep src(DiscriminantForm({emb.source})), dst(DiscriminantForm({emb.target}));
        int L = static_cast<int>(lcm(src.conductor(), dst.conductor()));
        WeilRep s2(DiscriminantForm({emb.source}), L), d2(DiscriminantForm({emb.target}), L);
        for (i64 g = 0; g < emb.source.order(); ++g) {
            FormVector v = s2.basis(g);
            CHECK(emb.apply(s2.T(v), L) == d2.T(emb.apply(v, L)));
            CHECK(emb.apply(s2.S(v), L) == d2.S(emb.apply(v, L)));
        }
    }
}

TEST_CASE("matrix to word decomposition") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 300; ++it) {
        // random product of generators gives a random SL2 matrix
        Mat2 m{1, 0, 0, 1};
        for (int s = 0; s < 6; ++s) {
            i64 k = static_cast<i64>(rng() % 11) - 5;
            m = mat_mul(m, Mat2{1, k, 0, 1});
            m = mat_mul(m, Mat2{0, -1, 1, 0});
        }
        CHECK(word_matrix(decompose_sl2(m)) == m);
    }
    CHECK(word_matrix(decompose_sl2({-1, 3, 0, -1})) == Mat2{-1, 3, 0, -1});
    CHECK(word_matrix(decompose_sl2({1, 0, 0, 1})) == Mat2{1, 0, 0, 1});
    CHECK_THROWS_AS(decompose_sl2({2, 0, 0, 1}), Error);
    for (i64 n : {4, 8, 9, 27, 64, 343})
        for (i64 u = 1; u < n; ++u) {
            if (gcd(u, n) != 1) continue;
            Mat2 d = lift_diagonal(u, n);
            CHECK(d[0] * d[3] - d[1] * d[2] == 1);
            CHECK(mod(d[0] - u, n) == 0);
            CHECK(mod(d[1], n) == 0);
            CHECK(mod(d[2], n) == 0);
            CHECK(mod(d[0] * d[3], n) == 1);
        }
}

TEST_CASE("word evaluator with Z at odd conductor") {
    for (auto [n, b] : std::vector<std::pair<i64, i64>>{{3, 1}, {7, 1}, {27, 1}, {27, 2}, {11, 2}}) {
        WeilRep w(make_L(n, b));
        REQUIRE(w.conductor() % 2 == 1);
        WordEvaluator ev(w);
        for (auto text : {"Z", "S T^2 S Z T", "Z Z S"})
            for (i64 g = 0; g < n; ++g) CHECK(ev.apply(parse_word(text), g) == w.apply(parse_word(text), w.basis(g)));
    }
}
