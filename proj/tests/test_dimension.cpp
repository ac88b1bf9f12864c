#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <json.hpp>
#include <numeric>
#include <sstream>

#include "jacobi/dimension.hpp"
#include "jacobi/errors.hpp"

using namespace jacobi;

namespace {

// Rows m = 1..50 of the printed dimension table, columns as printed_table_levels().
const char* kPrinted =
    "1 0 0 0 0 0 0 0 0\n2 0 1 0 0 0 0 1 6\n3 0 0 1 1 1 0 0 6\n4 0 1 0 - - - - -\n"
    "5 0 0 1 2 3 2 2 5\n6 0 0 0 1 2 0 0 11\n7 1 0 0 0 0 4 0 10\n8 0 2 0 - - - - -\n"
    "9 - 0 1 1 1 - 0 -\n10 0 0 0 3 3 2 2 11\n11 0 1 0 1 1 0 4 27\n12 - 0 1 - - - - -\n"
    "13 1 0 0 2 3 6 2 33\n14 0 1 0 0 0 3 1 14\n15 0 0 2 0 0 2 0 11\n16 0 2 0 - - - - -\n"
    "17 0 0 0 3 4 2 2 26\n18 - 1 0 1 2 - 1 -\n19 1 0 0 1 1 4 0 27\n20 0 0 1 - - - - -\n"
    "21 1 0 0 0 0 4 0 18\n22 0 2 0 1 2 0 5 29\n23 0 1 1 0 0 0 4 30\n24 - 0 0 - - - - -\n"
    "25 0 0 1 2 3 2 2 -\n26 0 0 0 3 3 5 2 27\n27 - 0 2 2 2 - 0 -\n28 1 - 0 - - - - -\n"
    "29 0 1 0 2 3 2 6 36\n30 0 0 0 0 0 2 0 16\n31 1 0 1 0 0 4 0 27\n32 0 3 0 - - - - -\n"
    "33 0 0 1 2 2 0 0 35\n34 0 0 0 4 5 2 2 26\n35 0 0 0 0 0 0 2 15\n36 - 1 1 - - - - -\n"
    "37 1 1 1 2 3 6 6 42\n38 0 0 0 1 2 3 0 25\n39 1 0 0 0 0 6 0 41\n40 0 0 0 - - - - -\n"
    "41 0 0 0 3 4 2 2 15\n42 0 0 0 0 0 3 0 21\n43 1 1 0 1 1 4 4 37\n44 0 3 - - - - - -\n"
    "45 - 0 3 2 3 - 2 -\n46 0 2 0 0 0 0 5 36\n47 0 0 1 0 0 0 0 21\n48 - 0 1 - - - - -\n"
    "49 1 - 0 0 0 4 - -\n50 0 1 0 3 3 2 3 -\n";

bool throws_kind(ErrorKind k, auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == k;
    }
    return false;
}

}  // namespace

TEST_CASE("f symbol and m' enumeration") {
    CHECK(f_symbol(2, {7}) == 1);
    CHECK(f_symbol(-1, {3}) == 0);
    CHECK(f_symbol(5, {}) == 1);
    CHECK(throws_kind(ErrorKind::NotCoprime, [] { f_symbol(3, {3}); }));
    CHECK(enumerate_mprime(1) == std::vector<i64>{1});
    CHECK(enumerate_mprime(12) == std::vector<i64>{2, 4, 6, 12});
    CHECK(enumerate_mprime(9) == std::vector<i64>{3, 9});
    CHECK(assembly_M(9, 36) == 9);
    CHECK(assembly_M(2, 343) == 686);
    CHECK(assembly_M(1, 8) == 2);
}

TEST_CASE("named values") {
    CHECK(jacobi_dim_value(9, 9) == 1);
    CHECK(jacobi_dim_value(9, 36) == 2);
    CHECK(jacobi_dim_value(9, 9, Method::Bruteforce) == 1);
    CHECK(jacobi_dim_value(9, 36, Method::Bruteforce) == 2);
    CHECK(jacobi_dim_thm71(3, 1, 0, 9) == 1);
    CHECK(jacobi_dim_thm71(5, 1, 0, 10) == 3);
    CHECK(jacobi_dim_thm71(1, 343, 1, 0) == 1);
    CHECK(jacobi_dim_thm72(3, 9, 1, 1, 2) == 0);
    CHECK(jacobi_dim_value(6, 36, Method::Bruteforce) == 0);
    CHECK(jacobi_dim_thm72(3, 3, 1, 1, 8) == jacobi_dim_value(6, 768, Method::Bruteforce));
    CHECK(jacobi_dim_thm72(5, 125, 27 * 343, 0, 6) == 5);
    for (i64 N = 1; N <= 100; ++N) CHECK(jacobi_dim_value(1, N) == 0);
    for (i64 m = 1; m <= 20; ++m) CHECK(jacobi_dim_value(m, 1) == 0);
}

TEST_CASE("theorem hypotheses are enforced") {
    CHECK(throws_kind(ErrorKind::HypothesisViolation, [] { jacobi_dim_thm71(3, 3, 0, 1); }));
    CHECK(throws_kind(ErrorKind::HypothesisViolation, [] { jacobi_dim_thm71(3, 5, 2, 1); }));
    CHECK(throws_kind(ErrorKind::HypothesisViolation, [] { jacobi_dim_thm72(9, 3, 1, 0, 0); }));
    CHECK(throws_kind(ErrorKind::HypothesisViolation, [] { jacobi_dim_thm72(3, 5, 1, 0, 0); }));
    CHECK(theorem_route(4, 27) == Method::Theorem71);
    CHECK(!theorem_route(4, 64 * 27).has_value());
    CHECK(theorem_route(2, 343) == Method::Theorem71);
    CHECK(theorem_route(6, 36) == Method::Theorem72);
}

TEST_CASE("printed dimension table is reproduced") {
    auto levels = printed_table_levels();
    std::istringstream in(kPrinted);
    std::string line;
    int cells = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        i64 m;
        row >> m;
        for (i64 N : levels) {
            std::string t;
            row >> t;
            auto w = theorem_route(m, N);
            if (t == "-") {
                CHECK_MESSAGE(!w, "m=" << m << " N=" << level_str(N));
                continue;
            }
            REQUIRE_MESSAGE(w, "m=" << m << " N=" << level_str(N));
            CHECK_MESSAGE(jacobi_dim_theorem(m, N, *w) == std::stol(t), "m=" << m << " N=" << level_str(N));
            ++cells;
        }
    }
    CHECK(cells == 317);

    auto csv = table_csv(50, levels);
    std::istringstream rows(csv), want(kPrinted);
    std::getline(rows, line);  // header
    while (std::getline(want, line)) {
        std::string got;
        REQUIRE(std::getline(rows, got));
        std::replace(line.begin(), line.end(), ' ', ',');
        CHECK(got == line);
    }
}

TEST_CASE("bruteforce, catalog and theorem routes agree") {
    int catalog = 0, refused = 0, theorem = 0;
    for (i64 m = 1; m <= 12; ++m)
        for (i64 N = 1; N <= 64; ++N) {
            i64 bf = jacobi_dim_value(m, N, Method::Bruteforce);
            try {
                i64 c = jacobi_dim_value(m, N, Method::Catalog);
                CHECK_MESSAGE(c == bf, "m=" << m << " N=" << N);
                ++catalog;
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::NotCovered);
                ++refused;
            }
            for (Method w : {Method::Theorem71, Method::Theorem72}) {
                try {
                    i64 t = jacobi_dim_theorem(m, N, w);
                    CHECK_MESSAGE(t == bf, method_name(w) << " m=" << m << " N=" << N);
                    ++theorem;
                } catch (const Error& e) {
                    CHECK(e.kind() == ErrorKind::HypothesisViolation);
                }
            }
        }
    MESSAGE("catalog answered " << catalog << ", refused " << refused << ", theorem checks " << theorem);
    CHECK(theorem > 1000);
    CHECK(refused < 20);

    for (auto [m, N] : std::vector<std::pair<i64, i64>>{{9, 9}, {9, 36}, {12, 36}, {8, 32}, {2, 343}, {3, 512}}) {
        i64 bf = jacobi_dim_value(m, N, Method::Bruteforce);
        CHECK(bf == jacobi_dim_value(m, N));
        if (auto w = theorem_route(m, N)) CHECK(jacobi_dim_theorem(m, N, *w) == bf);
    }
}

TEST_CASE("vanishing predicates") {
    CHECK(vanish_all_m(1));
    CHECK(!vanish_all_m(36));
    CHECK(vanish_all_m(16 * 125));
    CHECK(vanish_coprime_m(32));
    CHECK(!vanish_coprime_m(343));
    CHECK(!vanish_coprime_m(27));
    for (i64 N = 1; N <= 64; ++N) {
        bool all = vanish_all_m(N), cop = vanish_coprime_m(N);
        if (all) CHECK(cop);
        for (i64 m = 1; m <= 20; ++m) {
            if (!all && !(cop && std::gcd(m, N) == 1)) continue;
            CHECK_MESSAGE(jacobi_dim_value(m, N) == 0, "m=" << m << " N=" << N);
        }
    }
}

TEST_CASE("scaling law") {
    CHECK(scaling_check(1, 1, 3, 2) == Relation::Equal);
    CHECK(scaling_check(1, 1, 2, 5) == Relation::Equal);
    CHECK(scaling_check(1, 1, 3, 3) == Relation::AtLeast);
    CHECK(throws_kind(ErrorKind::NotCoprime, [] { scaling_check(3, 1, 3, 1); }));
    CHECK(std::string(relation_str(Relation::AtLeast)) == ">=");

    int nonzero = 0;
    for (i64 m = 1; m <= 10; ++m)
        for (i64 N = 1; N <= 30; ++N) {
            i64 base = jacobi_dim_value(m, N);
            if (base) ++nonzero;
            for (i64 q : {2, 3, 5, 7}) {
                if ((m * N) % q == 0) continue;
                int nmax = q == 2 ? 5 : 2;
                for (int n = 1; n <= nmax; ++n) {
                    i64 L = N * ipow(q, n);
                    if (L > 64 * 27) continue;
                    REQUIRE(scaling_check(m, N, q, n) == Relation::Equal);
                    CHECK_MESSAGE(jacobi_dim_value(m, L) == (n / 2 + 1) * base, "m=" << m << " N=" << N << " q^n=" << q << "^" << n);
                }
            }
        }
    CHECK(nonzero > 0);
    // one step past the bound: only >=, and it is strict somewhere
    CHECK(jacobi_dim_value(2, 343) > 2 * jacobi_dim_value(2, 1));
    CHECK(jacobi_dim_value(1, 64) >= 4 * jacobi_dim_value(1, 1));
}

TEST_CASE("dimension does not depend on the odd exponent") {
    for (i64 p : {3, 5, 7})
        for (int k = 0; k <= 10; ++k) {
            i64 a0 = jacobi_dim_value(p, ipow(2, k));
            for (int a = 1; a <= 3; ++a) CHECK(jacobi_dim_value(p, ipow(2, k) * ipow(p, a)) == a0);
        }
    CHECK(jacobi_dim_value(3, 512) == 1);
    CHECK(jacobi_dim_value(3, 256) == 0);
    CHECK(jacobi_dim_value(5, 64) == 1);
}

TEST_CASE("index 2 and index p predicates") {
    auto v = nontrivial_J12(343);
    CHECK(v.nontrivial);
    CHECK(v.dim_one);
    CHECK(!nontrivial_J12(27).nontrivial);
    v = nontrivial_J12(27 * 125);
    CHECK(v.nontrivial);
    CHECK(v.dim_one);
    for (i64 N = 1; N < 343; ++N) {
        CHECK(!nontrivial_J12(N).nontrivial);
        CHECK(jacobi_dim_value(2, N) == 0);
    }
    CHECK(jacobi_dim_value(2, 343) == 1);
    for (i64 N : {343L, 27L * 125, 343L * 5, 343L * 9, 27L * 125 * 7}) {
        if (!theorem_route(2, N)) continue;
        i64 d = jacobi_dim_value(2, N);
        auto r = nontrivial_J12(N);
        CHECK(r.nontrivial == (d > 0));
        if (r.nontrivial) CHECK(r.dim_one == (d == 1));
    }

    CHECK(nontrivial_J1p(3, 512));
    CHECK(!nontrivial_J1p(3, 256));
    CHECK(nontrivial_J1p(5, 64));
    CHECK(nontrivial_J1p(3, 1331));
    for (i64 N = 1; N < 512; ++N) {
        if (N % 11 == 0) continue;
        CHECK_MESSAGE(!nontrivial_J1p(3, N), "N=" << N);
    }
    for (i64 p : {3, 5, 7, 11})
        for (i64 N : printed_table_levels()) {
            if (!theorem_route(p, N)) continue;
            CHECK_MESSAGE(nontrivial_J1p(p, N) == (jacobi_dim_value(p, N) > 0), "p=" << p << " N=" << level_str(N));
        }
}

TEST_CASE("level expressions") {
    CHECK(parse_level("343") == 343);
    CHECK(parse_level("2^6*3^3") == 1728);
    CHECK(parse_level(" 2^9 ") == 512);
    CHECK(level_str(1728) == "2^6*3^3");
    CHECK(level_str(1) == "1");
    for (const char* bad : {"", "2^", "x", "0", "2**3", "-4"})
        CHECK_MESSAGE(throws_kind(ErrorKind::InvalidArgument, [&] { parse_level(bad); }), bad);
    CHECK(method_name(parse_method("thm71")) == std::string("theorem71"));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { parse_method("magic"); }));
}

TEST_CASE("json result record") {
    auto r = jacobi_dim(9, 36, Method::Catalog);
    auto j = nlohmann::json::parse(dim_json(r));
    CHECK(j["m"] == 9);
    CHECK(j["N"] == 36);
    CHECK(j["dim"] == 2);
    CHECK(j["method"] == "catalog");
    REQUIRE(j["local_trace"].is_array());
    REQUIRE(!j["local_trace"].empty());
    for (auto& t : j["local_trace"]) {
        CHECK(t.contains("p"));
        CHECK(t.contains("spec"));
        CHECK(t.contains("dim"));
        CHECK(!t["provenance"].empty());
    }
    CHECK(dim_json(r) == dim_json(jacobi_dim(9, 36, Method::Catalog)));
}

TEST_CASE("bruteforce guard") {
    DimOptions tight;
    tight.guard = 16;
    CHECK(throws_kind(ErrorKind::GuardExceeded, [&] { jacobi_dim(2, 343, Method::Bruteforce, tight); }));
    CHECK(jacobi_dim(2, 343, Method::Auto, tight).dim == 1);
}
