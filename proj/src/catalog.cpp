// Closed-form catalog of local invariant spaces: vanishing rules, level and induction
// rewrites, explicit bases, and the dimension count at SL2 from the new-part decomposition.
#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "jacobi/errors.hpp"
#include "jacobi/invariants.hpp"
#include "json.hpp"

namespace jacobi {

namespace {

using Trace = std::vector<std::string>;
using Basis = std::vector<FormVector>;

// A sector (or, in the basis routines, the whole space) of factor1 (x) factor2 at Gamma0(p^k3).
struct Cell {
    i64 p;
    int k1;
    i64 a1;
    int e1;
    int k2;
    i64 a2;
    int e2;
    int k3;
};

Cell swapped(Cell c) {
    std::swap(c.k1, c.k2);
    std::swap(c.a1, c.a2);
    std::swap(c.e1, c.e2);
    return c;
}

i64 order_of(i64 p, int k) { return p == 2 ? 2 * ipow(2, k) : ipow(p, k); }

// product class used by the 2-adic rules; a D_1 coefficient only matters mod 4
i64 cls8(const Cell& c) { return mod(c.a1 * c.a2, 8); }
bool square_mod4(const Cell& c) { return mod(c.a1 * c.a2, 4) == 1; }

int natural_exp(const Cell& c) {
    int k = std::max(c.k1, c.k2);
    return c.p == 2 ? k + 2 : k;
}

// ---------- tensor vectors ----------

struct Tensor {
    i64 n1, n2;
    int L;
    i64 idx(i64 g1, i64 g2) const { return mod(g1, n1) * n2 + mod(g2, n2); }
    FormVector pure(i64 g1, const std::vector<std::pair<i64, i64>>& second) const {
        FormVector v;
        for (auto [g2, c] : second) v.add(idx(g1, g2), CycScalar::from_int(c, L));
        return v;
    }
};

// e^g -> images under the scaled embedding of the second factor
Basis embed_second(const Basis& src, i64 n2_src, i64 n2_dst, const ScaledEmbedding& e) {
    Basis out;
    for (auto& v : src) {
        FormVector w;
        for (auto& [idx, x] : v.c) {
            i64 g1 = idx / n2_src, g2 = idx % n2_src;
            for (i64 y : e.images[g2]) w.add(g1 * n2_dst + y, x);
        }
        out.push_back(std::move(w));
    }
    return out;
}

Basis transpose(const Basis& src, i64 n1, i64 n2) {
    Basis out;
    for (auto& v : src) {
        FormVector w;
        for (auto& [idx, x] : v.c) w.add((idx % n2) * n1 + idx / n2, x);
        out.push_back(std::move(w));
    }
    return out;
}

// embedding of the second factor from exponent k-2 to k
ScaledEmbedding step_embedding(i64 p, int k, i64 a) {
    CyclicFactor src = p == 2 ? factor_D(ipow(2, k - 2), a) : factor_L(ipow(p, k - 2), a);
    return embed_scaled(src, p);
}

int legendre(i64 a, i64 p) { return kronecker(mod(a, p), p); }

// ---------- explicit full-space bases (first factor is the small one) ----------

// L_{p^k}(a) alone (written as L_1 (x) L_{p^k}) at Gamma0(p^k)
Basis basis_single_odd(i64 p, int k, i64 a, int L, Trace& tr) {
    Tensor t{1, ipow(p, k), L};
    if (k == 0) return {t.pure(0, {{0, 1}})};
    if (k == 1) {
        tr.push_back("single-factor-recursion: L_p has no invariants at any level");
        return {};
    }
    Basis out = embed_second(basis_single_odd(p, k - 2, a, L, tr), ipow(p, k - 2), ipow(p, k), step_embedding(p, k, a));
    std::vector<std::pair<i64, i64>> terms;
    i64 h = ipow(p, k - 1);
    for (i64 l = 1; l < p; ++l) terms.emplace_back(l * h, k % 2 == 0 ? 1 : legendre(l, p));
    out.push_back(t.pure(0, terms));
    tr.push_back("single-factor-recursion: new vector at exponent " + std::to_string(k));
    return out;
}

// L_p(a1) (x) L_{p^k}(a2) at Gamma0(p^k), k >= 1
Basis basis_lp_tensor(i64 p, i64 a1, int k, i64 a2, int L, Trace& tr) {
    Tensor t{p, ipow(p, k), L};
    if (k == 0) return {};
    if (k == 1) {
        Basis out{t.pure(0, {{0, 1}})};
        if (legendre(-a1 * a2, p) == 1) {
            i64 x = 1;
            while (mod(a1 + a2 * x * x, p) != 0) ++x;
            FormVector u, w;
            for (i64 l = 1; l < p; ++l) {
                u.add(t.idx(l, l * x), CycScalar::from_int(1, L));
                w.add(t.idx(l, -l * x), CycScalar::from_int(1, L));
            }
            out.push_back(u);
            out.push_back(w);
        }
        tr.push_back("lp-tensor-base: L_p (x) L_p at Gamma0(p), -a1a2 " + std::string(legendre(-a1 * a2, p) == 1 ? "square" : "non-square") + " mod p");
        return out;
    }
    Basis out = embed_second(basis_lp_tensor(p, a1, k - 2, a2, L, tr), ipow(p, k - 2), ipow(p, k), step_embedding(p, k, a2));
    if (k % 2 == 0) {
        std::vector<std::pair<i64, i64>> terms;
        for (i64 l = 1; l < p; ++l) terms.emplace_back(l * ipow(p, k - 1), legendre(l, p));
        out.push_back(t.pure(0, terms));
    } else {
        out.push_back(t.pure(0, {{0, 1}}));
    }
    tr.push_back("lp-tensor-recursion: new vector at exponent " + std::to_string(k));
    return out;
}

// D_1(a1) (x) D_{2^t}(a2) at Gamma0(2^{t+2})
Basis basis_d1(const Cell& c, int t, int L, Trace& tr) {
    Tensor T{2, order_of(2, t), L};
    bool sq = square_mod4(c);
    std::string rule = sq ? "d1-square-class-recursion" : "d1-nonsquare-class-recursion";
    if (t == 0) {
        if (sq) {
            tr.push_back(rule + ": D_1 (x) D_1 at Gamma0(4) vanishes");
            return {};
        }
        tr.push_back(rule + ": D_1 (x) D_1 at Gamma0(4), both sign choices of e0e0 +- e1e1");
        FormVector u = T.pure(0, {{0, 1}}) + T.pure(1, {{1, 1}});
        FormVector w = T.pure(0, {{0, 1}}) - T.pure(1, {{1, 1}});
        return {u, w};
    }
    bool base_zero = sq ? (t == 1 || t == 2 || t == 3 || t == 5) : (t == 1 || t == 3 || t == 5);
    if (base_zero) {
        tr.push_back(rule + ": vanishes at D_" + std::to_string(ipow(2, t)));
        return {};
    }
    Cell smaller = c;
    smaller.k2 = t - 2;
    Basis out = embed_second(basis_d1(smaller, t - 2, L, tr), order_of(2, t - 2), order_of(2, t), step_embedding(2, t, c.a2));
    if (t % 2 == 0) {
        int n = t / 2;
        if (sq) {
            i64 h = ipow(2, 2 * n - 1);
            out.push_back(T.pure(0, {{h, 1}, {3 * h, -1}}));
        } else {
            out.push_back(T.pure(0, {{ipow(2, 2 * n), 1}}));
        }
    } else {
        int n = (t - 1) / 2;
        i64 h = ipow(2, 2 * n - 1);
        if (sq)
            out.push_back(T.pure(0, {{h, 1}, {3 * h, 1}, {5 * h, -1}, {7 * h, -1}}));
        else
            out.push_back(T.pure(0, {{h, 1}, {3 * h, -1}, {5 * h, -1}, {7 * h, 1}}));
    }
    tr.push_back(rule + ": new vector at D_" + std::to_string(ipow(2, t)));
    return out;
}

// D_2(a1) (x) D_{2^t}(a2) at Gamma0(2^{t+2}), t >= 1
Basis basis_d2(const Cell& c, int t, int L, Trace& tr) {
    Tensor T{4, order_of(2, t), L};
    bool sq = square_mod4(c);
    if (t % 2 == 0) {
        int n = t / 2;
        if (n <= 2) {
            tr.push_back("d2-tensor-even: D_2 (x) D_" + std::to_string(ipow(2, t)) + " vanishes at its level");
            return {};
        }
        Cell smaller = c;
        smaller.k2 = t - 2;
        Basis out = embed_second(basis_d2(smaller, t - 2, L, tr), order_of(2, t - 2), order_of(2, t), step_embedding(2, t, c.a2));
        i64 h = ipow(2, 2 * n - 2);
        if (sq)
            out.push_back(T.pure(0, {{h, 1}, {3 * h, 1}, {5 * h, -1}, {7 * h, -1}}));
        else
            out.push_back(T.pure(0, {{h, 1}, {3 * h, -1}, {5 * h, -1}, {7 * h, 1}}));
        tr.push_back("d2-tensor-even: new vector at D_" + std::to_string(ipow(2, t)));
        return out;
    }
    int n = (t - 1) / 2;
    if (sq) {
        if (n == 0) {
            tr.push_back("d2-tensor-odd-square: D_2 (x) D_2 at Gamma0(8) vanishes");
            return {};
        }
        if (n == 1) {
            tr.push_back("d2-tensor-odd-square: D_2 (x) D_8 at Gamma0(32) is spanned by e2 (x) (e4 - e12)");
            return {T.pure(2, {{4, 1}, {12, -1}})};
        }
        Cell smaller = c;
        smaller.k2 = t - 2;
        Basis out = embed_second(basis_d2(smaller, t - 2, L, tr), order_of(2, t - 2), order_of(2, t), step_embedding(2, t, c.a2));
        i64 h = ipow(2, 2 * n);
        out.push_back(T.pure(0, {{h, 1}, {3 * h, -1}}));
        tr.push_back("d2-tensor-odd-square: new vector at D_" + std::to_string(ipow(2, t)));
        return out;
    }
    if (n == 0) {
        Basis out{T.pure(0, {{0, 1}}), T.pure(2, {{2, 1}})};
        if (cls8(c) == 7) {
            out.push_back(T.pure(1, {{1, 1}, {3, 1}}) + T.pure(3, {{1, 1}, {3, 1}}));
            out.push_back(T.pure(1, {{1, 1}, {3, -1}}) - T.pure(3, {{1, 1}, {3, -1}}));
        }
        tr.push_back("d2-tensor-odd-nonsquare: D_2 (x) D_2 at Gamma0(8), a1a2 = " + std::to_string(cls8(c)) + " mod 8");
        return out;
    }
    Cell smaller = c;
    smaller.k2 = t - 2;
    Basis out = embed_second(basis_d2(smaller, t - 2, L, tr), order_of(2, t - 2), order_of(2, t), step_embedding(2, t, c.a2));
    out.push_back(T.pure(0, {{0, 1}}));
    tr.push_back("d2-tensor-odd-nonsquare: new vector at D_" + std::to_string(ipow(2, t)));
    return out;
}

// D_2 (x) D_2 below its level when a1a2 = 3 mod 4: the sector table
Basis basis_d2d2_low(const Cell& c, int L, Trace& tr) {
    Tensor T{4, 4, L};
    FormVector plus = T.pure(0, {{0, 1}}) + T.pure(2, {{2, 1}});
    FormVector odd_plus = T.pure(1, {{1, 1}, {3, 1}}) + T.pure(3, {{1, 1}, {3, 1}});
    FormVector odd_minus = T.pure(1, {{1, 1}, {3, -1}}) - T.pure(3, {{1, 1}, {3, -1}});
    bool seven = cls8(c) == 7;
    tr.push_back("d2-d2-sector-table: D_2 (x) D_2 at exponent " + std::to_string(c.k3) + ", a1a2 = " + std::to_string(cls8(c)) + " mod 8");
    if (c.k3 >= 1) {
        if (!seven) return {plus};
        return {plus, odd_plus, odd_minus};
    }
    if (!seven) return {};
    return {plus + plus + odd_plus, odd_minus};
}

// ---------- dimension rules ----------

int count_sl2(const Cell& c, Trace& tr) {
    // conditions on the signs and parity, then one Hom per matching new part
    auto zero = [&](const std::string& why) {
        tr.push_back("sl2-irreducible-components: " + why);
        return 0;
    };
    if (c.k1 > 0 && c.k2 > 0 && c.e1 != c.e2) return zero("mixed signs");
    if ((c.k1 == 0 || c.k2 == 0) && (c.e1 < 0 || c.e2 < 0)) return zero("a trivial factor forces both signs +");
    if ((c.k1 + c.k2) % 2) return zero("odd exponent sum");
    int kmin = std::min(c.k1, c.k2);
    int m = kmin % 2 ? 1 : (c.e1 > 0 ? 0 : 2);
    int count = 0;
    for (int n = m; n <= kmin; n += 2) {
        bool iso;
        if (c.p == 2)
            iso = n == 0 ? mod(c.a1 * c.a2, 4) == 3 : cls8(c) == 7;
        else
            iso = n == 0 ? true : legendre(-c.a1 * c.a2, c.p) == 1;
        if (iso) ++count;
    }
    tr.push_back("sl2-irreducible-components: " + std::to_string(count) + " matching new parts");
    return count;
}

std::optional<Basis> full_basis(Cell c, int L, Trace& tr);

int sector_rank(const Basis& b, const Cell& c, int L) {
    DiscriminantForm form({local_factor(c.p, c.k1, c.a1), local_factor(c.p, c.k2, c.a2)});
    Basis pr;
    for (auto& v : b) {
        FormVector w = sector_project(form, v, c.e1, c.e2, L);
        if (!w.is_zero()) pr.push_back(w);
    }
    return static_cast<int>(echelon(pr, L).size());
}

int cell_conductor(const Cell& c) {
    LocalSpec s{c.p, c.k1, c.a1, true, c.k2, c.a2, 1, 1, c.k3, true};
    return invariant_conductor(s);
}

std::optional<int> dim_sector(Cell c, Trace& tr, bool infer);

// Shared front end: vanishing rules and rewrites that hold for the whole space.
// Returns a finished dimension, or the rewritten cell to continue with.
struct Step {
    std::optional<int> dim;
    Cell next;
    bool rewritten = false;
};

Step full_space_rules(Cell c, Trace& tr) {
    Step st{std::nullopt, c, false};
    bool odd = c.p != 2;
    // k1 <= k2 from here
    if (odd && c.k1 >= 1 && (c.k1 + c.k2) % 2 == 1 && c.k3 <= 1) {
        tr.push_back("odd-sum-vanishing-gamma0-p: odd exponent sum at level at most p");
        st.dim = 0;
        return st;
    }
    if (odd && c.k1 == 0 && c.k2 == 1) {
        tr.push_back("single-factor-recursion: L_p has no invariants at any level");
        st.dim = 0;
        return st;
    }
    if (!odd && square_mod4(c) && c.k3 <= 4) {
        tr.push_back("square-class-vanishing-gamma0-16: a1a2 square mod 4 at level dividing 16");
        st.dim = 0;
        return st;
    }
    if ((c.k1 + c.k2) % 2 == 1 && c.k1 >= 1 && c.k2 > c.k1) {
        bool ok = odd ? (c.k3 >= 1 && c.k2 > c.k3) : (c.k3 >= 1 && c.k3 <= c.k2 + 1);
        if (ok) {
            tr.push_back("odd-sum-induction: exponent " + std::to_string(c.k2) + " -> " + std::to_string(c.k2 - 2));
            st.next.k2 -= 2;
            st.rewritten = true;
            return st;
        }
    }
    if (!odd && (c.k1 + c.k2) % 2 == 0 && c.k1 >= 1 && c.k2 >= c.k1 && c.k3 >= 1 && c.k2 > c.k3 && square_mod4(c)) {
        tr.push_back("even-sum-induction-2adic: exponent " + std::to_string(c.k2) + " -> " + std::to_string(c.k2 - 2));
        st.next.k2 -= 2;
        st.rewritten = true;
        return st;
    }
    return st;
}

Cell reduce_level(Cell c, Trace& tr) {
    int top = natural_exp(c);
    if (c.k3 > top) {
        tr.push_back("level-reduction: exponent " + std::to_string(c.k3) + " -> " + std::to_string(top));
        c.k3 = top;
    }
    return c;
}

std::optional<Basis> full_basis(Cell c, int L, Trace& tr) {
    if (c.k1 > c.k2) {
        auto b = full_basis(swapped(c), L, tr);
        if (!b) return b;
        return transpose(*b, order_of(c.p, c.k2), order_of(c.p, c.k1));
    }
    c = reduce_level(c, tr);
    Step st = full_space_rules(c, tr);
    if (st.dim) return Basis{};
    if (st.rewritten) {
        Cell n = st.next;
        auto b = full_basis(n, L, tr);
        if (!b) return b;
        return embed_second(*b, order_of(c.p, n.k2), order_of(c.p, c.k2), step_embedding(c.p, c.k2, c.a2));
    }
    int top = natural_exp(c);
    if (c.p != 2) {
        if (c.k3 == top && c.k1 == 0) return basis_single_odd(c.p, c.k2, c.a2, L, tr);
        if (c.k3 == top && c.k1 == 1) return basis_lp_tensor(c.p, c.a1, c.k2, c.a2, L, tr);
    } else {
        if (c.k1 == 0 && c.k2 == 0 && c.k3 < 2) {
            if (square_mod4(c)) {
                tr.push_back("level-containment: D_1 (x) D_1 vanishes at Gamma0(4), hence below");
                return Basis{};
            }
            Tensor T{2, 2, L};
            tr.push_back("d1-nonsquare-class-recursion: D_1 (x) D_1 at exponent " + std::to_string(c.k3));
            return Basis{T.pure(0, {{0, 1}}) + T.pure(1, {{1, 1}})};
        }
        if (c.k1 == 0 && c.k3 == top) return basis_d1(c, c.k2, L, tr);
        if (c.k1 == 1 && c.k2 >= 1 && c.k3 == c.k2 + 2) return basis_d2(c, c.k2, L, tr);
        if (c.k1 == 1 && c.k2 == 1 && c.k3 < 3) {
            if (square_mod4(c)) {
                tr.push_back("level-containment: D_2 (x) D_2 vanishes at Gamma0(8), hence below");
                return Basis{};
            }
            return basis_d2d2_low(c, L, tr);
        }
    }
    // vanishing at a higher level propagates down
    for (int k = c.k3 + 1; k <= top; ++k) {
        Cell up = c;
        up.k3 = k;
        Trace sub;
        auto b = full_basis(up, L, sub);
        if (b && b->empty()) {
            tr.insert(tr.end(), sub.begin(), sub.end());
            tr.push_back("level-containment: zero at exponent " + std::to_string(k) + " forces zero at " + std::to_string(c.k3));
            return Basis{};
        }
    }
    return std::nullopt;
}

std::optional<int> dim_sector(Cell c, Trace& tr, bool infer) {
    if (c.k1 > c.k2) c = swapped(c);
    if ((c.k1 == 0 && c.e1 < 0) || (c.k2 == 0 && c.e2 < 0)) {
        tr.push_back("trivial-minus-part: the minus part of an exponent-zero factor is empty");
        return 0;
    }
    if (c.p != 2 && c.k1 > 0 && c.k2 > 0 && c.e1 != c.e2 && ((c.k1 + c.k2) % 2 == 0 || c.p % 4 == 1)) {
        tr.push_back("z-sign-vanishing: Z acts by -1 on the mixed-sign sector");
        return 0;
    }
    if (c.p == 2 && (square_mod4(c) ? c.e1 == c.e2 : c.e1 != c.e2)) {
        tr.push_back(std::string("z-sign-vanishing-2adic: Z acts by -1 on the ") + (c.e1 == c.e2 ? "equal" : "mixed") + "-sign sector");
        return 0;
    }
    c = reduce_level(c, tr);
    if (c.k3 == 0) return count_sl2(c, tr);
    if (c.p == 2 && square_mod4(c) && c.k3 <= 4 && c.k1 <= 4 && c.k2 <= 4 && c.e1 != c.e2) {
        tr.push_back("mixed-sign-vanishing-gamma0-16: exponents at most 4, a1a2 square mod 4");
        return 0;
    }
    Step st = full_space_rules(c, tr);
    if (st.dim) return st.dim;
    if (st.rewritten) return dim_sector(st.next, tr, infer);

    int L = cell_conductor(c);
    Trace btr;
    if (auto b = full_basis(c, L, btr)) {
        tr.insert(tr.end(), btr.begin(), btr.end());
        return sector_rank(*b, c, L);
    }
    if (!infer) return std::nullopt;
    // the invariant dimension grows with the exponent; use known neighbours
    int top = natural_exp(c);
    std::optional<std::pair<int, int>> lo, hi;  // (exponent, dim)
    std::vector<Trace> traces(top + 1);
    for (int k = 0; k <= top; ++k) {
        if (k == c.k3) continue;
        Cell o = c;
        o.k3 = k;
        auto d = dim_sector(o, traces[k], false);
        if (!d) continue;
        if (k < c.k3) lo = std::make_pair(k, *d);
        if (k > c.k3 && !hi) hi = std::make_pair(k, *d);
    }
    if (hi && hi->second == 0) {
        tr.insert(tr.end(), traces[hi->first].begin(), traces[hi->first].end());
        tr.push_back("level-containment: zero at exponent " + std::to_string(hi->first));
        return 0;
    }
    if (lo && hi && lo->second == hi->second) {
        tr.insert(tr.end(), traces[lo->first].begin(), traces[lo->first].end());
        tr.insert(tr.end(), traces[hi->first].begin(), traces[hi->first].end());
        tr.push_back("level-sandwich: equal dimensions at exponents " + std::to_string(lo->first) + " and " + std::to_string(hi->first));
        return lo->second;
    }
    return std::nullopt;
}

Cell to_cell(const LocalSpec& s) {
    if (s.has_second) return Cell{s.p, s.k1, s.a1, s.e1, s.k2, s.a2, s.e2, s.k3};
    // single odd factor: L_1 (x) L_{p^k}, with L_1 in front so indices agree
    return Cell{s.p, 0, 1, 1, s.k1, s.a1, s.e1, s.k3};
}

void check_spec(const LocalSpec& s) {
    validate(s);
    if (!s.has_second && s.p == 2)
        throw Error(ErrorKind::SignatureParity, "a single D-factor has odd signature; " + s.str() + " is not an SL2 representation");
}

std::vector<LocalSpec> spec_sectors(const LocalSpec& s) {
    if (!s.full) return {s};
    std::vector<LocalSpec> out;
    for (int a : {1, -1})
        for (int b : {1, -1}) {
            if (!s.has_second && b < 0) continue;
            LocalSpec t = s;
            t.full = false;
            t.e1 = a;
            t.e2 = b;
            out.push_back(t);
        }
    return out;
}

std::string sign_pair(const LocalSpec& t) {
    std::string r = t.e1 > 0 ? "+" : "-";
    if (t.has_second) r += t.e2 > 0 ? "+" : "-";
    return r;
}

}  // namespace

ClosedDim local_dim_closed(const LocalSpec& s) {
    check_spec(s);
    ClosedDim out;
    for (auto& t : spec_sectors(s)) {
        Trace tr;
        auto d = dim_sector(to_cell(t), tr, true);
        if (!d) throw Error(ErrorKind::NotCovered, "no catalog rule reaches " + t.str());
        out.dim += *d;
        for (auto& x : tr) out.trace.push_back(s.full ? "[" + sign_pair(t) + "] " + x : x);
    }
    return out;
}

InvariantBasis local_generators_closed(const LocalSpec& s) {
    check_spec(s);
    InvariantBasis ib;
    ib.spec = s;
    int L = invariant_conductor(s);
    ib.conductor = L;
    Cell c = to_cell(s);
    Trace tr;
    auto b = full_basis(c, L, tr);
    if (!b) {
        // dimension-only results: zero is still an explicit answer
        ClosedDim d = local_dim_closed(s);
        if (d.dim != 0) throw Error(ErrorKind::NoExplicitBasis, "the catalog gives only the dimension of " + s.str());
        ib.provenance = d.trace;
        return ib;
    }
    Basis vs = *b;
    if (!s.full) {
        DiscriminantForm form({local_factor(c.p, c.k1, c.a1), local_factor(c.p, c.k2, c.a2)});
        Basis pr;
        for (auto& v : vs) {
            FormVector w = sector_project(form, v, c.e1, c.e2, L);
            if (!w.is_zero()) pr.push_back(w);
        }
        vs = pr;
    }
    ib.vectors = echelon(vs, L);
    ib.dimension = static_cast<int>(ib.vectors.size());
    ib.provenance = tr;
    return ib;
}

std::string basis_json(const InvariantBasis& b, int indent) {
    using nlohmann::json;
    json j;
    j["spec"] = b.spec.str();
    j["dim"] = b.dimension;
    j["conductor"] = b.conductor;
    std::vector<CyclicFactor> fs{local_factor(b.spec.p, b.spec.k1, b.spec.a1)};
    if (b.spec.has_second) fs.push_back(local_factor(b.spec.p, b.spec.k2, b.spec.a2));
    DiscriminantForm form(fs);
    json basis = json::array();
    for (auto& v : b.vectors) {
        json entries = json::array();
        for (auto& [idx, x] : v.c) entries.push_back(json::array({form.element(idx), x.str()}));
        basis.push_back(entries);
    }
    j["basis"] = basis;
    j["provenance"] = b.provenance;
    return j.dump(indent);
}

int two_part_table(int j, i64 cls, int e1, int e2, int k) {
    cls = mod(cls, 8);
    bool c3 = cls % 4 == 3, c1 = cls % 4 == 1;
    int d = 0;
    if (j == 0) {
        if (e1 < 0) return 0;  // D_1 has no minus part
        if (k <= 1 && e2 > 0 && c3) d += 1;
        if (k >= 2 && k % 2 == 0) {
            int n = k / 2 - 1;
            if (e2 > 0 && c3) d += 2 + n;
            if (e2 < 0 && c1) d += std::max(0, n - 1);
        }
        if (k >= 3 && k % 2 == 1) {
            int n = (k - 3) / 2;
            if ((e2 > 0 && c3) || (e2 < 0 && c1)) d += std::max(0, n - 2);
        }
        return d;
    }
    if (j != 1) throw Error(ErrorKind::InvalidArgument, "two-part tables exist for j = 0 and j = 1");
    if (k == 0 && e1 > 0 && e2 > 0 && cls == 7) d += 1;
    if ((k == 1 || k == 2) && e1 > 0 && e2 > 0) d += cls == 7 ? 2 : (cls == 3 ? 1 : 0);
    if (k >= 3 && k % 2 == 1) {
        int n = (k - 3) / 2;
        if (e1 < 0 && e2 < 0 && cls == 7) d += 1;
        if (e1 > 0 && e2 > 0) d += cls == 7 ? 3 + n : (cls == 3 ? 2 + n : 0);
        if (e1 > 0 && e2 < 0 && c1) d += n;
    }
    if (k >= 2 && k % 2 == 0 && e1 > 0) {
        int n = k / 2 - 1;
        if ((e2 < 0 && c1) || (e2 > 0 && c3)) d += std::max(0, n - 2);
    }
    return d;
}

}  // namespace jacobi
