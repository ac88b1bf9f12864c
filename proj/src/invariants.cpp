#include "jacobi/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "jacobi/errors.hpp"
#include "jacobi/modp.hpp"

namespace jacobi {

namespace {

std::string sign_char(int e) { return e > 0 ? "+" : "-"; }

std::string factor_name(i64 p, int k, i64 a, bool signed_, int e) {
    std::ostringstream os;
    os << (p == 2 ? "D_" : "L_") << ipow(p, k);
    if (signed_) os << "^" << sign_char(e);
    os << "(" << a << ")";
    return os.str();
}

}  // namespace

std::string LocalSpec::str() const {
    std::ostringstream os;
    os << "(" << factor_name(p, k1, a1, !full, e1);
    if (has_second) os << " x " << factor_name(p, k2, a2, !full, e2);
    os << ")^";
    if (k3 == 0)
        os << "SL2";
    else
        os << "Gamma0(" << p << "^" << k3 << ")";
    return os.str();
}

void validate(const LocalSpec& s) {
    if (!is_prime(static_cast<u64>(s.p))) throw Error(ErrorKind::InvalidArgument, "local spec needs a prime p");
    if (s.k1 < 0 || s.k2 < 0 || s.k3 < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in local spec");
    if (std::abs(s.e1) != 1 || std::abs(s.e2) != 1) throw Error(ErrorKind::InvalidArgument, "signs must be +1 or -1");
    i64 md = s.p == 2 ? 2 : s.p;
    if (gcd(mod(s.a1, md), md) != 1 || (s.has_second && gcd(mod(s.a2, md), md) != 1))
        throw Error(ErrorKind::NotCoprime, "local coefficients must be prime to p");
}

CyclicFactor local_factor(i64 p, int k, i64 a) {
    if (p == 2) return factor_D(ipow(2, k), a);
    return factor_L(ipow(p, k), k == 0 ? 1 : a);
}

DiscriminantForm local_form(const LocalSpec& s) {
    validate(s);
    std::vector<CyclicFactor> fs{local_factor(s.p, s.k1, s.a1)};
    if (s.has_second) fs.push_back(local_factor(s.p, s.k2, s.a2));
    return DiscriminantForm(fs);
}

int natural_level_exponent(const LocalSpec& s) {
    int k = s.has_second ? std::max(s.k1, s.k2) : s.k1;
    return s.p == 2 ? k + 2 : k;
}

namespace {

// Square-class representative of a unit coefficient.
i64 coef_class(i64 p, int k, i64 a) {
    if (p == 2) return k == 0 ? mod(a, 4) : mod(a, 8);
    if (k == 0) return 1;
    if (kronecker(a, p) == 1) return 1;
    for (i64 r = 2;; ++r)
        if (kronecker(r, p) == -1) return r;
}

}  // namespace

LocalSpec canonical(const LocalSpec& s) {
    validate(s);
    LocalSpec c = s;
    c.a1 = coef_class(s.p, s.k1, s.a1);
    if (c.full) c.e1 = c.e2 = 1;
    if (!c.has_second) {
        c.k2 = 0;
        c.a2 = 1;
        c.e2 = 1;
    } else {
        c.a2 = coef_class(s.p, s.k2, s.a2);
        if (std::make_tuple(c.k2, c.a2, -c.e2) < std::make_tuple(c.k1, c.a1, -c.e1)) {
            std::swap(c.k1, c.k2);
            std::swap(c.a1, c.a2);
            std::swap(c.e1, c.e2);
        }
    }
    c.k3 = std::min(c.k3, natural_level_exponent(c));
    return c;
}

FormVector sector_project(const DiscriminantForm& form, const FormVector& v, int e1, int e2, int) {
    // (1 + e1 s1)(1 + e2 s2)/4 applied to v
    FormVector out;
    const auto& fs = form.factors();
    for (auto& [idx, x] : v.c) {
        auto g = form.element(idx);
        for (int t1 = 0; t1 < 2; ++t1)
            for (int t2 = 0; t2 < 2; ++t2) {
                if (fs.size() < 2 && t2) continue;
                auto h = g;
                int sgn = 1;
                if (t1) h[0] = -h[0], sgn *= e1;
                if (t2) h[1] = -h[1], sgn *= e2;
                out.add(form.index(h), x.scaled(mpq_class(sgn, fs.size() < 2 ? 2 : 4)));
            }
    }
    return out;
}

std::vector<GroupWord> coset_words_gamma0(i64 p, int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "coset words need n >= 1");
    i64 q = ipow(p, n);
    std::vector<GroupWord> out;
    for (i64 l = 0; l < q; ++l) {
        if (gcd(l, q) != 1) continue;
        i64 li = mod_inverse(l, q);
        for (i64 j = 0; j < q; ++j)
            out.push_back({{Letter::S, 1}, {Letter::T, l}, {Letter::S, 1}, {Letter::T, li}, {Letter::S, 1}, {Letter::T, j}});
    }
    return out;
}

namespace {

// ---------- the generator fixed-space system ----------

struct DiagAction {
    std::vector<i64> perm;
    std::vector<int> ph;  // exponent of zeta_L2
};

int phase_exponent(const CycScalar& x, int L2) {
    auto z = x.to_complex();
    double ang = std::atan2(z.imag(), z.real());
    i64 s = mod(static_cast<i64>(std::llround(ang / (2 * std::numbers::pi) * L2)), L2);
    if (CycScalar::root(s, L2) != x.lifted(L2))
        throw Error(ErrorKind::ConductorTooSmall, "diagonal action phase is not a root of unity of order " + std::to_string(L2));
    return static_cast<int>(s);
}

std::mutex diag_mu;
std::map<std::tuple<int, i64, i64, i64, i64, int>, DiagAction> diag_cache;

// Monomial action of a lift of diag(u, u^-1) mod n on one cyclic factor.
DiagAction diag_action(const CyclicFactor& f, i64 u, i64 n, int Lc, int L2) {
    auto key = std::make_tuple(static_cast<int>(f.kind), f.m, f.coef, u, n, Lc);
    {
        std::lock_guard<std::mutex> lk(diag_mu);
        auto it = diag_cache.find(key);
        if (it != diag_cache.end()) return it->second;
    }
    DiscriminantForm form({f});
    WeilRep rep(form, Lc);
    WordEvaluator ev(rep);
    GroupWord w = decompose_sl2(lift_diagonal(u, n));
    DiagAction d;
    d.perm.resize(form.order());
    d.ph.resize(form.order());
    for (i64 g = 0; g < form.order(); ++g) {
        FormVector r = ev.apply(w, g);
        if (r.c.size() != 1) throw Error(ErrorKind::InvalidArgument, "diagonal matrix does not act monomially on " + f.str());
        d.perm[g] = r.c.begin()->first;
        d.ph[g] = phase_exponent(r.c.begin()->second, L2);
    }
    std::lock_guard<std::mutex> lk(diag_mu);
    diag_cache.emplace(key, d);
    return d;
}

i64 unit_root_mod_p2(i64 p) {
    for (i64 g = 2;; ++g) {
        if (gcd(g, p) != 1) continue;
        bool ok = true;
        for (auto [q, e] : factorize(static_cast<u64>(p - 1)).factors)
            if (powmod(g, (p - 1) / static_cast<i64>(q), p) == 1) ok = false;
        if (ok && powmod(g, p - 1, p * p) != 1) return g;
    }
}

std::vector<i64> unit_generators(i64 p, i64 n) {
    if (n <= 2) return {n - 1 > 0 ? n - 1 : 1};
    if (p == 2) return {n - 1, 5};
    return {unit_root_mod_p2(p)};
}

struct Column {
    std::vector<std::pair<i64, int>> members;  // (index, phase exponent)
};

struct FixedSystem {
    DiscriminantForm form;
    int L2 = 2;
    i64 level = 1;
    std::vector<Column> cols;
    std::vector<std::vector<RootSum>> rows;
};

int conductor_for(const CyclicFactor& f1, const CyclicFactor& f2) {
    int l1 = default_conductor(DiscriminantForm({f1}));
    int l2 = default_conductor(DiscriminantForm({f2}));
    int L = static_cast<int>(lcm(l1, l2));
    return L % 2 ? 2 * L : L;
}

// Two-factor form for the engine (the absent factor becomes L_1).
std::pair<CyclicFactor, CyclicFactor> engine_factors(const LocalSpec& s) {
    validate(s);
    if (!s.has_second && s.p == 2)
        throw Error(ErrorKind::SignatureParity, "a single D-factor has odd signature; " + s.str() + " is not an SL2 representation");
    CyclicFactor f1 = local_factor(s.p, s.k1, s.a1);
    CyclicFactor f2 = s.has_second ? local_factor(s.p, s.k2, s.a2) : factor_L(1, 1);
    return {f1, f2};
}

FixedSystem build_system(const LocalSpec& s) {
    auto [f1, f2] = engine_factors(s);
    FixedSystem sys{DiscriminantForm({f1, f2}), 2, 1, {}, {}};
    const auto& form = sys.form;
    int Lc0 = static_cast<int>(lcm(default_conductor(DiscriminantForm({f1})), default_conductor(DiscriminantForm({f2}))));
    sys.L2 = conductor_for(f1, f2);
    int L2 = sys.L2;
    sys.level = form.level();
    i64 lev = sys.level;
    i64 n1 = f1.order(), n2 = f2.order(), D = form.order();
    int e = 0;
    for (i64 t = lev; t > 1; t /= s.p) ++e;
    i64 pe = ipow(s.p, e);

    // monomial generators on the tensor space
    std::vector<std::pair<std::vector<i64>, std::vector<int>>> gens;
    if (pe > 1) {
        for (i64 u : unit_generators(s.p, pe)) {
            DiagAction d1 = diag_action(f1, u, pe, Lc0, L2), d2 = diag_action(f2, u, pe, Lc0, L2);
            std::vector<i64> perm(D);
            std::vector<int> ph(D);
            for (i64 g1 = 0; g1 < n1; ++g1)
                for (i64 g2 = 0; g2 < n2; ++g2) {
                    perm[g1 * n2 + g2] = d1.perm[g1] * n2 + d2.perm[g2];
                    ph[g1 * n2 + g2] = static_cast<int>((d1.ph[g1] + d2.ph[g2]) % L2);
                }
            gens.emplace_back(std::move(perm), std::move(ph));
        }
    }
    int ee1 = s.full ? 0 : s.e1, ee2 = s.full ? 0 : (s.has_second ? s.e2 : 1);
    for (int which = 0; which < 2; ++which) {
        int eps = which == 0 ? ee1 : ee2;
        if (eps == 0) continue;
        std::vector<i64> perm(D);
        std::vector<int> ph(D, eps > 0 ? 0 : L2 / 2);
        for (i64 g1 = 0; g1 < n1; ++g1)
            for (i64 g2 = 0; g2 < n2; ++g2) {
                i64 h1 = which == 0 ? mod(-g1, n1) : g1, h2 = which == 1 ? mod(-g2, n2) : g2;
                perm[g1 * n2 + g2] = h1 * n2 + h2;
            }
        gens.emplace_back(std::move(perm), std::move(ph));
    }

    // orbits of the T-invariant support with consistent phases
    std::vector<i64> qn(D);
    for (i64 i = 0; i < D; ++i) qn[i] = form.q_num(i);
    std::vector<int> seen(D, 0), rr(D, 0);
    for (i64 g = 0; g < D; ++g) {
        if (qn[g] != 0 || seen[g]) continue;
        Column col;
        bool alive = true;
        std::vector<i64> stack{g};
        seen[g] = 1;
        rr[g] = 0;
        while (!stack.empty()) {
            i64 x = stack.back();
            stack.pop_back();
            col.members.emplace_back(x, rr[x]);
            for (auto& [perm, ph] : gens) {
                i64 y = perm[x];
                int r = static_cast<int>((rr[x] + ph[x]) % L2);
                if (!seen[y]) {
                    seen[y] = 1;
                    rr[y] = r;
                    stack.push_back(y);
                } else if (rr[y] != r) {
                    alive = false;
                }
            }
        }
        if (alive) {
            std::sort(col.members.begin(), col.members.end());
            sys.cols.push_back(std::move(col));
        }
    }
    if (sys.cols.empty()) return sys;

    // lower unipotent generator [[1,0],[c,1]] = S T^-c S^-1: S^-1 v must vanish where c q(beta) is not integral
    i64 c = ipow(s.p, s.k3);
    std::vector<i64> parent(D);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](i64 x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& [perm, ph] : gens)
        for (i64 x = 0; x < D; ++x) {
            i64 a = find(x), b = find(perm[x]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    i64 step = L2 / lev;
    for (i64 b = 0; b < D; ++b) {
        if (find(b) != b) continue;
        if (static_cast<i64>(static_cast<__int128>(c) * qn[b] % lev) == 0) continue;
        std::vector<RootSum> row(sys.cols.size());
        bool nonzero = false;
        for (size_t j = 0; j < sys.cols.size(); ++j) {
            for (auto& [g, r] : sys.cols[j].members) row[j].add(static_cast<int>((r + form.b_num(g, b) * step) % L2), 1);
            row[j].normalize(L2);
            nonzero = nonzero || !row[j].empty();
        }
        if (nonzero) sys.rows.push_back(std::move(row));
    }
    return sys;
}

double row_log2_norm(const std::vector<RootSum>& row) {
    long double s = 0;
    for (auto& x : row) {
        long double l = static_cast<long double>(x.l1());
        s += l * l;
    }
    return 0.5 * std::log2(static_cast<double>(s));
}

std::vector<std::vector<u64>> eval_rows(const FixedSystem& sys, const SplitPrime& sp, int j) {
    std::vector<std::vector<u64>> m(sys.rows.size(), std::vector<u64>(sys.cols.size()));
    for (size_t i = 0; i < sys.rows.size(); ++i)
        for (size_t k = 0; k < sys.cols.size(); ++k) m[i][k] = sys.rows[i][k].eval(sp, j);
    return m;
}

struct RankInfo {
    int rank = 0;
    std::vector<int> pivot_rows;
};

// Rank over Q(zeta_L2): a lower bound from one embedding, certified from above by all embeddings
// at enough primes that the product exceeds a Hadamard bound for every (r+1)-minor.
RankInfo certified_rank(const FixedSystem& sys) {
    RankInfo info;
    size_t R = sys.rows.size(), C = sys.cols.size();
    if (R == 0) return info;
    const SplitPrime& sp0 = split_prime(sys.L2, 0);
    info.rank = rank_mod_p(eval_rows(sys, sp0, 1), sp0, &info.pivot_rows);
    if (static_cast<size_t>(info.rank) == std::min(R, C)) return info;
    for (;;) {
        int r = info.rank;
        std::vector<double> norms;
        for (auto& row : sys.rows) norms.push_back(row_log2_norm(row));
        std::sort(norms.rbegin(), norms.rend());
        double H = 0;
        for (int i = 0; i <= r && i < static_cast<int>(norms.size()); ++i) H += norms[i];
        double acc = 0;
        bool raised = false;
        for (int idx = 0; acc <= H + 1; ++idx) {
            const SplitPrime& sp = split_prime(sys.L2, idx);
            for (int j = 1; j < sys.L2 && !raised; ++j) {
                if (gcd(j, sys.L2) != 1) continue;
                std::vector<int> piv;
                int rk = rank_mod_p(eval_rows(sys, sp, j), sp, &piv);
                if (rk > r) {
                    info.rank = rk;
                    info.pivot_rows = piv;
                    raised = true;
                }
            }
            if (raised) break;
            acc += std::log2(static_cast<double>(sp.P));
        }
        if (!raised) return info;
        if (static_cast<size_t>(info.rank) == std::min(R, C)) return info;
    }
}

std::mutex bf_mu;
std::map<std::tuple<i64, int, i64, bool, int, i64, int, int, int, bool>, int> bf_cache;

auto cache_key(const LocalSpec& c) {
    return std::make_tuple(c.p, c.k1, c.a1, c.has_second, c.k2, c.a2, c.e1, c.e2, c.k3, c.full);
}

// ---------- exact linear algebra over Q(zeta_L) ----------

// Row reduce in place; returns pivot columns.
std::vector<size_t> rref(std::vector<std::vector<CycScalar>>& m, size_t ncols) {
    std::vector<size_t> piv;
    size_t r = 0;
    for (size_t c = 0; c < ncols && r < m.size(); ++c) {
        size_t sel = m.size();
        for (size_t i = r; i < m.size(); ++i)
            if (!m[i][c].is_zero()) {
                sel = i;
                break;
            }
        if (sel == m.size()) continue;
        std::swap(m[r], m[sel]);
        CycScalar inv = m[r][c].inverse();
        for (size_t k = c; k < ncols; ++k)
            if (!m[r][k].is_zero()) m[r][k] = m[r][k] * inv;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            CycScalar f = m[i][c];
            for (size_t k = c; k < ncols; ++k)
                if (!m[r][k].is_zero()) m[i][k] -= f * m[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    m.resize(r);
    return piv;
}

int cyclotomic_degree(int L) { return static_cast<int>(euler_phi(L)); }

std::vector<FormVector> exact_kernel_vectors(const FixedSystem& sys, const RankInfo& info) {
    size_t C = sys.cols.size();
    int L = sys.L2;
    std::vector<std::vector<CycScalar>> m;
    for (int i : info.pivot_rows) {
        std::vector<CycScalar> row;
        for (size_t k = 0; k < C; ++k) row.push_back(sys.rows[i][k].to_cyc(L));
        m.push_back(std::move(row));
    }
    auto piv = rref(m, C);
    if (static_cast<int>(piv.size()) != info.rank) throw Error(ErrorKind::DimensionMismatch, "exact rank disagrees with the certified rank");
    std::vector<bool> is_piv(C, false);
    for (auto c : piv) is_piv[c] = true;
    std::vector<FormVector> out;
    for (size_t f = 0; f < C; ++f) {
        if (is_piv[f]) continue;
        std::vector<CycScalar> x(C, CycScalar::zero(L));
        x[f] = CycScalar::from_int(1, L);
        for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -m[i][f];
        FormVector v;
        for (size_t k = 0; k < C; ++k) {
            if (x[k].is_zero()) continue;
            for (auto& [g, r] : sys.cols[k].members) v.add(g, x[k].times_root(r));
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<LocalSpec> sectors_of(const LocalSpec& s) {
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

}  // namespace

int invariant_conductor(const LocalSpec& s) {
    auto [f1, f2] = engine_factors(s);
    return conductor_for(f1, f2);
}

int local_dim_bruteforce(const LocalSpec& s) {
    validate(s);
    if (s.full) {
        int d = 0;
        for (auto& t : sectors_of(s)) d += local_dim_bruteforce(t);
        return d;
    }
    if (!s.has_second && s.p == 2) engine_factors(s);  // throws SignatureParity
    LocalSpec c = canonical(s);
    auto key = cache_key(c);
    {
        std::lock_guard<std::mutex> lk(bf_mu);
        auto it = bf_cache.find(key);
        if (it != bf_cache.end()) return it->second;
    }
    FixedSystem sys = build_system(c);
    int dim = static_cast<int>(sys.cols.size()) - certified_rank(sys).rank;
    std::lock_guard<std::mutex> lk(bf_mu);
    bf_cache.emplace(key, dim);
    return dim;
}

size_t local_cache_size() {
    std::lock_guard<std::mutex> lk(bf_mu);
    return bf_cache.size();
}

std::vector<std::pair<LocalSpec, int>> local_cache_entries() {
    std::lock_guard<std::mutex> lk(bf_mu);
    std::vector<std::pair<LocalSpec, int>> out;
    for (auto& [k, d] : bf_cache) {
        LocalSpec s;
        std::tie(s.p, s.k1, s.a1, s.has_second, s.k2, s.a2, s.e1, s.e2, s.k3, s.full) = k;
        out.emplace_back(s, d);
    }
    return out;
}

void local_cache_seed(const LocalSpec& s, int dim) {
    validate(s);
    if (s.full) throw Error(ErrorKind::InvalidArgument, "cache records are single sectors");
    LocalSpec c = canonical(s);
    std::lock_guard<std::mutex> lk(bf_mu);
    bf_cache.emplace(cache_key(c), dim);
}

std::vector<FormVector> projector_average(const LocalSpec& s) {
    validate(s);
    std::vector<FormVector> all;
    int L = invariant_conductor(s);
    for (auto& t : sectors_of(s)) {
        FixedSystem sys = build_system(t);
        if (cyclotomic_degree(sys.L2) > 64 || sys.cols.size() > 400)
            throw Error(ErrorKind::GuardExceeded, "exact invariant basis of " + s.str() + " is beyond the exact-arithmetic bound");
        RankInfo info = certified_rank(sys);
        for (auto& v : exact_kernel_vectors(sys, info)) all.push_back(v);
    }
    return echelon(all, L);
}

std::vector<FormVector> echelon(std::vector<FormVector> vs, int L) {
    // dense over the union of supports, in index order
    std::vector<i64> idx;
    for (auto& v : vs)
        for (auto& [g, x] : v.c) idx.push_back(g);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<std::vector<CycScalar>> m;
    for (auto& v : vs) {
        std::vector<CycScalar> row;
        for (i64 g : idx) row.push_back(v.at(g, L).lifted(L));
        m.push_back(std::move(row));
    }
    rref(m, idx.size());
    std::vector<FormVector> out;
    for (auto& row : m) {
        FormVector v;
        for (size_t k = 0; k < idx.size(); ++k)
            if (!row[k].is_zero()) v.add(idx[k], row[k]);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<FormVector> projector_average_literal(const LocalSpec& s) {
    auto [f1, f2] = engine_factors(s);
    DiscriminantForm form({f1, f2});
    int L = conductor_for(f1, f2);
    if (form.order() > 256) throw Error(ErrorKind::GuardExceeded, "literal averaging is limited to 256-dimensional spaces");
    WeilRep rep(form, L);
    WordEvaluator ev(rep);
    i64 lev = form.level();
    int e = 0;
    for (i64 t = lev; t > 1; t /= s.p) ++e;
    i64 pe = ipow(s.p, e);
    std::vector<FormVector> span;
    // average over T^j: keeps exactly the basis vectors with Q = 0
    std::vector<i64> supp;
    for (i64 g = 0; g < form.order(); ++g)
        if (form.q_num(g) == 0) supp.push_back(g);
    // average over the diagonal matrices
    std::vector<GroupWord> diag;
    for (i64 a = 1; a <= pe; ++a)
        if (gcd(a, pe) == 1) diag.push_back(decompose_sl2(lift_diagonal(a, pe)));
    std::vector<FormVector> stage;
    for (i64 g : supp) {
        FormVector acc;
        for (auto& w : diag) acc = acc + ev.apply(w, g);
        if (!acc.is_zero()) stage.push_back(acc);
    }
    stage = echelon(stage, L);
    // average over [[1,0],[x,1]] for x in c Z / p^e. With c = 0 mod p every element of the group
    // is uniquely lower * diagonal * upper, so the three sums compose to the full average.
    i64 c = ipow(s.p, std::min(std::max(s.k3, 1), std::max(e, 1)));
    GroupWord low = decompose_sl2({1, 0, c, 1});
    i64 count = std::max<i64>(1, pe / c);
    std::vector<FormVector> sub;
    for (auto& u : stage) {
        FormVector acc, cur = u;
        for (i64 j = 0; j < count; ++j) {
            acc = acc + cur;
            cur = rep.apply(low, cur);
        }
        if (!acc.is_zero()) sub.push_back(acc);
    }
    sub = echelon(sub, L);
    if (s.k3 == 0 && e > 0) {
        // SL2 = union of r Gamma0(p) over r in {I} and T^j S, j mod p
        std::vector<FormVector> top;
        for (auto& u : sub) {
            FormVector su = rep.S(u), acc = u;
            for (i64 j = 0; j < s.p; ++j) acc = acc + rep.T(su, j);
            if (!acc.is_zero()) top.push_back(acc);
        }
        sub = echelon(top, L);
    }
    std::vector<FormVector> out;
    for (auto& acc : sub) {
        if (s.full) {
            if (!acc.is_zero()) out.push_back(acc);
        } else {
            FormVector pr = sector_project(form, acc, s.e1, s.has_second ? s.e2 : 1, L);
            if (!pr.is_zero()) out.push_back(pr);
        }
    }
    return echelon(out, L);
}

}  // namespace jacobi
