#include "jacobi/dimension.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "jacobi/errors.hpp"

namespace jacobi {

const char* method_name(Method m) {
    switch (m) {
        case Method::Bruteforce: return "bruteforce";
        case Method::Catalog: return "catalog";
        case Method::Theorem71: return "theorem71";
        case Method::Theorem72: return "theorem72";
        case Method::Auto: return "auto";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    for (Method m : {Method::Bruteforce, Method::Catalog, Method::Theorem71, Method::Theorem72, Method::Auto})
        if (s == method_name(m)) return m;
    // the CLI spells these short
    if (s == "thm71") return Method::Theorem71;
    if (s == "thm72") return Method::Theorem72;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + s + "'");
}

int f_symbol(i64 m, const std::vector<i64>& primes) {
    for (i64 p : primes) {
        if (gcd(m, p) != 1) throw Error(ErrorKind::NotCoprime, "f(m; P) needs m prime to every p");
        if (kronecker(m, p) != 1) return 0;
    }
    return 1;
}

std::vector<i64> enumerate_mprime(i64 M) {
    if (M < 1) throw Error(ErrorKind::InvalidArgument, "M must be positive");
    std::vector<i64> out;
    for (i64 d : divisors(M))
        if (is_squarefree(M / d)) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

i64 assembly_M(i64 m, i64 N) {
    if (m < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "index and level must be positive");
    return lcm(m, N / gcd(N, 4));
}

namespace {

// a_2 = -(m/m_2)^{-1} mod 4 m_2 and a_p = -(4m/m_p)^{-1} mod m_p
i64 site_coef(i64 m, i64 p) {
    i64 mp = p_part(m, p);
    if (p == 2) return mod(-mod_inverse(m / mp, 4 * mp), 4 * mp);
    if (mp == 1) return 1;
    return mod(-mod_inverse(mod(4 * (m / mp), mp), mp), mp);
}

i64 factor_order(i64 p, int k) { return p == 2 ? ipow(2, k + 1) : ipow(p, k); }

// A local dimension that may be unknown (catalog gaps). Zero annihilates unknowns.
struct Val {
    bool known = true;
    i64 v = 0;
};

Val operator*(Val a, Val b) {
    if ((a.known && a.v == 0) || (b.known && b.v == 0)) return {true, 0};
    if (!a.known || !b.known) return {false, 0};
    return {true, a.v * b.v};
}

Val operator+(Val a, Val b) {
    if (!a.known || !b.known) return {false, 0};
    return {true, a.v + b.v};
}

std::vector<i64> odd_sites(i64 M) {
    std::vector<i64> out;
    for (auto [p, e] : factorize(static_cast<u64>(M)).factors)
        if (p != 2) out.push_back(static_cast<i64>(p));
    return out;
}

}  // namespace

std::vector<LocalSpec> assembly_sites(i64 m, i64 mprime, i64 N) {
    std::vector<i64> sites{2};
    for (i64 p : odd_sites(assembly_M(m, N))) sites.push_back(p);
    std::vector<LocalSpec> out;
    for (i64 p : sites) {
        LocalSpec s;
        s.p = p;
        s.k1 = valuation(m, p);
        s.a1 = site_coef(m, p);
        s.k2 = valuation(mprime, p);
        s.a2 = site_coef(mprime, p);
        s.k3 = valuation(N, p);
        out.push_back(s);
    }
    return out;
}

namespace {

DimResult assemble(i64 m, i64 N, bool brute, const DimOptions& opt) {
    DimResult res;
    res.m = m;
    res.N = N;
    res.method = brute ? "bruteforce" : "catalog";
    Val total{true, 0};
    for (i64 mp : enumerate_mprime(assembly_M(m, N))) {
        auto sites = assembly_sites(m, mp, N);
        // st[a][b]: a = parity of minus signs on the m side, b = on the m' side
        std::array<std::array<Val, 2>, 2> st{};
        st[0][0] = {true, 1};
        st[0][1] = st[1][0] = st[1][1] = {true, 0};
        for (auto& base : sites) {
            std::array<std::array<Val, 2>, 2> loc{};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    LocalSpec s = base;
                    s.e1 = a ? -1 : 1;
                    s.e2 = b ? -1 : 1;
                    if ((a && s.k1 == 0) || (b && s.k2 == 0)) {
                        loc[a][b] = {true, 0};  // D_1 and L_1 have no minus part
                        continue;
                    }
                    SiteTrace tr;
                    tr.p = s.p;
                    tr.spec = "m'=" + std::to_string(mp) + " " + s.str();
                    if (brute) {
                        i64 sz = factor_order(s.p, s.k1) * factor_order(s.p, s.k2);
                        if (sz > opt.guard)
                            throw Error(ErrorKind::GuardExceeded, "local space " + s.str() + " has dimension " +
                                                                      std::to_string(sz) + " > " +
                                                                      std::to_string(opt.guard));
                        tr.dim = local_dim_bruteforce(s);
                        tr.provenance = {"bruteforce-fixed-space"};
                        loc[a][b] = {true, tr.dim};
                    } else {
                        try {
                            ClosedDim cd = local_dim_closed(s);
                            tr.dim = cd.dim;
                            tr.provenance = cd.trace;
                            loc[a][b] = {true, cd.dim};
                        } catch (const Error& e) {
                            if (e.kind() != ErrorKind::NotCovered) throw;
                            tr.dim = -1;
                            tr.provenance = {"not-covered"};
                            loc[a][b] = {false, 0};
                        }
                    }
                    if (!opt.trace_nonzero_only || tr.dim != 0) res.local_trace.push_back(tr);
                }
            std::array<std::array<Val, 2>, 2> nx{};
            for (auto& row : nx) row.fill(Val{true, 0});
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            nx[x ^ a][y ^ b] = nx[x ^ a][y ^ b] + st[x][y] * loc[a][b];
            st = nx;
        }
        total = total + st[1][0];
    }
    if (!total.known)
        throw Error(ErrorKind::NotCovered, "catalog does not cover every local factor of J_{1," + std::to_string(m) +
                                               "}(" + std::to_string(N) + ")");
    res.dim = total.v;
    return res;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// closed engines

namespace {

struct PP {
    i64 p;
    int n;
};

std::vector<PP> prime_powers(i64 x) {
    std::vector<PP> out;
    for (auto [p, e] : factorize(static_cast<u64>(x)).factors) out.push_back({static_cast<i64>(p), e});
    return out;
}

i64 ipart(i64 a, i64 b) { return floor_div(a, b); }  // [a/b]
i64 pos(i64 x) { return std::max<i64>(0, x); }

// K_i^j without the power-of-two multiplier. k2 is the 2-exponent of the level.
i64 k_core(int i, int j, int k2, i64 Pi) {
    auto half = [&](i64 P) { return (kronecker(P, 2) + 1) / 2; };  // ((P/2)+1)/2
    if (j == 0) {
        switch (i) {
            case 1: return 1 + ipart(k2, 2);
            case 2: return pos(ipart(k2 - 4, 2));
            case 3: return pos(ipart(k2 - 7, 2));
            default: return 0;
        }
    }
    if (j == 1) {
        switch (i) {
            case 1: return ipart(k2 + 1, 2) + half(Pi);
            case 2: return pos(ipart(k2 - 3, 2));
            case 3: return pos(ipart(k2 - 6, 2));
            default: return half(Pi);
        }
    }
    if (i == 2 || i == 3) return 0;
    i64 h = half(Pi);  // 1 when (P/2) = 1
    if (j % 2 == 0) return (i == 1 ? 1 : 0) + h * j / 2;
    return h * (1 + j) / 2;
}

bool has_prime(const std::vector<i64>& v, i64 p) { return std::find(v.begin(), v.end(), p) != v.end(); }

template <class F>
void for_subsets(size_t n, F&& f) {
    for (u64 mask = 0; mask < (u64(1) << n); ++mask) f(mask);
}

int popcount(u64 x) { return __builtin_popcountll(x); }

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::HypothesisViolation, what);
}

}  // namespace

i64 jacobi_dim_thm71(i64 m, i64 N, int j, int k) {
    require(m >= 1 && N >= 1 && m % 2 == 1 && N % 2 == 1, "coprime formula needs odd m and odd N");
    require(gcd(m, N) == 1, "coprime formula needs gcd(m, N) = 1");
    require(j >= 0 && k >= 0, "negative exponent");
    require(j <= 1 || k == 0, "coprime formula covers j >= 2 only at odd level");

    std::vector<PP> P1m, P0m;
    for (auto pp : prime_powers(m)) (pp.n % 2 ? P1m : P0m).push_back(pp);
    std::vector<i64> P1m_primes;
    for (auto& x : P1m) P1m_primes.push_back(x.p);
    int n_P2 = 0;
    std::vector<PP> big;  // P_{>2}^{N,3} first, then P_{>2}^{N,1}
    std::vector<PP> big1;
    for (auto pp : prime_powers(N)) {
        if (pp.n == 2) ++n_P2;
        if (pp.n >= 3) (pp.p % 4 == 3 ? big : big1).push_back(pp);
    }
    size_t n3 = big.size();
    big.insert(big.end(), big1.begin(), big1.end());
    i64 mult = P1m.empty() ? 1 : (i64(1) << (P1m.size() - 1));

    i64 total = 0;
    for (int i = 1; i <= 4; ++i) {
        if (j >= 2 && (i == 2 || i == 3)) continue;
        for_subsets(big.size(), [&](u64 mask) {
            int s3 = popcount(mask & ((u64(1) << n3) - 1));
            if ((i == 1 || i == 4) && s3 % 2 == 0) return;
            if (i == 2 && s3 % 2 == 1) return;
            i64 Pi = (i == 3) ? -2 : -1;
            i64 base = 1;
            for (size_t t = 0; t < big.size(); ++t) {
                if (mask >> t & 1) {
                    Pi *= big[t].p;
                    base *= ipart(big[t].n - 1, 2);
                } else {
                    base *= ipart(big[t].n + 2, 2);
                }
            }
            if (f_symbol(Pi, P1m_primes) != 1) return;
            for (auto& x : P1m) base *= (x.n + 1) / 2;
            std::vector<PP> P0i;
            for (auto& x : P0m)
                if (kronecker(Pi, x.p) == 1) P0i.push_back(x);
            i64 sum0 = 0;
            for_subsets(P0i.size(), [&](u64 s) {
                if (P1m.empty()) {
                    bool odd = popcount(s) % 2 == 1;
                    if (i <= 3 && !odd) return;
                    if (i == 4 && odd) return;
                }
                i64 t = 1;
                for (size_t q = 0; q < P0i.size(); ++q) t *= (s >> q & 1) ? P0i[q].n / 2 : (P0i[q].n + 2) / 2;
                sum0 += t;
            });
            total += base * sum0 * k_core(i, j, k, Pi) * mult;
        });
    }
    return total << n_P2;
}

i64 jacobi_dim_thm72(i64 m, i64 N, i64 Nprime, int j, int k) {
    require(m >= 1 && m % 2 == 1 && is_squarefree(m), "squarefree formula needs odd squarefree m");
    require(N >= 1 && N % 2 == 1 && Nprime >= 1 && Nprime % 2 == 1, "squarefree formula needs odd N and N'");
    require(gcd(m, Nprime) == 1, "squarefree formula needs gcd(m, N') = 1");
    for (auto pp : prime_powers(N)) require(m % pp.p == 0, "every prime of N must divide m");
    require(j == 0 || j == 1, "squarefree formula covers j in {0, 1}");
    require(k >= 0, "negative exponent");

    std::vector<i64> P0m;
    std::vector<PP> Ppos;  // P_{>0}^m with n = n_p^N
    for (auto pp : prime_powers(m)) {
        int n = valuation(N, pp.p);
        if (n == 0)
            P0m.push_back(pp.p);
        else
            Ppos.push_back({pp.p, n});
    }
    int n_P2 = 0;
    std::vector<PP> bigp, bigp1;  // N' primes with exponent >= 3; the 3 mod 4 ones first
    for (auto pp : prime_powers(Nprime)) {
        if (pp.n == 2) ++n_P2;
        if (pp.n >= 3) (pp.p % 4 == 3 ? bigp : bigp1).push_back(pp);
    }
    size_t n3p = bigp.size();
    bigp.insert(bigp.end(), bigp1.begin(), bigp1.end());
    std::vector<PP> bign, bign1;  // N primes with exponent >= 2; 3 mod 4 first
    for (auto& pp : Ppos)
        if (pp.n >= 2) (pp.p % 4 == 3 ? bign : bign1).push_back(pp);
    size_t n3n = bign.size();
    bign.insert(bign.end(), bign1.begin(), bign1.end());
    i64 mult = P0m.empty() ? 1 : (i64(1) << (P0m.size() - 1));

    i64 total = 0;
    for (int i = 1; i <= 4; ++i) {
        for_subsets(bigp.size(), [&](u64 mp) {
            for_subsets(bign.size(), [&](u64 mn) {
                int s3 = popcount(mp & ((u64(1) << n3p) - 1)) + popcount(mn & ((u64(1) << n3n) - 1));
                if ((i == 1 || i == 4) && s3 % 2 == 0) return;
                if (i == 2 && s3 % 2 == 1) return;
                i64 Pi = (i == 3) ? -2 : -1;
                i64 base = 1;
                for (size_t t = 0; t < bigp.size(); ++t) {
                    if (mp >> t & 1) {
                        Pi *= bigp[t].p;
                        base *= ipart(bigp[t].n - 1, 2);
                    } else {
                        base *= ipart(bigp[t].n + 2, 2);
                    }
                }
                std::vector<i64> SN;
                for (size_t t = 0; t < bign.size(); ++t)
                    if (mn >> t & 1) {
                        Pi *= bign[t].p;
                        base *= ipart(bign[t].n, 2);
                        SN.push_back(bign[t].p);
                    }
                if (f_symbol(Pi, P0m) != 1) return;
                std::vector<PP> rest;
                for (auto& x : Ppos)
                    if (!has_prime(SN, x.p)) rest.push_back(x);
                i64 sum = 0;
                for_subsets(rest.size(), [&](u64 s) {
                    if (P0m.empty()) {
                        bool odd = popcount(s) % 2 == 1;
                        if (i <= 3 && !odd) return;
                        if (i == 4 && odd) return;
                    }
                    i64 t = 1;
                    for (size_t q = 0; q < rest.size(); ++q) {
                        int kr = kronecker(Pi, rest[q].p);
                        if (s >> q & 1) {
                            if (kr != 1) return;
                        } else {
                            t *= ipart(rest[q].n + 1, 2) + (kr + 1) / 2;
                        }
                    }
                    sum += t;
                });
                total += base * sum * k_core(i, j, k, Pi) * mult;
            });
        });
    }
    return total << n_P2;
}

std::optional<Method> theorem_route(i64 m, i64 N) {
    int j = valuation(m, 2), k = valuation(N, 2);
    i64 mo = m >> j, No = N >> k;
    if (gcd(mo, No) == 1 && (j <= 1 || k == 0)) return Method::Theorem71;
    if (j <= 1 && is_squarefree(mo)) return Method::Theorem72;
    return std::nullopt;
}

i64 jacobi_dim_theorem(i64 m, i64 N, Method which) {
    if (m < 1 || N < 1) throw Error(ErrorKind::InvalidArgument, "index and level must be positive");
    int j = valuation(m, 2), k = valuation(N, 2);
    i64 mo = m >> j, No = N >> k;
    if (which == Method::Theorem71) return jacobi_dim_thm71(mo, No, j, k);
    if (which == Method::Theorem72) {
        // primes of the odd level dividing m go to N, the rest to N'
        i64 Nm = 1;
        for (auto pp : prime_powers(No))
            if (mo % pp.p == 0) Nm *= ipow(pp.p, pp.n);
        return jacobi_dim_thm72(mo, Nm, No / Nm, j, k);
    }
    throw Error(ErrorKind::InvalidArgument, "not a theorem method");
}

DimResult jacobi_dim(i64 m, i64 N, Method method, const DimOptions& opt) {
    assembly_M(m, N);  // validates
    auto theorem = [&](Method w) {
        DimResult r;
        r.m = m;
        r.N = N;
        r.dim = jacobi_dim_theorem(m, N, w);
        r.method = method_name(w);
        return r;
    };
    switch (method) {
        case Method::Bruteforce: return assemble(m, N, true, opt);
        case Method::Catalog: return assemble(m, N, false, opt);
        case Method::Theorem71:
        case Method::Theorem72: return theorem(method);
        case Method::Auto: break;
    }
    if (auto w = theorem_route(m, N)) return theorem(*w);
    try {
        return assemble(m, N, false, opt);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotCovered) throw;
    }
    return assemble(m, N, true, opt);
}

i64 jacobi_dim_value(i64 m, i64 N, Method method) { return jacobi_dim(m, N, method).dim; }

// ---------------------------------------------------------------------------------------------
// vanishing and non-vanishing criteria

namespace {

bool exponent_bounds(i64 N, int two_max, int three_mod4_max) {
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
    for (auto pp : prime_powers(N)) {
        if (pp.p == 2 && pp.n > two_max) return false;
        if (pp.p % 4 == 3 && pp.n > three_mod4_max) return false;
    }
    return true;
}

}  // namespace

bool vanish_all_m(i64 N) { return exponent_bounds(N, 4, 1); }
bool vanish_coprime_m(i64 N) { return exponent_bounds(N, 5, 2); }

const char* relation_str(Relation r) { return r == Relation::Equal ? "=" : ">="; }

Relation scaling_check(i64 m, i64 N, i64 q, int n) {
    if (!is_prime(static_cast<u64>(q))) throw Error(ErrorKind::InvalidArgument, "q must be prime");
    if (gcd(q, m * N) != 1) throw Error(ErrorKind::NotCoprime, "q must not divide mN");
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
    bool eq = (q == 2) ? n <= 5 : n <= 2;
    return eq ? Relation::Equal : Relation::AtLeast;
}

J12Verdict nontrivial_J12(i64 N) {
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
    std::vector<PP> big;
    int squares = 0;
    for (auto pp : prime_powers(N)) {
        if (pp.p == 2) continue;
        if (pp.n >= 3)
            big.push_back(pp);
        else if (pp.n == 2)
            ++squares;
    }
    // every odd prime lands in one of the two exponent classes, so any N >= 1 has the shape
    J12Verdict v;
    for_subsets(big.size(), [&](u64 s) {
        if (s == 0) return;
        i64 prod = 1;
        for (size_t t = 0; t < big.size(); ++t)
            if (s >> t & 1) prod = mod(prod * big[t].p, 8);
        if (prod == 7) v.nontrivial = true;
    });
    if (!v.nontrivial) return v;
    auto r_ok = [](int n) { return n == 3 || n == 4; };
    if (squares == 0) {
        if (big.size() == 1) v.dim_one = big[0].p % 8 == 7 && r_ok(big[0].n);
        if (big.size() == 2) {
            i64 a = big[0].p % 8, b = big[1].p % 8;
            v.dim_one = ((a == 3 && b == 5) || (a == 5 && b == 3)) && r_ok(big[0].n) && r_ok(big[1].n);
        }
    }
    return v;
}

bool nontrivial_J1p(i64 p, i64 N) {
    if (p < 3 || !is_prime(static_cast<u64>(p))) throw Error(ErrorKind::InvalidArgument, "p must be an odd prime");
    if (N < 1) throw Error(ErrorKind::InvalidArgument, "level must be positive");
    int a = valuation(N, 2);
    std::vector<i64> q3, q1;  // primes q != p with exponent >= 3
    for (auto pp : prime_powers(N)) {
        if (pp.p == 2 || pp.p == p || pp.n < 3) continue;
        (pp.p % 4 == 3 ? q3 : q1).push_back(pp.p);
    }
    int m1 = kronecker(-1, p);
    for (i64 q : q3)
        if (kronecker(-q, p) == 1) return true;  // (1)
    for (i64 qi : q3)
        for (i64 qj : q1)
            if (kronecker(-qi, p) == -1 && kronecker(qj, p) == -1) return true;  // (2)
    if (a >= 6 && m1 == 1) return true;  // (3)
    if (a >= 6 && m1 == -1)
        for (i64 q : q1)
            if (kronecker(q, p) == -1) return true;  // (4)
    if (a >= 9 && kronecker(-2, p) == 1) return true;  // (5)
    return false;
}

// ---------------------------------------------------------------------------------------------
// text forms

i64 parse_level(const std::string& s) {
    auto bad = [&]() { return Error(ErrorKind::InvalidArgument, "cannot parse level '" + s + "'"); };
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw bad();
    i64 out = 1;
    std::stringstream ss(t);
    std::string term;
    while (std::getline(ss, term, '*')) {
        auto caret = term.find('^');
        std::string b = term.substr(0, caret), e = caret == std::string::npos ? "1" : term.substr(caret + 1);
        if (b.empty() || e.empty() || !std::all_of(b.begin(), b.end(), ::isdigit) ||
            !std::all_of(e.begin(), e.end(), ::isdigit) || b.size() > 18 || e.size() > 3)
            throw bad();
        i64 base = std::stoll(b);
        int ex = std::stoi(e);
        if (base < 1) throw bad();
        for (int r = 0; r < ex; ++r) {
            if (out > (i64(1) << 62) / base) throw bad();
            out *= base;
        }
    }
    if (!t.empty() && t.back() == '*') throw bad();
    return out;
}

std::string level_str(i64 N) {
    if (N == 1) return "1";
    std::string out;
    for (auto pp : prime_powers(N)) {
        if (!out.empty()) out += "*";
        out += std::to_string(pp.p);
        if (pp.n > 1) out += "^" + std::to_string(pp.n);
    }
    return out;
}

std::string dim_json(const DimResult& r, int indent) {
    nlohmann::json j;
    j["m"] = r.m;
    j["N"] = r.N;
    j["dim"] = r.dim;
    j["method"] = r.method;
    j["local_trace"] = nlohmann::json::array();
    for (auto& t : r.local_trace)
        j["local_trace"].push_back({{"p", t.p},
                                    {"spec", t.spec},
                                    {"dim", t.dim < 0 ? nlohmann::json(nullptr) : nlohmann::json(t.dim)},
                                    {"provenance", t.provenance}});
    return j.dump(indent);
}

std::vector<i64> printed_table_levels() {
    return {27, 343, 1331, 512, 1024, 64 * 27, 64 * 343, i64(64) * 27 * 125 * 343};
}

std::string table_csv(int m_max, const std::vector<i64>& levels) {
    std::ostringstream os;
    os << "m";
    for (i64 N : levels) os << "," << level_str(N);
    os << "\n";
    for (int m = 1; m <= m_max; ++m) {
        os << m;
        for (i64 N : levels) {
            auto w = theorem_route(m, N);
            os << ",";
            if (w)
                os << jacobi_dim_theorem(m, N, *w);
            else
                os << "-";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace jacobi
