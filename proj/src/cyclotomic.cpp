#include "jacobi/cyclotomic.hpp"

#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

using Poly = std::vector<i64>;  // ascending coefficients

Poly poly_divexact(Poly num, const Poly& den) {
    int dn = static_cast<int>(num.size()) - 1, dd = static_cast<int>(den.size()) - 1;
    Poly q(dn - dd + 1, 0);
    for (int i = dn; i >= dd; --i) {
        i64 c = num[i] / den[dd];
        q[i - dd] = c;
        for (int j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    return q;
}

Poly cyclotomic_poly(int n) {
    static std::map<int, Poly> memo;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (i64 d : divisors(n)) {
        if (d == n) continue;
        p = poly_divexact(p, cyclotomic_poly(static_cast<int>(d)));
    }
    memo[n] = p;
    return p;
}

std::unique_ptr<CycTable> build_table(int L) {
    auto t = std::make_unique<CycTable>();
    t->L = L;
    t->cyclo = cyclotomic_poly(L);
    t->phi = static_cast<int>(t->cyclo.size()) - 1;
    int phi = t->phi;
    t->rows.resize(L);
    std::vector<i64> cur(phi, 0);
    cur[0] = 1;
    for (int k = 0; k < L; ++k) {
        if (k > 0) {
            i64 top = cur[phi - 1];
            for (int i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
            cur[0] = 0;
            if (top != 0)
                for (int i = 0; i < phi; ++i) cur[i] -= top * t->cyclo[i];
        }
        for (int i = 0; i < phi; ++i)
            if (cur[i] != 0) t->rows[k].emplace_back(i, cur[i]);
    }
    return t;
}

}  // namespace

const CycTable& cyc_table(int L) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CycTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(L);
    if (it != cache.end()) return *it->second;
    // cyclotomic_poly memo is guarded by the same lock
    auto t = build_table(L);
    const CycTable& ref = *t;
    cache[L] = std::move(t);
    return ref;
}

CycScalar::CycScalar() : L_(1), c_(1) {}

CycScalar::CycScalar(int L) : L_(L), c_(cyc_table(L).phi) {}

CycScalar CycScalar::from_int(i64 v, int L) {
    CycScalar r(L);
    r.c_[0] = v;
    return r;
}

CycScalar CycScalar::from_rational(const mpq_class& v, int L) {
    CycScalar r(L);
    r.c_[0] = v;
    return r;
}

CycScalar CycScalar::root(i64 k, int L) {
    const CycTable& t = cyc_table(L);
    CycScalar r(L);
    for (auto [i, c] : t.rows[mod(k, L)]) r.c_[i] = c;
    return r;
}

CycScalar CycScalar::from_powers(const std::vector<mpq_class>& a, int L) {
    const CycTable& t = cyc_table(L);
    CycScalar r(L);
    for (int k = 0; k < L && k < static_cast<int>(a.size()); ++k) {
        if (a[k] == 0) continue;
        if (k < t.phi) {
            r.c_[k] += a[k];
        } else {
            for (auto [i, c] : t.rows[k]) r.c_[i] += a[k] * c;
        }
    }
    return r;
}

CycScalar CycScalar::from_int_powers(const std::vector<i64>& a, int L) {
    const CycTable& t = cyc_table(L);
    std::vector<__int128> acc(t.phi, 0);
    for (int k = 0; k < L && k < static_cast<int>(a.size()); ++k) {
        if (a[k] == 0) continue;
        if (k < t.phi) {
            acc[k] += a[k];
        } else {
            for (auto [i, c] : t.rows[k]) acc[i] += static_cast<__int128>(a[k]) * c;
        }
    }
    CycScalar r(L);
    for (int i = 0; i < t.phi; ++i) {
        if (acc[i] == 0) continue;
        __int128 v = acc[i];
        if (v >= INT64_MIN && v <= INT64_MAX) {
            r.c_[i] = mpq_class(static_cast<long>(v));
        } else {
            bool neg = v < 0;
            unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
            mpz_class z(static_cast<unsigned long>(u >> 64));
            z <<= 64;
            z += static_cast<unsigned long>(u & ~0ULL);
            r.c_[i] = neg ? mpq_class(-z) : mpq_class(z);
        }
    }
    return r;
}

CycScalar CycScalar::lifted(int L2) const {
    if (L2 == L_) return *this;
    if (L2 % L_ != 0) throw Error(ErrorKind::ConductorMismatch, "cannot lift conductor " + std::to_string(L_) + " to " + std::to_string(L2));
    const CycTable& t = cyc_table(L2);
    int step = L2 / L_;
    CycScalar r(L2);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (auto [j, c] : t.rows[(i * step) % L2]) r.c_[j] += c_[i] * c;
    }
    return r;
}

bool CycScalar::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool CycScalar::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

CycScalar CycScalar::operator+(const CycScalar& o) const {
    CycScalar r = *this;
    r += o;
    return r;
}

CycScalar CycScalar::operator-(const CycScalar& o) const {
    CycScalar r = *this;
    r -= o;
    return r;
}

CycScalar& CycScalar::operator+=(const CycScalar& o) {
    if (o.L_ != L_) {
        int L2 = static_cast<int>(lcm(L_, o.L_));
        *this = lifted(L2);
        return *this += o.lifted(L2);
    }
    for (size_t i = 0; i < c_.size(); ++i)
        if (o.c_[i] != 0) c_[i] += o.c_[i];
    return *this;
}

CycScalar& CycScalar::operator-=(const CycScalar& o) {
    if (o.L_ != L_) {
        int L2 = static_cast<int>(lcm(L_, o.L_));
        *this = lifted(L2);
        return *this -= o.lifted(L2);
    }
    for (size_t i = 0; i < c_.size(); ++i)
        if (o.c_[i] != 0) c_[i] -= o.c_[i];
    return *this;
}

CycScalar CycScalar::operator-() const {
    CycScalar r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

CycScalar CycScalar::scaled(const mpq_class& q) const {
    CycScalar r = *this;
    for (auto& x : r.c_) x *= q;
    return r;
}

CycScalar CycScalar::operator*(const CycScalar& o) const {
    if (o.L_ != L_) {
        int L2 = static_cast<int>(lcm(L_, o.L_));
        return lifted(L2) * o.lifted(L2);
    }
    const CycTable& t = cyc_table(L_);
    int phi = t.phi;
    std::vector<int> ia, ib;
    for (int i = 0; i < phi; ++i) {
        if (c_[i] != 0) ia.push_back(i);
        if (o.c_[i] != 0) ib.push_back(i);
    }
    CycScalar r(L_);
    if (ia.empty() || ib.empty()) return r;
    std::vector<mpq_class> acc(2 * phi);
    std::vector<char> used(2 * phi, 0);
    for (int i : ia)
        for (int j : ib) {
            acc[i + j] += c_[i] * o.c_[j];
            used[i + j] = 1;
        }
    for (int k = 0; k < 2 * phi; ++k) {
        if (!used[k] || acc[k] == 0) continue;
        if (k < phi) {
            r.c_[k] += acc[k];
        } else {
            for (auto [idx, c] : t.rows[k % L_]) r.c_[idx] += acc[k] * c;
        }
    }
    return r;
}

CycScalar CycScalar::times_root(i64 k) const {
    const CycTable& t = cyc_table(L_);
    CycScalar r(L_);
    for (int i = 0; i < t.phi; ++i) {
        if (c_[i] == 0) continue;
        for (auto [idx, c] : t.rows[mod(i + k, L_)]) r.c_[idx] += c_[i] * c;
    }
    return r;
}

CycScalar CycScalar::conj() const {
    const CycTable& t = cyc_table(L_);
    CycScalar r(L_);
    for (int i = 0; i < t.phi; ++i) {
        if (c_[i] == 0) continue;
        for (auto [idx, c] : t.rows[mod(-i, L_)]) r.c_[idx] += c_[i] * c;
    }
    return r;
}

CycScalar CycScalar::inverse() const {
    if (is_zero()) throw Error(ErrorKind::NotInvertible, "inverse of zero");
    const CycTable& t = cyc_table(L_);
    int n = t.phi;
    if (is_rational()) return from_rational(1 / c_[0], L_);
    // column j of the multiplication matrix is this * zeta^j
    std::vector<std::vector<mpq_class>> M(n, std::vector<mpq_class>(n + 1));
    for (int j = 0; j < n; ++j) {
        CycScalar col = times_root(j);
        for (int i = 0; i < n; ++i) M[i][j] = col.c_[i];
    }
    M[0][n] = 1;
    for (int c = 0, r = 0; c < n; ++c, ++r) {
        int piv = -1;
        for (int i = r; i < n; ++i)
            if (M[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) throw Error(ErrorKind::NotInvertible, "singular multiplication matrix");
        std::swap(M[r], M[piv]);
        mpq_class inv = 1 / M[r][c];
        for (int j = c; j <= n; ++j) M[r][j] *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == r || M[i][c] == 0) continue;
            mpq_class f = M[i][c];
            for (int j = c; j <= n; ++j)
                if (M[r][j] != 0) M[i][j] -= f * M[r][j];
        }
    }
    CycScalar r(L_);
    for (int i = 0; i < n; ++i) r.c_[i] = M[i][n];
    return r;
}

bool CycScalar::operator==(const CycScalar& o) const {
    if (o.L_ != L_) {
        int L2 = static_cast<int>(lcm(L_, o.L_));
        return lifted(L2) == o.lifted(L2);
    }
    return c_ == o.c_;
}

std::complex<double> CycScalar::to_complex() const {
    std::complex<double> s = 0;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        double ang = 2 * M_PI * static_cast<double>(i) / L_;
        s += c_[i].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
}

std::string CycScalar::str() const {
    std::ostringstream os;
    bool any = false;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (any) os << " + ";
        any = true;
        os << c_[i].get_str();
        if (i > 0) os << "*z" << L_ << "^" << i;
    }
    if (!any) os << "0";
    return os.str();
}

CycScalar cyc_e(const QmodZ& x, int L) {
    if (L % x.den != 0) {
        throw Error(ErrorKind::ConductorMismatch,
                    "denominator " + std::to_string(x.den) + " does not divide conductor " + std::to_string(L));
    }
    return CycScalar::root(x.num * (L / x.den), L);
}

CycScalar quadratic_gauss_sum(i64 a, i64 M, int L) {
    if (L == 0) L = static_cast<int>(M);
    CycScalar s(L);
    for (i64 k = 1; k <= M; ++k) s += cyc_e(QmodZ(static_cast<i64>((static_cast<__int128>(a) * k % M * k) % M), M), L);
    return s;
}

int sqrt_conductor(i64 n) {
    i64 L = 1;
    for (auto [p, e] : factorize(static_cast<u64>(n)).factors) {
        if (e % 2 == 0) continue;
        L = lcm(L, p == 2 ? 8 : 4 * static_cast<i64>(p));
    }
    return static_cast<int>(L);
}

CycScalar exact_sqrt(i64 n, int L) {
    if (L % sqrt_conductor(n) != 0) throw Error(ErrorKind::ConductorTooSmall, "conductor cannot hold sqrt(" + std::to_string(n) + ")");
    CycScalar r = CycScalar::from_int(1, L);
    for (auto [p, e] : factorize(static_cast<u64>(n)).factors) {
        r = r.scaled(mpq_class(static_cast<long>(ipow(static_cast<i64>(p), e / 2))));
        if (e % 2 == 0) continue;
        if (p == 2) {
            r *= CycScalar::root(L / 8, L) + CycScalar::root(-L / 8, L);
        } else {
            // g = sum e(k^2/p) equals sqrt(p) or i*sqrt(p)
            CycScalar g = quadratic_gauss_sum(1, static_cast<i64>(p), L);
            if (p % 4 == 3) g = g.times_root(-L / 4);
            r *= g;
        }
    }
    return r;
}

}  // namespace jacobi
