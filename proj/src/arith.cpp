#include "jacobi/arith.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "jacobi/errors.hpp"

namespace jacobi {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotCoprime: return "NotCoprime";
        case ErrorKind::ConductorMismatch: return "ConductorMismatch";
        case ErrorKind::EvenModulus: return "EvenModulus";
        case ErrorKind::NotPrimePower: return "NotPrimePower";
        case ErrorKind::NoMatch: return "NoMatch";
        case ErrorKind::ConductorTooSmall: return "ConductorTooSmall";
        case ErrorKind::NotInvertible: return "NotInvertible";
        case ErrorKind::SignatureParity: return "SignatureParity";
        case ErrorKind::NotCovered: return "NotCovered";
        case ErrorKind::NoExplicitBasis: return "NoExplicitBasis";
        case ErrorKind::HypothesisViolation: return "HypothesisViolation";
        case ErrorKind::ShapeViolation: return "ShapeViolation";
        case ErrorKind::UnknownId: return "UnknownId";
        case ErrorKind::NotIndexM: return "NotIndexM";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::GuardExceeded: return "GuardExceeded";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return std::lcm(a, b);
}

i64 mod(i64 a, i64 n) {
    i64 r = a % n;
    return r < 0 ? r + n : r;
}

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 ipow(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

namespace {

int jacobi_odd(i64 a, i64 n) {
    // n odd positive
    a = mod(a, n);
    int t = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 r = n % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int t = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) t = -t;
    }
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        i64 r = mod(a, 8);
        if (r == 3 || r == 5) t = -t;
    }
    if (n == 1) return t;
    return t * jacobi_odd(a, n);
}

i64 mod_inverse(i64 a, i64 n) {
    if (n == 1) return 0;
    i64 old_r = mod(a, n), r = n, old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        throw Error(ErrorKind::NotCoprime, "gcd(" + std::to_string(a) + ", " + std::to_string(n) + ") != 1");
    }
    return mod(old_s, n);
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
        u64 x = powmod(a % n, d, n);
        if (a % n == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
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

namespace {

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    std::mt19937_64 rng(n);
    while (true) {
        u64 c = rng() % (n - 1) + 1;
        u64 y = rng() % n, m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

PrimeFactorization factorize(u64 n) {
    PrimeFactorization pf;
    if (n <= 1) return pf;
    std::vector<u64> ps;
    for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
        while (n % p == 0) {
            ps.push_back(p);
            n /= p;
        }
    }
    factor_rec(n, ps);
    std::sort(ps.begin(), ps.end());
    for (u64 p : ps) {
        if (!pf.factors.empty() && pf.factors.back().first == p) {
            ++pf.factors.back().second;
        } else {
            pf.factors.emplace_back(p, 1);
        }
    }
    return pf;
}

u64 PrimeFactorization::value() const {
    u64 v = 1;
    for (auto [p, e] : factors)
        for (int i = 0; i < e; ++i) v *= p;
    return v;
}

int PrimeFactorization::exponent(u64 p) const {
    for (auto [q, e] : factors)
        if (q == p) return e;
    return 0;
}

std::vector<u64> PrimeFactorization::primes() const {
    std::vector<u64> r;
    for (auto [p, e] : factors) r.push_back(p);
    return r;
}

std::string PrimeFactorization::str() const {
    if (factors.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (auto [p, e] : factors) {
        if (!first) os << "*";
        first = false;
        os << p;
        if (e > 1) os << "^" << e;
    }
    return os.str();
}

int valuation(i64 n, i64 p) {
    int v = 0;
    if (n == 0) return 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

i64 p_part(i64 n, i64 p) { return ipow(p, valuation(n, p)); }

bool is_squarefree(i64 n) {
    for (auto [p, e] : factorize(static_cast<u64>(n)).factors)
        if (e > 1) return false;
    return true;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (auto [p, e] : factorize(static_cast<u64>(n)).factors) r = r / static_cast<i64>(p) * (static_cast<i64>(p) - 1);
    return r;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> ds{1};
    for (auto [p, e] : factorize(static_cast<u64>(n)).factors) {
        size_t sz = ds.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= static_cast<i64>(p);
            for (size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

QmodZ::QmodZ(i64 n, i64 d) {
    if (d <= 0) throw Error(ErrorKind::InvalidArgument, "QmodZ denominator must be positive");
    n = mod(n, d);
    i64 g = std::gcd(n, d);
    if (n == 0) {
        num = 0;
        den = 1;
    } else {
        num = n / g;
        den = d / g;
    }
}

QmodZ QmodZ::operator+(const QmodZ& o) const {
    i64 d = lcm(den, o.den);
    return QmodZ(num * (d / den) + o.num * (d / o.den), d);
}

QmodZ QmodZ::operator-(const QmodZ& o) const { return *this + (-o); }

QmodZ QmodZ::operator-() const { return QmodZ(-num, den); }

QmodZ QmodZ::scaled(i64 k) const { return QmodZ(static_cast<i64>((static_cast<__int128>(num) * mod(k, den)) % den), den); }

std::string QmodZ::str() const {
    if (num == 0) return "0";
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace jacobi
