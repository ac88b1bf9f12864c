#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace jacobi {

using i64 = std::int64_t;
using u64 = std::uint64_t;

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
// Non-negative residue of a mod n (n > 0).
i64 mod(i64 a, i64 n);
i64 ipow(i64 b, int e);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 b, u64 e, u64 m);

// Kronecker symbol (a/n). For n < 0, (a/-1) is -1 when a < 0.
int kronecker(i64 a, i64 n);

// b with a*b = 1 mod n, 0 <= b < n. Throws NotCoprime.
i64 mod_inverse(i64 a, i64 n);

bool is_prime(u64 n);

struct PrimeFactorization {
    std::vector<std::pair<u64, int>> factors;  // ascending primes

    u64 value() const;
    int exponent(u64 p) const;
    std::vector<u64> primes() const;
    std::string str() const;
};

PrimeFactorization factorize(u64 n);

// p-adic valuation of n != 0.
int valuation(i64 n, i64 p);
// Largest power of p dividing n.
i64 p_part(i64 n, i64 p);
bool is_squarefree(i64 n);
i64 euler_phi(i64 n);
std::vector<i64> divisors(i64 n);

// Rational number modulo 1, stored reduced with 0 <= num < den.
struct QmodZ {
    i64 num = 0;
    i64 den = 1;

    QmodZ() = default;
    QmodZ(i64 n, i64 d);

    bool is_zero() const { return num == 0; }
    QmodZ operator+(const QmodZ& o) const;
    QmodZ operator-(const QmodZ& o) const;
    QmodZ operator-() const;
    QmodZ scaled(i64 k) const;
    bool operator==(const QmodZ& o) const { return num == o.num && den == o.den; }
    bool operator!=(const QmodZ& o) const { return !(*this == o); }
    std::string str() const;
};

// Floor of a/b for b > 0.
i64 floor_div(i64 a, i64 b);

}  // namespace jacobi
