#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "jacobi/arith.hpp"

namespace jacobi {

// Power-basis data for Q(zeta_L): phi(L) and zeta^k reduced mod Phi_L for 0 <= k < L.
struct CycTable {
    int L = 1;
    int phi = 1;
    std::vector<i64> cyclo;                                // Phi_L coefficients, degree phi, monic
    std::vector<std::vector<std::pair<int, i64>>> rows;    // sparse power-basis form of zeta^k
};

const CycTable& cyc_table(int L);

// Element of Q(zeta_L) in canonical power-basis form.
class CycScalar {
public:
    CycScalar();
    explicit CycScalar(int L);

    static CycScalar zero(int L) { return CycScalar(L); }
    static CycScalar from_int(i64 v, int L);
    static CycScalar from_rational(const mpq_class& v, int L);
    // zeta_L^k
    static CycScalar root(i64 k, int L);
    // Reduce sum_k a[k] zeta^k (k < L, length L) into canonical form.
    static CycScalar from_powers(const std::vector<mpq_class>& a, int L);
    // Same for integer coefficients, reduced in machine integers first.
    static CycScalar from_int_powers(const std::vector<i64>& a, int L);

    int conductor() const { return L_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    CycScalar lifted(int L2) const;
    bool is_zero() const;
    bool is_rational() const;
    mpq_class rational_part() const { return c_[0]; }

    CycScalar operator+(const CycScalar& o) const;
    CycScalar operator-(const CycScalar& o) const;
    CycScalar operator*(const CycScalar& o) const;
    CycScalar operator-() const;
    CycScalar& operator+=(const CycScalar& o);
    CycScalar& operator-=(const CycScalar& o);
    CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }
    CycScalar scaled(const mpq_class& q) const;
    // Multiply by zeta_L^k.
    CycScalar times_root(i64 k) const;
    CycScalar conj() const;
    CycScalar inverse() const;
    bool operator==(const CycScalar& o) const;
    bool operator!=(const CycScalar& o) const { return !(*this == o); }

    std::complex<double> to_complex() const;
    std::string str() const;

private:
    int L_;
    std::vector<mpq_class> c_;
};

// e(x) in Q(zeta_L). Throws ConductorMismatch when den(x) does not divide L.
CycScalar cyc_e(const QmodZ& x, int L);

// sum_{k=1..M} e(a k^2 / M) by direct summation, in conductor L (default M).
CycScalar quadratic_gauss_sum(i64 a, i64 M, int L = 0);

// Exact sqrt(n) inside Q(zeta_L), built from quadratic Gauss sums; L must contain it.
CycScalar exact_sqrt(i64 n, int L);
// Smallest conductor containing sqrt(n): lcm over odd primes p with odd exponent of 4p, and 8 if 2 has odd exponent.
int sqrt_conductor(i64 n);

}  // namespace jacobi
