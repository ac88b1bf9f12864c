#pragma once

#include <utility>
#include <vector>

#include "jacobi/arith.hpp"
#include "jacobi/cyclotomic.hpp"

namespace jacobi {

// A prime P = 1 mod L with a fixed primitive L-th root of unity omega; pw[t] = omega^t.
struct SplitPrime {
    u64 P = 0;
    int L = 1;
    std::vector<u64> pw;

    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= P ? s - P : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + P - b; }
    u64 mul(u64 a, u64 b) const { return mulmod(a, b, P); }
    u64 inv(u64 a) const { return powmod(a, P - 2, P); }
    u64 from_int(i64 v) const { return static_cast<u64>(mod(v, static_cast<i64>(P))); }
};

// The index-th prime (descending from 2^62) that is 1 mod L. Cached.
const SplitPrime& split_prime(int L, int index);

// Exact element of Z[zeta_L] kept as an unreduced sum of roots: sum c * zeta^e.
struct RootSum {
    std::vector<std::pair<int, i64>> terms;  // (exponent mod L, coefficient), merged and sorted

    void add(int e, i64 c);
    void normalize(int L);
    bool empty() const { return terms.empty(); }
    // Upper bound for |sigma(x)| over all embeddings.
    i64 l1() const;
    // Image under zeta -> omega^j.
    u64 eval(const SplitPrime& sp, int j) const;
    CycScalar to_cyc(int L) const;
};

// Rank of a matrix modulo a prime; rows are consumed.
int rank_mod_p(std::vector<std::vector<u64>> rows, const SplitPrime& sp, std::vector<int>* pivot_rows = nullptr);

}  // namespace jacobi
