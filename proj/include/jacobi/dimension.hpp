#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jacobi/arith.hpp"
#include "jacobi/invariants.hpp"

namespace jacobi {

enum class Method { Bruteforce, Catalog, Theorem71, Theorem72, Auto };

const char* method_name(Method m);
Method parse_method(const std::string& s);  // throws InvalidArgument

// 1 iff (m/p) = 1 for every p; 1 on the empty set. Throws NotCoprime.
int f_symbol(i64 m, const std::vector<i64>& primes);
// Divisors m' of M with M/m' squarefree, ascending.
std::vector<i64> enumerate_mprime(i64 M);
// Smallest M with m | M and N | 4M.
i64 assembly_M(i64 m, i64 N);

struct SiteTrace {
    i64 p = 2;
    std::string spec;
    int dim = 0;  // -1: not covered, harmless because another factor of the summand is 0
    std::vector<std::string> provenance;
};

struct DimResult {
    i64 m = 1;
    i64 N = 1;
    i64 dim = 0;
    std::string method;  // the route that produced dim
    std::vector<SiteTrace> local_trace;
};

struct DimOptions {
    // Bruteforce refuses a site whose tensor space |D1| * |D2| exceeds this.
    i64 guard = 4096;
    // Keep only the nonzero local factors in the trace.
    bool trace_nonzero_only = true;
};

// The local problems of one m' summand: one LocalSpec per prime site (2 first, then odd p | M).
std::vector<LocalSpec> assembly_sites(i64 m, i64 mprime, i64 N);

DimResult jacobi_dim(i64 m, i64 N, Method method = Method::Auto, const DimOptions& opt = {});
i64 jacobi_dim_value(i64 m, i64 N, Method method = Method::Auto);

// dim J_{1,2^j m}(2^k N) for odd coprime m, N. Throws HypothesisViolation.
i64 jacobi_dim_thm71(i64 m, i64 N, int j, int k);
// dim J_{1,2^j m}(2^k N N'): m odd squarefree, primes of N divide m, gcd(m, N') = 1, j in {0, 1}.
i64 jacobi_dim_thm72(i64 m, i64 N, i64 Nprime, int j, int k);

// Which closed engine covers (m, N), if any: Theorem71 preferred when both apply.
std::optional<Method> theorem_route(i64 m, i64 N);
// Evaluates the applicable engine on the total index and level. Throws HypothesisViolation.
i64 jacobi_dim_theorem(i64 m, i64 N, Method which);

bool vanish_all_m(i64 N);
bool vanish_coprime_m(i64 N);

enum class Relation { Equal, AtLeast };
const char* relation_str(Relation r);
// Whether dim J(m, q^n N) = ([n/2]+1) dim J(m, N) is asserted, or only >=.
Relation scaling_check(i64 m, i64 N, i64 q, int n);

struct J12Verdict {
    bool nontrivial = false;
    bool dim_one = false;
};
J12Verdict nontrivial_J12(i64 N);  // throws ShapeViolation
bool nontrivial_J1p(i64 p, i64 N);

// "2^6*3^3", "343", "2^9" -> integer. Throws InvalidArgument.
i64 parse_level(const std::string& s);
std::string level_str(i64 N);

std::string dim_json(const DimResult& r, int indent = -1);

// Layout of the printed dimension table: header "m" then one column per level, "-" outside both theorems.
std::string table_csv(int m_max, const std::vector<i64>& levels);
// The eight printed level columns.
std::vector<i64> printed_table_levels();

}  // namespace jacobi
