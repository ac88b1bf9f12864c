#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jacobi/discform.hpp"
#include "jacobi/weil.hpp"

namespace jacobi {

// (C X1^{e1} (x) C X2^{e2})^{Gamma0(p^k3)} with X = D_{2^k}(a) for p = 2 and L_{p^k}(a) otherwise.
// Exponent 0 means D_1(a) at p = 2 and the trivial L_1 at odd p.
struct LocalSpec {
    i64 p = 3;
    int k1 = 0;
    i64 a1 = 1;
    bool has_second = true;
    int k2 = 0;
    i64 a2 = 1;
    int e1 = 1;  // +1 or -1
    int e2 = 1;
    int k3 = 0;
    bool full = false;  // ignore the signs and take the whole tensor space

    std::string str() const;
    bool operator==(const LocalSpec& o) const = default;
};

// Checks the coprimality requirements; throws NotCoprime / InvalidArgument.
void validate(const LocalSpec& s);
CyclicFactor local_factor(i64 p, int k, i64 a);
// The direct sum whose Weil representation is the tensor product of the two factors.
DiscriminantForm local_form(const LocalSpec& s);
// Exponent of the level of local_form.
int natural_level_exponent(const LocalSpec& s);
// Coefficients reduced to square-class representatives, factors sorted, k3 clamped to the level.
LocalSpec canonical(const LocalSpec& s);
// Sector membership: sigma_i negates the i-th coordinate.
FormVector sector_project(const DiscriminantForm& form, const FormVector& v, int e1, int e2, int L);

// Words S T^l S T^{l^-1} S T^j for l a unit and j mod p^n; matrices cover Gamma0(p^n) mod Gamma(p^n).
std::vector<GroupWord> coset_words_gamma0(i64 p, int n);

// Invariant dimension from the generator fixed-space system, rank certified over Q(zeta). Cached.
int local_dim_bruteforce(const LocalSpec& s);
// Exact basis of the invariant space in canonical echelon form, coefficients in Q(zeta_L) with
// L = invariant_conductor(s). Throws GuardExceeded when the cyclotomic degree is too large.
std::vector<FormVector> projector_average(const LocalSpec& s);
int invariant_conductor(const LocalSpec& s);
// Literal group average over Gamma0(p^k3) mod the level, via T, diagonal and lower unipotent sums,
// then the Gamma0(p) coset sum when k3 = 0.
// Slow; only for small spaces. Returns an echelon basis like projector_average.
std::vector<FormVector> projector_average_literal(const LocalSpec& s);

struct ClosedDim {
    int dim = 0;
    std::vector<std::string> trace;
};

// Closed-form dimension from the catalog of local results. Throws NotCovered.
ClosedDim local_dim_closed(const LocalSpec& s);

struct InvariantBasis {
    LocalSpec spec;
    std::vector<FormVector> vectors;
    int dimension = 0;
    int conductor = 1;
    std::vector<std::string> provenance;
};

// Explicitly listed generators, normalized. Throws NoExplicitBasis for dimension-only results.
InvariantBasis local_generators_closed(const LocalSpec& s);
// Echelon form with leading coefficient 1, rows in lexicographic order of their leading index.
std::vector<FormVector> echelon(std::vector<FormVector> vs, int L);
std::string basis_json(const InvariantBasis& b, int indent = -1);

// Two-part rows used by the coprime dimension theorem. j = 0 for index m, 1 for 2m;
// cls = a2 a2' mod 8; signs of the two factors; k = Gamma0 exponent. Absent rows give 0.
int two_part_table(int j, i64 cls, int e1, int e2, int k);

// Cache statistics for the local brute-force memo.
size_t local_cache_size();
// Snapshot of the memo (canonical specs) and a way to preload it.
std::vector<std::pair<LocalSpec, int>> local_cache_entries();
void local_cache_seed(const LocalSpec& s, int dim);

}  // namespace jacobi
