#pragma once

#include <array>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "jacobi/cyclotomic.hpp"
#include "jacobi/discform.hpp"

namespace jacobi {

// Sparse element of CD keyed by element index; zero entries are never stored.
struct FormVector {
    std::map<i64, CycScalar> c;

    void add(i64 idx, const CycScalar& x);
    CycScalar at(i64 idx, int L) const;
    bool is_zero() const { return c.empty(); }
    FormVector operator+(const FormVector& o) const;
    FormVector operator-(const FormVector& o) const;
    FormVector scaled(const CycScalar& s) const;
    bool operator==(const FormVector& o) const;
    bool operator!=(const FormVector& o) const { return !(*this == o); }
};

struct Letter {
    enum Kind { S, T, Z } kind;
    i64 k = 1;  // exponent for T
};
using GroupWord = std::vector<Letter>;

// Words as text: "S T^3 S T^-1 Z" (spaces or commas between letters).
GroupWord parse_word(const std::string& text);
std::string word_str(const GroupWord& w);

using Mat2 = std::array<i64, 4>;  // a b c d
Mat2 mat_mul(const Mat2& x, const Mat2& y);
Mat2 word_matrix(const GroupWord& w);
// A word in S, T^k, Z whose matrix is exactly m (det 1), by the Euclidean algorithm on the first column.
GroupWord decompose_sl2(const Mat2& m);
// Integer matrix of determinant 1 congruent to [[u, 0], [0, u^-1]] mod n, gcd(u, n) = 1.
Mat2 lift_diagonal(i64 u, i64 n);

// e^gamma -> phase(gamma) e^{target(gamma)}
struct MonomialOp {
    std::vector<i64> target;
    std::vector<CycScalar> phase;

    FormVector apply(const FormVector& v) const;
};

class WeilRep {
public:
    explicit WeilRep(DiscriminantForm form, int conductor = 0);

    const DiscriminantForm& form() const { return form_; }
    int conductor() const { return L_; }
    int signature() const { return sign_; }

    FormVector basis(i64 idx) const;
    FormVector T(const FormVector& v, i64 k = 1) const;
    FormVector S(const FormVector& v) const;
    FormVector Z(const FormVector& v) const;
    // Left action: the rightmost letter acts first.
    FormVector apply(const GroupWord& w, const FormVector& v) const;

    FormVector symmetrize(const FormVector& v, int sign) const;
    std::vector<FormVector> pm_basis(int sign) const;
    // <v, w> = sum v_g conj(w_g)
    CycScalar inner(const FormVector& v, const FormVector& w) const;
    std::string str(const FormVector& v) const;

    // Image of every basis vector under the closed formula for S T^m S.
    std::vector<FormVector> STmS_closed(i64 m) const;
    // Closed monomial formula for S T^{m2} S T^m S, m m2 = 1 mod the level exponent bound.
    MonomialOp ST_pair_closed(i64 m, i64 m2) const;

private:
    CycScalar root_at(i64 num, i64 den) const;

    DiscriminantForm form_;
    int L_;
    int sign_;
    CycScalar s_scale_;  // e(-sign/8)/sqrt|D| = conj(G)/|D|
    std::vector<i64> qnum_;
};

// Applies words to basis vectors with integer group-ring arithmetic. S is split as
// (conj(G)/|D|) * F with F the bare Fourier sum, and the scalar is applied once at the end.
// After each F the entries are factored as +-zeta^s * R for a common R when possible,
// so the next F stays quadratic in |D|. Results are exact and equal WeilRep::apply.
class WordEvaluator {
public:
    explicit WordEvaluator(const WeilRep& rep);
    FormVector apply(const GroupWord& w, i64 idx) const;

private:
    const WeilRep& rep_;
    i64 D_, lev_, step_;
    int L_;
    std::vector<i64> qnum_;
    std::vector<i64> bnum_;  // D x D table of B * level
    CycScalar g_conj_;       // conj(G)
    std::vector<CycScalar> scale_pow_;  // (conj(G)/|D|)^k for small k
    std::unordered_map<u64, int> dlog_;
};

// Smallest conductor used: the level, raised to lcm(8, level) for even levels.
int default_conductor(const DiscriminantForm& form);

// D_m(a) -> D_{md^2}(a) or L_m(a) -> L_{md^2}(a), e^g -> sum_{x = g d mod (2md | md)} e^x.
struct ScaledEmbedding {
    CyclicFactor source, target;
    i64 d = 1;
    std::vector<std::vector<i64>> images;  // per source element, target elements hit

    FormVector apply(const FormVector& v, int L) const;
};
ScaledEmbedding embed_scaled(const CyclicFactor& src, i64 d);

}  // namespace jacobi
