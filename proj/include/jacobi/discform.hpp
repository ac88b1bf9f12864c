#pragma once

#include <string>
#include <utility>
#include <vector>

#include "jacobi/arith.hpp"

namespace jacobi {

enum class FactorKind { D, L };

// D_m(a) = (Z/2m, g -> a g^2 / 4m) or L_n(b) = (Z/n, g -> b g^2 / n), n odd.
struct CyclicFactor {
    FactorKind kind = FactorKind::L;
    i64 m = 1;     // index m for D, modulus n for L
    i64 coef = 1;  // reduced mod qden()

    i64 order() const { return kind == FactorKind::D ? 2 * m : m; }
    i64 qden() const { return kind == FactorKind::D ? 4 * m : m; }
    i64 level() const { return qden(); }
    QmodZ q(i64 g) const;
    QmodZ b(i64 x, i64 y) const;
    std::string str() const;
    bool operator==(const CyclicFactor& o) const { return kind == o.kind && m == o.m && coef == o.coef; }
};

CyclicFactor factor_D(i64 m, i64 a);
CyclicFactor factor_L(i64 n, i64 b);

class DiscriminantForm {
public:
    using Element = std::vector<i64>;

    DiscriminantForm() = default;
    explicit DiscriminantForm(std::vector<CyclicFactor> factors);

    const std::vector<CyclicFactor>& factors() const { return factors_; }
    i64 order() const { return order_; }
    i64 level() const { return level_; }

    Element element(i64 idx) const;
    i64 index(const Element& g) const;
    i64 neg(i64 idx) const;
    i64 add(i64 x, i64 y) const;
    i64 scale(i64 idx, i64 k) const;

    QmodZ q_value(const Element& g) const;
    QmodZ b_value(const Element& x, const Element& y) const;
    // Q(x) * level and B(x,y) * level as residues mod level.
    i64 q_num(i64 idx) const;
    i64 b_num(i64 x, i64 y) const;

    // Smallest l with l*Q = 0, by exhaustion.
    i64 level_exhaustive() const;
    std::string str() const;

private:
    std::vector<CyclicFactor> factors_;
    std::vector<i64> radix_;
    std::vector<i64> qw_, bw_;  // per-factor weights over the level
    i64 order_ = 1;
    i64 level_ = 1;
};

DiscriminantForm make_D(i64 m, i64 a);
DiscriminantForm make_L(i64 n, i64 b);
DiscriminantForm direct_sum(const DiscriminantForm& x, const DiscriminantForm& y);

// p-part decomposition of D_m(a): (2, D_{m_2}(a a_2)) followed by (p, L_{m_p}(a a_p)) for odd p | m.
std::vector<std::pair<i64, CyclicFactor>> p_part_decompose(i64 m, i64 a = 1);
// Same for a general cyclic factor (L_n(b) splits into L_{n_p}).
std::vector<std::pair<i64, CyclicFactor>> p_part_decompose(const CyclicFactor& f);

// Signature mod 8 of a prime-power cyclic factor from the Gauss-sum case table.
int signature_closed(const CyclicFactor& f);
// Sum of signature_closed over the p-parts of every factor.
int signature_closed(const DiscriminantForm& form);
// Signature mod 8 from Milgram's formula, matched exactly against sqrt|D| e(s/8).
int signature_milgram(const DiscriminantForm& form);

}  // namespace jacobi
