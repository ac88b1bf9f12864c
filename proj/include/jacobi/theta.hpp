#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jacobi/arith.hpp"
#include "jacobi/invariants.hpp"

namespace jacobi {

// Truncated series sum c(n, r) q^n zeta^r with n in (1/den)Z and r in (1/2)Z.
// Stored as integer keys (n * den, 2 r). Every coefficient with q-exponent below order() is known;
// nothing at or above it is stored.
class QZSeries {
public:
    using Key = std::pair<i64, i64>;  // (q numerator over den, doubled zeta exponent)

    QZSeries();
    // The zero series known below q^prec.
    explicit QZSeries(const mpq_class& prec);

    static QZSeries monomial(const mpq_class& c, const mpq_class& n, const mpq_class& r, const mpq_class& prec);

    i64 den() const { return den_; }
    mpq_class order() const;
    // Lowest q-exponent with a nonzero coefficient, or order() when none is known.
    mpq_class valuation() const;
    const std::map<Key, mpq_class>& terms() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    bool integral_zeta() const;

    mpq_class coef(const mpq_class& n, const mpq_class& r) const;
    void add_term(const mpq_class& c, const mpq_class& n, const mpq_class& r);

    QZSeries operator+(const QZSeries& o) const;
    QZSeries operator-(const QZSeries& o) const;
    QZSeries operator-() const;
    QZSeries operator*(const QZSeries& o) const;
    QZSeries scaled(const mpq_class& s) const;
    QZSeries truncated(const mpq_class& prec) const;
    // tau -> h tau, z -> c z.
    QZSeries substitute(const mpq_class& h, const mpq_class& c) const;
    // z = 0.
    QZSeries at_z0() const;
    // Needs a leading q-coefficient that is a single zeta monomial.
    QZSeries inverse() const;

    // Coefficients below the smaller order agree.
    bool agrees(const QZSeries& o) const;
    // a = lambda b for a nonzero rational lambda, on the common range; both zero counts as equal.
    bool proportional(const QZSeries& o) const;

    std::string text() const;
    std::string json(int indent = -1) const;

private:
    i64 den_ = 1;
    i64 ord_ = 0;  // order() = ord_ / den_
    std::map<Key, mpq_class> c_;

    QZSeries with_den(i64 d) const;
    void prune();
};

QZSeries theta_mr(i64 m, i64 r, const mpq_class& prec);
// theta_{m,-r} + sign theta_{m,r}
QZSeries theta_pm(i64 m, i64 r, int sign, const mpq_class& prec);
QZSeries eta(const mpq_class& prec);
QZSeries jacobi_vartheta(const mpq_class& prec);

struct KnownGenerator {
    std::string id;
    i64 index = 1;
    i64 level = 1;
    QZSeries series;
};

// J12_36, J8_32, J3ab_9(a,b), J9_36, Jp2_p2(p), J2_p3(p). Throws UnknownId.
KnownGenerator known_generator(const std::string& id, const mpq_class& prec);
std::vector<std::string> known_generator_examples();

// h_mu for mu mod 2m with phi = sum h_mu theta_{m,mu}. Throws NotIndexM.
std::map<i64, QZSeries> theta_decompose(const QZSeries& phi, i64 m);

// Whether the index-m elliptic substitutions z -> z + tau and z -> z + 1 fix phi
// on every coefficient pair inside the truncation.
bool elliptic_check(const QZSeries& phi, i64 m);

// A vector of C D_m(-1) (x) C D_m'(-1) in the basis e^gamma (x) e^delta, rational coefficients.
struct TensorVector {
    i64 m = 1;
    i64 mprime = 1;
    std::map<std::pair<i64, i64>, mpq_class> c;
};

// One local factor of an m' summand: factor 1 of the LocalSpec is the m side, factor 2 the m' side.
struct LocalPiece {
    LocalSpec spec;
    FormVector v;
};

// Tensor product of the local pieces, glued by the Chinese remainder theorem.
// Throws DimensionMismatch if a factor does not match the p-part of m or m'.
TensorVector global_tensor(i64 m, i64 mprime, const std::vector<LocalPiece>& pieces);

// sum v(gamma, delta) theta_{m,gamma}(tau, z) theta_{m',delta}(tau, 0).
QZSeries invariant_to_jacobi(const TensorVector& v, const mpq_class& prec);

}  // namespace jacobi
