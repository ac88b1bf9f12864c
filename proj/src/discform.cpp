#include "jacobi/discform.hpp"

#include <sstream>

#include "jacobi/cyclotomic.hpp"
#include "jacobi/errors.hpp"

namespace jacobi {

QmodZ CyclicFactor::q(i64 g) const {
    i64 d = qden();
    g = mod(g, order());
    return QmodZ(static_cast<i64>((static_cast<__int128>(coef) * g % d * g) % d), d);
}

QmodZ CyclicFactor::b(i64 x, i64 y) const {
    i64 d = qden();
    x = mod(x, order());
    y = mod(y, order());
    return QmodZ(static_cast<i64>((static_cast<__int128>(2 * coef) * x % d * y) % d), d);
}

std::string CyclicFactor::str() const {
    return std::string(kind == FactorKind::D ? "D_" : "L_") + std::to_string(m) + "(" + std::to_string(coef) + ")";
}

CyclicFactor factor_D(i64 m, i64 a) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "D_m needs m >= 1");
    if (gcd(mod(a, 2 * m), 2 * m) != 1) throw Error(ErrorKind::NotCoprime, "D_m(a) needs gcd(a, 2m) = 1");
    return CyclicFactor{FactorKind::D, m, mod(a, 4 * m)};
}

CyclicFactor factor_L(i64 n, i64 b) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "L_n needs n >= 1");
    if (n % 2 == 0) throw Error(ErrorKind::EvenModulus, "L_n needs odd n");
    if (gcd(mod(b, n), n) != 1) throw Error(ErrorKind::NotCoprime, "L_n(b) needs gcd(b, n) = 1");
    // the coefficient of L_1 carries no information; keep b so scaled embeddings can use it
    return CyclicFactor{FactorKind::L, n, n == 1 ? b : mod(b, n)};
}

DiscriminantForm::DiscriminantForm(std::vector<CyclicFactor> factors) : factors_(std::move(factors)) {
    order_ = 1;
    level_ = 1;
    for (auto& f : factors_) {
        radix_.push_back(f.order());
        order_ *= f.order();
        level_ = lcm(level_, f.level());
    }
    for (auto& f : factors_) {
        i64 s = level_ / f.qden();
        qw_.push_back(mod(f.coef * s, level_));
        bw_.push_back(mod(2 * f.coef * s, level_));
    }
}

DiscriminantForm::Element DiscriminantForm::element(i64 idx) const {
    Element g(factors_.size());
    for (size_t i = factors_.size(); i-- > 0;) {
        g[i] = idx % radix_[i];
        idx /= radix_[i];
    }
    return g;
}

i64 DiscriminantForm::index(const Element& g) const {
    i64 idx = 0;
    for (size_t i = 0; i < factors_.size(); ++i) idx = idx * radix_[i] + mod(g[i], radix_[i]);
    return idx;
}

i64 DiscriminantForm::neg(i64 idx) const {
    Element g = element(idx);
    for (auto& x : g) x = -x;
    return index(g);
}

i64 DiscriminantForm::add(i64 x, i64 y) const {
    Element a = element(x), b = element(y);
    for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return index(a);
}

i64 DiscriminantForm::scale(i64 idx, i64 k) const {
    Element g = element(idx);
    for (auto& x : g) x *= k;
    return index(g);
}

QmodZ DiscriminantForm::q_value(const Element& g) const {
    QmodZ s;
    for (size_t i = 0; i < factors_.size(); ++i) s = s + factors_[i].q(g[i]);
    return s;
}

QmodZ DiscriminantForm::b_value(const Element& x, const Element& y) const {
    QmodZ s;
    for (size_t i = 0; i < factors_.size(); ++i) s = s + factors_[i].b(x[i], y[i]);
    return s;
}

i64 DiscriminantForm::q_num(i64 idx) const {
    __int128 s = 0;
    for (size_t i = factors_.size(); i-- > 0;) {
        i64 g = idx % radix_[i];
        idx /= radix_[i];
        s += static_cast<__int128>(qw_[i]) * g % level_ * g;
    }
    return static_cast<i64>(s % level_);
}

i64 DiscriminantForm::b_num(i64 x, i64 y) const {
    __int128 s = 0;
    for (size_t i = factors_.size(); i-- > 0;) {
        i64 gx = x % radix_[i], gy = y % radix_[i];
        x /= radix_[i];
        y /= radix_[i];
        s += static_cast<__int128>(bw_[i]) * gx % level_ * gy;
    }
    return static_cast<i64>(s % level_);
}

i64 DiscriminantForm::level_exhaustive() const {
    i64 l = 1;
    for (i64 idx = 0; idx < order_; ++idx) l = lcm(l, q_value(element(idx)).den);
    return l;
}

std::string DiscriminantForm::str() const {
    if (factors_.empty()) return "L_1(1)";
    std::ostringstream os;
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << "+";
        os << factors_[i].str();
    }
    return os.str();
}

DiscriminantForm make_D(i64 m, i64 a) { return DiscriminantForm({factor_D(m, a)}); }

DiscriminantForm make_L(i64 n, i64 b) { return DiscriminantForm({factor_L(n, b)}); }

DiscriminantForm direct_sum(const DiscriminantForm& x, const DiscriminantForm& y) {
    std::vector<CyclicFactor> fs = x.factors();
    fs.insert(fs.end(), y.factors().begin(), y.factors().end());
    return DiscriminantForm(fs);
}

std::vector<std::pair<i64, CyclicFactor>> p_part_decompose(i64 m, i64 a) {
    std::vector<std::pair<i64, CyclicFactor>> out;
    i64 m2 = p_part(m, 2);
    i64 a2 = mod_inverse(m / m2, 4 * m2);
    out.emplace_back(2, factor_D(m2, a * a2));
    for (auto [p, e] : factorize(static_cast<u64>(m)).factors) {
        if (p == 2) continue;
        i64 mp = ipow(static_cast<i64>(p), e);
        i64 ap = mod_inverse(mod(4 * (m / mp), mp), mp);
        out.emplace_back(static_cast<i64>(p), factor_L(mp, mod(a, mp) * ap));
    }
    return out;
}

std::vector<std::pair<i64, CyclicFactor>> p_part_decompose(const CyclicFactor& f) {
    if (f.kind == FactorKind::D) return p_part_decompose(f.m, f.coef);
    std::vector<std::pair<i64, CyclicFactor>> out;
    i64 n = f.m;
    for (auto [p, e] : factorize(static_cast<u64>(n)).factors) {
        i64 np = ipow(static_cast<i64>(p), e);
        i64 cp = mod_inverse(mod(n / np, np), np);
        out.emplace_back(static_cast<i64>(p), factor_L(np, mod(f.coef, np) * cp));
    }
    return out;
}

int signature_closed(const CyclicFactor& f) {
    if (f.kind == FactorKind::D) {
        i64 m = f.m;
        if ((m & (m - 1)) != 0) throw Error(ErrorKind::NotPrimePower, f.str() + " is not a 2-power D-form");
        int n = valuation(m, 2);
        i64 a = f.coef;
        if (n % 2 == 1) return static_cast<int>(mod(a, 8));
        // e(sign/8) = (1 + e(a/4)) / sqrt(2); pick s by exact comparison in Q(zeta_8)
        CycScalar lhs = CycScalar::from_int(1, 8) + CycScalar::root(2 * mod(a, 4), 8);
        CycScalar sqrt2 = CycScalar::root(1, 8) + CycScalar::root(-1, 8);
        for (int s = 0; s < 8; ++s)
            if (sqrt2 * CycScalar::root(s, 8) == lhs) return s;
        throw Error(ErrorKind::NoMatch, "no eighth root matches " + f.str());
    }
    i64 n = f.m;
    if (n == 1) return 0;
    auto pf = factorize(static_cast<u64>(n));
    if (pf.factors.size() != 1) throw Error(ErrorKind::NotPrimePower, f.str() + " is not a prime-power L-form");
    i64 p = static_cast<i64>(pf.factors[0].first);
    int e = pf.factors[0].second;
    if (e % 2 == 0) return 0;
    int leg = kronecker(f.coef, p);
    if (p % 4 == 3) return leg == 1 ? 2 : 6;
    return leg == 1 ? 0 : 4;
}

int signature_closed(const DiscriminantForm& form) {
    int s = 0;
    for (auto& f : form.factors())
        for (auto& [p, g] : p_part_decompose(f)) s += signature_closed(g);
    return static_cast<int>(mod(s, 8));
}

int signature_milgram(const DiscriminantForm& form) {
    i64 D = form.order();
    int C = static_cast<int>(lcm(lcm(form.level(), 8), sqrt_conductor(D)));
    CycScalar G(C);
    std::vector<i64> count(form.level(), 0);
    for (i64 idx = 0; idx < D; ++idx) ++count[form.q_num(idx)];
    i64 step = C / form.level();
    for (i64 t = 0; t < form.level(); ++t)
        if (count[t]) G += CycScalar::root(t * step, C).scaled(mpq_class(static_cast<long>(count[t])));
    CycScalar rt = exact_sqrt(D, C);
    for (int s = 0; s < 8; ++s)
        if (rt.times_root(s * (C / 8)) == G) return s;
    throw Error(ErrorKind::NoMatch, "Milgram sum of " + form.str() + " matches no eighth root");
}

}  // namespace jacobi
