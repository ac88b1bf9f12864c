// Truncated q, zeta series, the theta blocks and the explicit weight-one forms.

#include "jacobi/theta.hpp"

#include <json.hpp>
#include <algorithm>
#include <regex>
#include <sstream>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

i64 to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw Error(ErrorKind::InvalidArgument, "series exponent out of range");
    return z.get_si();
}

std::string qstr(const mpq_class& x) { return x.get_str(); }

mpq_class frac(i64 a, i64 b) {
    mpq_class x(a, b);
    x.canonicalize();
    return x;
}

// Integer k with x = k / d exactly, or throw.
i64 scaled_int(const mpq_class& x, i64 d, const char* what) {
    mpq_class y = x * d;
    if (y.get_den() != 1) throw Error(ErrorKind::InvalidArgument, std::string(what) + " is not on the exponent grid");
    return to_i64(y.get_num());
}

i64 ceil_q(const mpq_class& x) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return to_i64(r);
}

i64 den_of(const mpq_class& x) { return to_i64(x.get_den()); }

}  // namespace

QZSeries::QZSeries() = default;

QZSeries::QZSeries(const mpq_class& prec) {
    mpq_class p = prec;
    p.canonicalize();
    den_ = den_of(p);
    ord_ = to_i64(p.get_num());
}

QZSeries QZSeries::monomial(const mpq_class& c, const mpq_class& n, const mpq_class& r, const mpq_class& prec) {
    QZSeries s(prec);
    s.add_term(c, n, r);
    return s;
}

QZSeries QZSeries::with_den(i64 d) const {
    if (d == den_) return *this;
    i64 f = d / den_;
    QZSeries s;
    s.den_ = d;
    s.ord_ = ord_ * f;
    for (auto& [k, v] : c_) s.c_.emplace(Key{k.first * f, k.second}, v);
    return s;
}

void QZSeries::prune() {
    for (auto it = c_.begin(); it != c_.end();) {
        if (it->second == 0 || it->first.first >= ord_)
            it = c_.erase(it);
        else
            ++it;
    }
    i64 g = gcd(den_, ord_);
    for (auto& [k, v] : c_) g = gcd(g, k.first);
    if (g > 1) {
        std::map<Key, mpq_class> c;
        for (auto& [k, v] : c_) c.emplace(Key{k.first / g, k.second}, v);
        c_ = std::move(c);
        den_ /= g;
        ord_ /= g;
    }
}

mpq_class QZSeries::order() const { return frac(ord_, den_); }

mpq_class QZSeries::valuation() const {
    if (c_.empty()) return order();
    return frac(c_.begin()->first.first, den_);
}

bool QZSeries::integral_zeta() const {
    for (auto& [k, v] : c_)
        if (k.second % 2 != 0) return false;
    return true;
}

mpq_class QZSeries::coef(const mpq_class& n, const mpq_class& r) const {
    mpq_class nd = n * den_, r2 = r * 2;
    if (nd.get_den() != 1 || r2.get_den() != 1) return 0;
    auto it = c_.find({to_i64(nd.get_num()), to_i64(r2.get_num())});
    return it == c_.end() ? mpq_class(0) : it->second;
}

void QZSeries::add_term(const mpq_class& c, const mpq_class& n, const mpq_class& r) {
    if (c == 0 || n >= order()) return;
    i64 d = lcm(den_, den_of(mpq_class(n)));
    if (d != den_) *this = with_den(d);
    i64 nk = scaled_int(n, den_, "q-exponent");
    i64 rk = scaled_int(r, 2, "zeta-exponent");
    mpq_class& slot = c_[{nk, rk}];
    slot += c;
    if (slot == 0) c_.erase({nk, rk});
}

QZSeries QZSeries::operator+(const QZSeries& o) const {
    i64 d = lcm(den_, o.den_);
    QZSeries a = with_den(d), b = o.with_den(d);
    a.ord_ = std::min(a.ord_, b.ord_);
    for (auto& [k, v] : b.c_) a.c_[k] += v;
    a.prune();
    return a;
}

QZSeries QZSeries::operator-() const { return scaled(-1); }

QZSeries QZSeries::operator-(const QZSeries& o) const { return *this + (-o); }

QZSeries QZSeries::scaled(const mpq_class& s) const {
    QZSeries a = *this;
    for (auto& [k, v] : a.c_) v *= s;
    a.prune();
    return a;
}

QZSeries QZSeries::operator*(const QZSeries& o) const {
    i64 d = lcm(den_, o.den_);
    QZSeries a = with_den(d), b = o.with_den(d);
    i64 va = a.c_.empty() ? a.ord_ : a.c_.begin()->first.first;
    i64 vb = b.c_.empty() ? b.ord_ : b.c_.begin()->first.first;
    QZSeries r;
    r.den_ = d;
    r.ord_ = std::min(a.ord_ + vb, b.ord_ + va);
    for (auto& [ka, ca] : a.c_) {
        if (ka.first + vb >= r.ord_) break;
        for (auto& [kb, cb] : b.c_) {
            if (ka.first + kb.first >= r.ord_) break;
            r.c_[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
        }
    }
    r.prune();
    return r;
}

QZSeries QZSeries::truncated(const mpq_class& prec) const {
    if (prec >= order()) return *this;
    QZSeries s(prec);
    for (auto& [k, v] : c_) s.add_term(v, frac(k.first, den_), frac(k.second, 2));
    s.prune();
    return s;
}

QZSeries QZSeries::substitute(const mpq_class& h, const mpq_class& c) const {
    if (h <= 0) throw Error(ErrorKind::InvalidArgument, "tau scaling must be positive");
    QZSeries s(order() * h);
    for (auto& [k, v] : c_) s.add_term(v, frac(k.first, den_) * h, frac(k.second, 2) * c);
    s.prune();
    return s;
}

QZSeries QZSeries::at_z0() const { return substitute(1, 0); }

QZSeries QZSeries::inverse() const {
    if (c_.empty()) throw Error(ErrorKind::NotInvertible, "series has no known nonzero coefficient");
    i64 v = c_.begin()->first.first;
    auto second = std::next(c_.begin());
    if (second != c_.end() && second->first.first == v)
        throw Error(ErrorKind::NotInvertible, "leading q-coefficient is not a zeta monomial");
    mpq_class lead = c_.begin()->second;
    i64 w = c_.begin()->first.second;

    // this = lead q^v zeta^w (1 + R), R known below the relative order
    QZSeries R;
    R.den_ = den_;
    R.ord_ = ord_ - v;
    for (auto& [k, x] : c_)
        if (k.first != v) R.c_[{k.first - v, k.second - w}] = x / lead;
    QZSeries one = monomial(1, 0, 0, R.order());
    QZSeries inv = one, power = one, negR = -R;
    while (true) {
        power = (power * negR).truncated(R.order());
        if (power.is_zero()) break;
        inv = inv + power;
    }
    QZSeries s;
    s.den_ = den_;
    s.ord_ = inv.with_den(den_).ord_ - v;
    for (auto& [k, x] : inv.with_den(den_).c_) s.c_[{k.first - v, k.second - w}] = x / lead;
    s.prune();
    return s;
}

bool QZSeries::agrees(const QZSeries& o) const {
    mpq_class p = std::min(order(), o.order());
    QZSeries a = truncated(p), b = o.truncated(p);
    return (a - b).is_zero();
}

bool QZSeries::proportional(const QZSeries& o) const {
    mpq_class p = std::min(order(), o.order());
    QZSeries a = truncated(p), b = o.truncated(p);
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    i64 d = lcm(a.den_, b.den_);
    a = a.with_den(d);
    b = b.with_den(d);
    auto ka = a.c_.begin()->first;
    auto it = b.c_.find(ka);
    if (it == b.c_.end()) return false;
    mpq_class lambda = a.c_.begin()->second / it->second;
    return (a - b.scaled(lambda)).is_zero();
}

std::string QZSeries::text() const {
    std::ostringstream out;
    for (auto& [k, v] : c_)
        out << qstr(frac(k.first, den_)) << '\t' << qstr(frac(k.second, 2)) << '\t' << qstr(v) << '\n';
    out << "order\t" << qstr(order()) << '\n';
    return out.str();
}

std::string QZSeries::json(int indent) const {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [k, v] : c_)
        terms.push_back({{"q", qstr(frac(k.first, den_))}, {"zeta", qstr(frac(k.second, 2))}, {"c", qstr(v)}});
    nlohmann::json j = {{"order", qstr(order())}, {"terms", terms}};
    return j.dump(indent);
}

QZSeries theta_mr(i64 m, i64 r, const mpq_class& prec) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "theta index must be positive");
    QZSeries s(prec);
    if (prec <= 0) return s;
    // x = r mod 2m with x^2 < 4 m prec
    mpq_class bound = prec * 4 * m;
    i64 xmax = ceil_q(bound);
    i64 lim = 0;
    while (lim * lim < xmax) ++lim;
    for (i64 x = mod(r, 2 * m) - 2 * m * ((lim / (2 * m)) + 1); x <= lim; x += 2 * m)
        if (mpq_class(x * x) < bound) s.add_term(1, frac(x * x, 4 * m), x);
    return s;
}

QZSeries theta_pm(i64 m, i64 r, int sign, const mpq_class& prec) {
    return theta_mr(m, -r, prec) + theta_mr(m, r, prec).scaled(sign);
}

QZSeries eta(const mpq_class& prec) {
    // prod (1 - q^n) below prec - 1/24, then shift
    mpq_class rel = prec - frac(1, 24);
    i64 top = std::max<i64>(0, ceil_q(rel));
    std::vector<mpz_class> a(top + 1, 0);
    a[0] = 1;
    for (i64 n = 1; n <= top; ++n)
        for (i64 e = top; e >= n; --e) a[e] -= a[e - n];
    QZSeries s(prec);
    for (i64 e = 0; e <= top; ++e)
        if (a[e] != 0 && mpq_class(e) < rel) s.add_term(mpq_class(a[e]), mpq_class(e) + frac(1, 24), 0);
    return s;
}

QZSeries jacobi_vartheta(const mpq_class& prec) {
    mpq_class rel = prec - frac(1, 8);
    QZSeries prod = QZSeries::monomial(1, 0, 0, rel);
    for (i64 n = 1; mpq_class(n) < rel; ++n) {
        QZSeries f1 = QZSeries::monomial(1, 0, 0, rel), f2 = f1, f3 = f1;
        f1.add_term(-1, n, 1);
        f2.add_term(-1, n, -1);
        f3.add_term(-1, n, 0);
        prod = prod * f1 * f2 * f3;
    }
    QZSeries pre = QZSeries::monomial(1, frac(1, 8), frac(1, 2), prec + 1);
    pre.add_term(-1, frac(1, 8), frac(-1, 2));
    return (pre * prod).truncated(prec);
}

namespace {

QZSeries eta_at(const mpq_class& h, const mpq_class& prec) { return eta(prec / h).substitute(h, 1); }

QZSeries vartheta_at(const mpq_class& h, const mpq_class& c, const mpq_class& prec) {
    return jacobi_vartheta(prec / h).substitute(h, c);
}

// theta_{m,r}(h tau, 0)
QZSeries theta0_at(i64 m, i64 r, const mpq_class& h, const mpq_class& prec) {
    return theta_mr(m, r, prec / h).at_z0().substitute(h, 1);
}

i64 parse_prime_arg(const std::string& id, const std::string& arg) {
    i64 p = std::stoll(arg);
    if (p < 2 || !is_prime(p)) throw Error(ErrorKind::UnknownId, id + ": argument is not a prime");
    return p;
}

}  // namespace

KnownGenerator known_generator(const std::string& id, const mpq_class& prec) {
    static const std::regex re(R"(^\s*([A-Za-z0-9_]+?)(?:\((\d+)(?:,\s*(\d+))?\))?\s*$)");
    std::smatch mt;
    if (!std::regex_match(id, mt, re)) throw Error(ErrorKind::UnknownId, "unknown generator '" + id + "'");
    std::string name = mt[1];
    bool one = mt[2].matched && !mt[3].matched, two = mt[3].matched, none = !mt[2].matched;
    mpq_class work = prec + 1;  // quotients lose a little precision

    KnownGenerator g;
    g.id = id;
    if (name == "J12_36" && none) {
        g.index = 12;
        g.level = 36;
        g.series = eta_at(6, work) * vartheta_at(6, 12, work);
    } else if (name == "J8_32" && none) {
        g.index = 8;
        g.level = 32;
        QZSeries e8 = eta_at(8, work);
        g.series = e8 * e8 * eta_at(4, work).inverse() * vartheta_at(4, 8, work);
    } else if (name == "J3ab_9" && two) {
        i64 a = std::stoll(mt[2]), b = std::stoll(mt[3]);
        if (a < 1 || b < 1) throw Error(ErrorKind::UnknownId, id + ": a and b must be positive");
        g.index = 3 * (a * a + a * b + b * b);
        g.level = 9;
        g.series = vartheta_at(3, 3 * a, work) * vartheta_at(3, 3 * b, work) * vartheta_at(3, 3 * (a + b), work) *
                   eta_at(3, work).inverse();
    } else if (name == "J9_36" && none) {
        g.index = 9;
        g.level = 36;
        g.series = theta0_at(3, 3, 1, work) * theta_pm(9, 3, -1, work) + theta0_at(3, 0, 1, work) * theta_pm(9, 6, -1, work);
    } else if (name == "Jp2_p2" && one) {
        i64 p = parse_prime_arg(id, mt[2]);
        if (p % 4 != 3) throw Error(ErrorKind::UnknownId, id + ": needs p = 3 mod 4");
        g.index = p * p;
        g.level = p * p;
        QZSeries odd(work), even(work);
        for (i64 l = 1; l <= p - 1; ++l) {
            QZSeries t = theta_pm(p * p, l * p, -1, work).scaled(kronecker(l, p));
            if (l % 2)
                odd = odd + t;
            else
                even = even + t;
        }
        g.series = theta0_at(p, p, 1, work) * odd + theta0_at(p, 0, 1, work) * even;
    } else if (name == "J2_p3" && one) {
        i64 p = parse_prime_arg(id, mt[2]);
        if (p % 8 != 7) throw Error(ErrorKind::UnknownId, id + ": needs p = 7 mod 8");
        g.index = 2;
        g.level = p * p * p;
        QZSeries sum(work);
        for (i64 l = 1; l <= p - 1; ++l)
            sum = sum + theta0_at(2 * p, l + p * l - p, p * p, work).scaled(kronecker(l, p));
        g.series = vartheta_at(1, 2, work) * sum;
    } else {
        throw Error(ErrorKind::UnknownId, "unknown generator '" + id + "'");
    }
    g.series = g.series.truncated(prec);
    return g;
}

std::vector<std::string> known_generator_examples() {
    return {"J12_36", "J8_32", "J3ab_9(1,1)", "J3ab_9(1,2)", "J9_36", "Jp2_p2(3)", "Jp2_p2(7)", "J2_p3(7)"};
}

std::map<i64, QZSeries> theta_decompose(const QZSeries& phi, i64 m) {
    if (m < 1) throw Error(ErrorKind::InvalidArgument, "index must be positive");
    if (!phi.integral_zeta()) throw Error(ErrorKind::NotIndexM, "half-integral zeta exponents");
    const mpq_class ord = phi.order();
    const i64 den = phi.den();

    // c(n, r) must depend only on (4nm - r^2, r mod 2m) wherever both ends are known
    std::map<std::pair<mpq_class, i64>, mpq_class> byclass;
    for (auto& [k, c] : phi.terms()) {
        mpq_class n = frac(k.first, den);
        i64 r = k.second / 2;
        mpq_class D = n * 4 * m - r * r;
        i64 mu = mod(r, 2 * m);
        // partners r' = mu mod 2m with r'^2 < 4m ord - D, i.e. q-exponent below the order
        mpq_class B = ord * 4 * m - D;
        i64 lim = 0;
        while (mpq_class(lim * lim) < B) ++lim;
        for (i64 rr = mu - 2 * m * (lim / (2 * m) + 1); rr <= lim; rr += 2 * m) {
            mpq_class n2 = (D + rr * rr) / (4 * m);
            if (n2 >= ord) continue;
            if (phi.coef(n2, rr) != c)
                throw Error(ErrorKind::NotIndexM, "coefficient of q^" + qstr(n) + " zeta^" + std::to_string(r) +
                                                      " differs from q^" + qstr(n2) + " zeta^" + std::to_string(rr));
        }
        byclass[{D, mu}] = c;
    }

    std::map<i64, QZSeries> h;
    for (i64 mu = 0; mu < 2 * m; ++mu) {
        i64 r0 = std::min(mu, 2 * m - mu);
        h.emplace(mu, QZSeries(ord - frac(r0 * r0, 4 * m)));
    }
    for (auto& [key, c] : byclass) h[key.second].add_term(c, key.first / (4 * m), 0);

    QZSeries back(ord);
    for (auto& [mu, s] : h)
        if (!s.is_zero()) back = back + s * theta_mr(m, mu, ord);
    if (!back.agrees(phi)) throw Error(ErrorKind::NotIndexM, "theta decomposition does not reproduce the series");
    return h;
}

bool elliptic_check(const QZSeries& phi, i64 m) {
    // z -> z + 1 needs integral zeta powers
    if (!phi.integral_zeta()) return false;
    const mpq_class ord = phi.order();
    // z -> z + tau sends c(n, r) to position (n + r + m, r + 2m)
    for (auto& [k, c] : phi.terms()) {
        mpq_class n = frac(k.first, phi.den());
        i64 r = k.second / 2;
        mpq_class up = n + r + m, down = n - r + m;
        if (up < ord && phi.coef(up, r + 2 * m) != c) return false;
        if (down < ord && phi.coef(down, r - 2 * m) != c) return false;
    }
    return true;
}

namespace {

// x = a mod m1, x = b mod m2, coprime moduli
i64 crt(i64 a, i64 m1, i64 b, i64 m2) {
    if (m1 == 1) return mod(b, m2);
    if (m2 == 1) return mod(a, m1);
    i64 t = mod((b - a) % m2 * mod_inverse(m1 % m2, m2), m2);
    return mod(a + m1 * t, m1 * m2);
}

i64 side_order(i64 p, i64 idx) { return p == 2 ? 2 * p_part(idx, 2) : p_part(idx, p); }

}  // namespace

TensorVector global_tensor(i64 m, i64 mprime, const std::vector<LocalPiece>& pieces) {
    struct Partial {
        i64 g, gm, d, dm;
        mpq_class c;
    };
    std::vector<Partial> acc{{0, 1, 0, 1, 1}};
    std::vector<i64> seen;
    for (auto& piece : pieces) {
        const LocalSpec& s = piece.spec;
        if (std::find(seen.begin(), seen.end(), s.p) != seen.end())
            throw Error(ErrorKind::DimensionMismatch, "two pieces at p = " + std::to_string(s.p));
        seen.push_back(s.p);
        CyclicFactor f1 = local_factor(s.p, s.k1, s.a1);
        i64 o1 = f1.order();
        i64 o2 = s.has_second ? local_factor(s.p, s.k2, s.a2).order() : 1;
        if (o1 != side_order(s.p, m) || o2 != side_order(s.p, mprime))
            throw Error(ErrorKind::DimensionMismatch, "piece " + s.str() + " does not match the p-parts of m and m'");
        std::vector<Partial> next;
        for (auto& [idx, x] : piece.v.c) {
            if (!x.is_rational()) throw Error(ErrorKind::InvalidArgument, "irrational coefficient in " + s.str());
            i64 x1 = idx / o2, x2 = idx % o2;
            for (auto& a : acc)
                next.push_back({crt(a.g, a.gm, x1, o1), a.gm * o1, crt(a.d, a.dm, x2, o2), a.dm * o2, a.c * x.rational_part()});
        }
        acc = std::move(next);
    }
    TensorVector t;
    t.m = m;
    t.mprime = mprime;
    for (auto& a : acc) {
        if (a.gm != 2 * m || a.dm != 2 * mprime)
            throw Error(ErrorKind::DimensionMismatch, "pieces do not cover every prime of m and m'");
        t.c[{a.g, a.d}] += a.c;
    }
    for (auto it = t.c.begin(); it != t.c.end();) it = it->second == 0 ? t.c.erase(it) : std::next(it);
    return t;
}

QZSeries invariant_to_jacobi(const TensorVector& v, const mpq_class& prec) {
    std::map<i64, QZSeries> left, right;
    QZSeries out(prec);
    for (auto& [key, c] : v.c) {
        auto [g, d] = key;
        if (g < 0 || g >= 2 * v.m || d < 0 || d >= 2 * v.mprime)
            throw Error(ErrorKind::DimensionMismatch, "basis index outside D_m (x) D_m'");
        if (!left.count(g)) left.emplace(g, theta_mr(v.m, g, prec));
        if (!right.count(d)) right.emplace(d, theta_mr(v.mprime, d, prec).at_z0());
        out = out + (left.at(g) * right.at(d)).scaled(c);
    }
    return out.truncated(prec);
}

}  // namespace jacobi
