#include "jacobi/weil.hpp"

#include <algorithm>
#include <sstream>

#include "jacobi/errors.hpp"
#include "jacobi/modp.hpp"

namespace jacobi {

void FormVector::add(i64 idx, const CycScalar& x) {
    if (x.is_zero()) return;
    auto it = c.find(idx);
    if (it == c.end()) {
        c.emplace(idx, x);
        return;
    }
    it->second += x;
    if (it->second.is_zero()) c.erase(it);
}

CycScalar FormVector::at(i64 idx, int L) const {
    auto it = c.find(idx);
    return it == c.end() ? CycScalar::zero(L) : it->second;
}

FormVector FormVector::operator+(const FormVector& o) const {
    FormVector r = *this;
    for (auto& [k, x] : o.c) r.add(k, x);
    return r;
}

FormVector FormVector::operator-(const FormVector& o) const {
    FormVector r = *this;
    for (auto& [k, x] : o.c) r.add(k, -x);
    return r;
}

FormVector FormVector::scaled(const CycScalar& s) const {
    FormVector r;
    if (s.is_zero()) return r;
    for (auto& [k, x] : c) r.c.emplace(k, x * s);
    return r;
}

bool FormVector::operator==(const FormVector& o) const {
    if (c.size() != o.c.size()) return false;
    for (auto a = c.begin(), b = o.c.begin(); a != c.end(); ++a, ++b)
        if (a->first != b->first || a->second != b->second) return false;
    return true;
}

GroupWord parse_word(const std::string& text) {
    GroupWord w;
    std::string tok;
    std::string norm = text;
    for (auto& ch : norm)
        if (ch == ',') ch = ' ';
    std::istringstream is(norm);
    while (is >> tok) {
        if (tok == "S") {
            w.push_back({Letter::S, 1});
        } else if (tok == "Z") {
            w.push_back({Letter::Z, 1});
        } else if (tok[0] == 'T') {
            i64 k = 1;
            if (tok.size() > 1) {
                if (tok[1] != '^') throw Error(ErrorKind::InvalidArgument, "bad letter " + tok);
                try {
                    k = std::stoll(tok.substr(2));
                } catch (...) {
                    throw Error(ErrorKind::InvalidArgument, "bad exponent in " + tok);
                }
            }
            w.push_back({Letter::T, k});
        } else {
            throw Error(ErrorKind::InvalidArgument, "bad letter " + tok);
        }
    }
    return w;
}

std::string word_str(const GroupWord& w) {
    std::string s;
    for (auto& l : w) {
        if (!s.empty()) s += " ";
        if (l.kind == Letter::S) s += "S";
        else if (l.kind == Letter::Z) s += "Z";
        else s += l.k == 1 ? "T" : "T^" + std::to_string(l.k);
    }
    return s;
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

Mat2 word_matrix(const GroupWord& w) {
    Mat2 m{1, 0, 0, 1};
    for (auto& l : w) {
        if (l.kind == Letter::S) m = mat_mul(m, {0, -1, 1, 0});
        else if (l.kind == Letter::Z) m = mat_mul(m, {-1, 0, 0, -1});
        else m = mat_mul(m, {1, l.k, 0, 1});
    }
    return m;
}

GroupWord decompose_sl2(const Mat2& m) {
    if (m[0] * m[3] - m[1] * m[2] != 1) throw Error(ErrorKind::InvalidArgument, "matrix is not in SL2(Z)");
    GroupWord w;
    i64 a = m[0], b = m[1], c = m[2], d = m[3];
    while (c != 0) {
        i64 q = a / c;
        a -= q * c;
        b -= q * d;
        if (q != 0) w.push_back({Letter::T, q});
        w.push_back({Letter::S, 1});
        i64 na = c, nb = d, nc = -a, nd = -b;
        a = na, b = nb, c = nc, d = nd;
    }
    if (a == -1) {
        w.push_back({Letter::Z, 1});
        b = -b;
    }
    if (b != 0) w.push_back({Letter::T, b});
    return w;
}

Mat2 lift_diagonal(i64 u, i64 n) {
    if (n == 1) return {1, 0, 0, 1};
    u = mod(u, n);
    // d = u^-1 mod n^2, so u d - 1 = k n^2 and [[u, k n], [n, d]] has determinant 1
    i64 n2 = n * n;
    i64 d = mod_inverse(u, n2);
    i64 k = static_cast<i64>((static_cast<__int128>(u) * d - 1) / n2);
    return {u, k * n, n, d};
}

FormVector MonomialOp::apply(const FormVector& v) const {
    FormVector r;
    for (auto& [g, x] : v.c) r.add(target[g], x * phase[g]);
    return r;
}

int default_conductor(const DiscriminantForm& form) {
    // conj(G)/|D| already lies in Q(zeta_level); odd levels have even signature so Z only needs +-1
    return static_cast<int>(form.level() % 2 ? form.level() : lcm(8, form.level()));
}

WeilRep::WeilRep(DiscriminantForm form, int conductor) : form_(std::move(form)) {
    L_ = conductor ? conductor : default_conductor(form_);
    if (L_ % default_conductor(form_) != 0)
        throw Error(ErrorKind::ConductorTooSmall, "conductor " + std::to_string(L_) + " too small for " + form_.str());
    sign_ = signature_milgram(form_);
    i64 D = form_.order();
    qnum_.resize(D);
    std::vector<mpq_class> acc(L_);
    i64 step = L_ / form_.level();
    for (i64 g = 0; g < D; ++g) {
        qnum_[g] = form_.q_num(g);
        acc[qnum_[g] * step] += 1;
    }
    CycScalar G = CycScalar::from_powers(acc, L_);
    s_scale_ = G.conj().scaled(mpq_class(1, static_cast<unsigned long>(D)));
}

CycScalar WeilRep::root_at(i64 num, i64 den) const { return CycScalar::root(mod(num, den) * (L_ / den), L_); }

FormVector WeilRep::basis(i64 idx) const {
    FormVector v;
    v.add(idx, CycScalar::from_int(1, L_));
    return v;
}

FormVector WeilRep::T(const FormVector& v, i64 k) const {
    FormVector r;
    i64 lev = form_.level();
    i64 step = L_ / lev;
    for (auto& [g, x] : v.c) {
        i64 e = static_cast<i64>((static_cast<__int128>(qnum_[g]) * mod(k, lev)) % lev);
        r.c.emplace(g, x.times_root(e * step));
    }
    return r;
}

FormVector WeilRep::S(const FormVector& v) const {
    FormVector r;
    i64 D = form_.order();
    i64 lev = form_.level();
    i64 step = L_ / lev;
    const CycTable& tab = cyc_table(L_);
    std::vector<mpq_class> acc(L_);
    for (i64 b = 0; b < D; ++b) {
        for (auto& x : acc) x = 0;
        for (auto& [g, x] : v.c) {
            i64 shift = mod(-form_.b_num(g, b), lev) * step;
            const auto& co = x.coeffs();
            for (int i = 0; i < tab.phi; ++i)
                if (co[i] != 0) acc[(i + shift) % L_] += co[i];
        }
        CycScalar y = CycScalar::from_powers(acc, L_);
        if (!y.is_zero()) r.c.emplace(b, y * s_scale_);
    }
    return r;
}

FormVector WeilRep::Z(const FormVector& v) const {
    FormVector r;
    // e(-sign/4); for even sign this is +-1 and needs no fourth root in the field
    if (sign_ % 2 == 0) {
        bool flip = (sign_ / 2) % 2 == 1;
        for (auto& [g, x] : v.c) r.add(form_.neg(g), flip ? -x : x);
        return r;
    }
    i64 shift = mod(-sign_ * (L_ / 4), L_);
    for (auto& [g, x] : v.c) r.add(form_.neg(g), x.times_root(shift));
    return r;
}

FormVector WeilRep::apply(const GroupWord& w, const FormVector& v) const {
    FormVector r = v;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (it->kind == Letter::S) r = S(r);
        else if (it->kind == Letter::Z) r = Z(r);
        else r = T(r, it->k);
    }
    return r;
}

FormVector WeilRep::symmetrize(const FormVector& v, int sign) const {
    FormVector r = v;
    for (auto& [g, x] : v.c) r.add(form_.neg(g), sign > 0 ? x : -x);
    return r.scaled(CycScalar::from_rational(mpq_class(1, 2), L_));
}

std::vector<FormVector> WeilRep::pm_basis(int sign) const {
    std::vector<FormVector> out;
    CycScalar one = CycScalar::from_int(1, L_);
    for (i64 g = 0; g < form_.order(); ++g) {
        i64 ng = form_.neg(g);
        if (ng < g) continue;
        FormVector v;
        v.add(g, one);
        v.add(ng, sign > 0 ? one : -one);
        if (!v.is_zero()) out.push_back(v);
    }
    return out;
}

CycScalar WeilRep::inner(const FormVector& v, const FormVector& w) const {
    CycScalar s = CycScalar::zero(L_);
    for (auto& [g, x] : v.c) {
        auto it = w.c.find(g);
        if (it != w.c.end()) s += x * it->second.conj();
    }
    return s;
}

std::string WeilRep::str(const FormVector& v) const {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [g, x] : v.c) {
        if (!first) os << " + ";
        first = false;
        os << "(" << x.str() << ")*e^(";
        auto el = form_.element(g);
        for (size_t i = 0; i < el.size(); ++i) os << (i ? "," : "") << el[i];
        os << ")";
    }
    return os.str();
}

namespace {

struct PrimePowerInfo {
    bool even;  // 2-adic D form
    i64 p;
    int n;      // D_{2^n} or L_{p^n}
    i64 a;
    i64 qden;   // 2^{n+2} or p^n
};

PrimePowerInfo prime_power_info(const DiscriminantForm& f) {
    if (f.factors().size() != 1) throw Error(ErrorKind::NotPrimePower, "closed formulas need a single cyclic factor");
    const auto& c = f.factors()[0];
    if (c.kind == FactorKind::D) {
        if ((c.m & (c.m - 1)) != 0) throw Error(ErrorKind::NotPrimePower, c.str());
        return {true, 2, valuation(c.m, 2), c.coef, 4 * c.m};
    }
    auto pf = factorize(static_cast<u64>(c.m));
    if (pf.factors.size() != 1) throw Error(ErrorKind::NotPrimePower, c.str());
    return {false, static_cast<i64>(pf.factors[0].first), pf.factors[0].second, c.coef, c.m};
}

}  // namespace

std::vector<FormVector> WeilRep::STmS_closed(i64 m) const {
    auto info = prime_power_info(form_);
    i64 D = form_.order();
    i64 den = info.qden;
    CycScalar pre;
    if (info.even) {
        // (-i)^a / 2^{n+1}
        pre = CycScalar::root(mod(-info.a, 4) * (L_ / 4), L_).scaled(mpq_class(1, static_cast<unsigned long>(D)));
    } else {
        int sgn = (info.p % 4 == 3 && info.n % 2 == 1) ? -1 : 1;
        pre = CycScalar::from_rational(mpq_class(sgn, static_cast<unsigned long>(D)), L_);
    }
    std::vector<FormVector> out;
    for (i64 g = 0; g < D; ++g) {
        FormVector v;
        for (i64 b = 0; b < D; ++b) {
            std::vector<mpq_class> acc(L_);
            for (i64 al = 0; al < D; ++al) {
                i64 e = mod(info.a * mod(-2 * g * al - 2 * al * b + mod(m, den) * al % den * al, den), den);
                acc[e * (L_ / den)] += 1;
            }
            v.add(b, CycScalar::from_powers(acc, L_) * pre);
        }
        out.push_back(v);
    }
    return out;
}

MonomialOp WeilRep::ST_pair_closed(i64 m, i64 m2) const {
    auto info = prime_power_info(form_);
    i64 D = form_.order();
    i64 den = info.qden;
    if (info.even ? (mod(m, 2) == 0 || mod(m * m2, den) != 1) : mod(m * m2, den) != 1)
        throw Error(ErrorKind::NotInvertible, "m m' is not 1 modulo " + std::to_string(den));
    CycScalar scalar;
    if (info.even) {
        if (info.n % 2 == 0) {
            CycScalar one = CycScalar::from_int(1, L_);
            CycScalar u = one + root_at(-info.a, 4);
            scalar = u * u * u * (one + root_at(info.a * m, 4));
            scalar = scalar.scaled(mpq_class(1, 4));
        } else {
            scalar = root_at(-3 * info.a, 8) * root_at(info.a * m, 8);
        }
    } else {
        int s = info.n % 2 == 0 ? 1 : kronecker(-m, info.p);
        scalar = CycScalar::from_int(s, L_);
    }
    MonomialOp op;
    op.target.resize(D);
    op.phase.resize(D);
    for (i64 g = 0; g < D; ++g) {
        op.target[g] = mod(-m2 * g, D);
        i64 e = mod(-info.a * mod(m2, den) % den * g % den * g, den);
        op.phase[g] = scalar * root_at(e, den);
    }
    return op;
}

FormVector ScaledEmbedding::apply(const FormVector& v, int L) const {
    FormVector r;
    (void)L;
    for (auto& [g, x] : v.c)
        for (i64 t : images[g]) r.add(t, x);
    return r;
}

ScaledEmbedding embed_scaled(const CyclicFactor& src, i64 d) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be positive");
    ScaledEmbedding e;
    e.source = src;
    e.d = d;
    if (src.kind == FactorKind::D) {
        if (gcd(src.coef, 2 * src.m * d) != 1) throw Error(ErrorKind::NotCoprime, "need gcd(a, 2md) = 1");
        e.target = factor_D(src.m * d * d, src.coef);
    } else {
        if (gcd(src.coef, src.m * d) != 1 || d % 2 == 0) throw Error(ErrorKind::NotCoprime, "need odd d and gcd(a, md) = 1");
        e.target = factor_L(src.m * d * d, src.coef);
    }
    i64 step = src.kind == FactorKind::D ? 2 * src.m * d : src.m * d;
    i64 tord = e.target.order();
    for (i64 g = 0; g < src.order(); ++g) {
        std::vector<i64> hit;
        for (i64 x = mod(g * d, step); x < tord; x += step) hit.push_back(x);
        e.images.push_back(hit);
    }
    return e;
}

}  // namespace jacobi

namespace jacobi {

namespace {

// entry of a group-ring vector: either a single signed root or a dense array over Z/L
struct GREntry {
    bool dense = false;
    i64 coef = 0;  // single: coef * zeta^exp
    i64 exp = 0;
    std::vector<i64> a;

    bool zero() const {
        if (!dense) return coef == 0;
        for (i64 x : a)
            if (x) return false;
        return true;
    }
};

void rotate_add(std::vector<i64>& acc, const std::vector<i64>& src, i64 shift, int L) {
    // acc[(i + shift) % L] += src[i]
    i64 s = mod(shift, L);
    for (i64 i = 0; i < L - s; ++i) acc[i + s] += src[i];
    for (i64 i = L - s; i < L; ++i) acc[i + s - L] += src[i];
}

}  // namespace

WordEvaluator::WordEvaluator(const WeilRep& rep) : rep_(rep) {
    const auto& f = rep.form();
    D_ = f.order();
    lev_ = f.level();
    L_ = rep.conductor();
    step_ = L_ / lev_;
    qnum_.resize(D_);
    for (i64 g = 0; g < D_; ++g) qnum_[g] = f.q_num(g);
    bnum_.resize(D_ * D_);
    for (i64 x = 0; x < D_; ++x)
        for (i64 y = 0; y < D_; ++y) bnum_[x * D_ + y] = f.b_num(x, y);
    std::vector<mpq_class> acc(L_);
    for (i64 g = 0; g < D_; ++g) acc[mod(-qnum_[g], lev_) * step_] += 1;
    g_conj_ = CycScalar::from_powers(acc, L_);
    CycScalar gs = g_conj_.scaled(mpq_class(1, static_cast<unsigned long>(D_)));
    scale_pow_.push_back(CycScalar::from_int(1, L_));
    for (int k = 1; k <= 6; ++k) scale_pow_.push_back(scale_pow_.back() * gs);
    const SplitPrime& sp = split_prime(L_, 0);
    for (int s = 0; s < L_; ++s) dlog_[sp.pw[s]] = s;
}

FormVector WordEvaluator::apply(const GroupWord& w, i64 idx) const {
    const SplitPrime& sp = split_prime(L_, 0);
    std::vector<GREntry> v(D_);
    v[idx].coef = 1;
    std::vector<i64> base(L_, 0);
    base[0] = 1;
    int nF = 0;
    i64 global_exp = 0;  // accumulated zeta power from Z
    int global_sign = 1;  // -1 from Z is not a power of zeta for odd L
    const auto& f = rep_.form();

    auto hash = [&](const std::vector<i64>& a) {
        u64 h = 0;
        for (int i = 0; i < L_; ++i)
            if (a[i]) h = sp.add(h, sp.mul(sp.from_int(a[i]), sp.pw[i]));
        return h;
    };

    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (it->kind == Letter::T) {
            i64 k = mod(it->k, lev_);
            for (i64 g = 0; g < D_; ++g) {
                if (v[g].zero()) continue;
                i64 sh = static_cast<i64>(static_cast<__int128>(qnum_[g]) * k % lev_) * step_;
                if (!v[g].dense) {
                    v[g].exp = mod(v[g].exp + sh, L_);
                } else {
                    std::vector<i64> r(L_, 0);
                    rotate_add(r, v[g].a, sh, L_);
                    v[g].a = std::move(r);
                }
            }
        } else if (it->kind == Letter::Z) {
            std::vector<GREntry> r(D_);
            for (i64 g = 0; g < D_; ++g) r[f.neg(g)] = std::move(v[g]);
            v = std::move(r);
            if (rep_.signature() % 2 == 0) {
                if ((rep_.signature() / 2) % 2 == 1) global_sign = -global_sign;
            } else {
                global_exp += mod(-rep_.signature() * (L_ / 4), L_);
            }
        } else {
            ++nF;
            std::vector<GREntry> r(D_);
            std::vector<i64> acc(L_);
            for (i64 e = 0; e < D_; ++e) {
                std::fill(acc.begin(), acc.end(), 0);
                for (i64 g = 0; g < D_; ++g) {
                    const auto& x = v[g];
                    if (!x.dense && x.coef == 0) continue;
                    i64 sh = mod(-bnum_[g * D_ + e], lev_) * step_;
                    if (!x.dense) acc[(x.exp + sh) % L_] += x.coef;
                    else rotate_add(acc, x.a, sh, L_);
                }
                r[e].dense = true;
                r[e].a = acc;
            }
            v = std::move(r);
            // factor dense entries as +-zeta^s * R with a common R
            i64 first = -1;
            for (i64 e = 0; e < D_; ++e)
                if (!v[e].zero()) {
                    first = e;
                    break;
                }
            if (first < 0) break;
            std::vector<i64> R = v[first].a;
            u64 hR = hash(R);
            if (hR == 0) continue;
            u64 hRinv = sp.inv(hR);
            const auto& dlog = dlog_;
            std::vector<std::pair<i64, i64>> fac(D_, {0, 0});
            bool ok = true;
            for (i64 e = 0; e < D_ && ok; ++e) {
                if (v[e].zero()) continue;
                u64 ratio = sp.mul(hash(v[e].a), hRinv);
                i64 sign = 1;
                auto d = dlog.find(ratio);
                if (d == dlog.end()) {
                    sign = -1;
                    d = dlog.find(sp.sub(0, ratio));
                }
                if (d == dlog.end()) {
                    ok = false;
                    break;
                }
                i64 s = d->second;
                for (int i = 0; i < L_; ++i)
                    if (v[e].a[(i + s) % L_] != sign * R[i]) {
                        ok = false;
                        break;
                    }
                fac[e] = {sign, s};
            }
            if (!ok) continue;
            std::vector<i64> nb(L_, 0);
            for (int i = 0; i < L_; ++i)
                if (R[i]) {
                    for (int j = 0; j < L_; ++j)
                        if (base[j]) nb[(i + j) % L_] += R[i] * base[j];
                }
            base = std::move(nb);
            for (i64 e = 0; e < D_; ++e) {
                GREntry x;
                if (!v[e].zero()) {
                    x.coef = fac[e].first;
                    x.exp = fac[e].second;
                }
                v[e] = std::move(x);
            }
        }
    }

    CycScalar scale = scale_pow_[std::min<int>(nF, 6)];
    for (int i = 6; i < nF; ++i) scale *= scale_pow_[1];
    CycScalar bs = CycScalar::from_int_powers(base, L_) * scale;
    bs = bs.times_root(mod(global_exp, L_));
    if (global_sign < 0) bs = -bs;
    FormVector out;
    for (i64 g = 0; g < D_; ++g) {
        const auto& x = v[g];
        if (x.zero()) continue;
        if (!x.dense) {
            out.add(g, bs.times_root(x.exp).scaled(mpq_class(static_cast<long>(x.coef))));
        } else {
            CycScalar y = CycScalar::from_int_powers(x.a, L_);
            if (!y.is_zero()) out.add(g, y * bs);
        }
    }
    return out;
}

}  // namespace jacobi
