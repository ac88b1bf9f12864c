#include "jacobi/modp.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

std::unique_ptr<SplitPrime> make_split_prime(int L, int index) {
    const u64 top = (1ULL << 62);
    u64 k = top / static_cast<u64>(L);
    int found = -1;
    while (k > 0) {
        u64 P = k * static_cast<u64>(L) + 1;
        --k;
        if (P >= top || !is_prime(P)) continue;
        if (++found < index) continue;
        auto sp = std::make_unique<SplitPrime>();
        sp->P = P;
        sp->L = L;
        auto qs = factorize(static_cast<u64>(L)).primes();
        for (u64 g = 2;; ++g) {
            u64 w = powmod(g, (P - 1) / static_cast<u64>(L), P);
            bool primitive = true;
            for (u64 q : qs)
                if (powmod(w, static_cast<u64>(L) / q, P) == 1) primitive = false;
            if (!primitive) continue;
            sp->pw.resize(L);
            u64 x = 1;
            for (int t = 0; t < L; ++t) {
                sp->pw[t] = x;
                x = mulmod(x, w, P);
            }
            return sp;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "no split prime found");
}

}  // namespace

const SplitPrime& split_prime(int L, int index) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<SplitPrime>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(L, index);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto sp = make_split_prime(L, index);
    const SplitPrime& ref = *sp;
    cache[key] = std::move(sp);
    return ref;
}

void RootSum::add(int e, i64 c) {
    if (c != 0) terms.emplace_back(e, c);
}

void RootSum::normalize(int L) {
    for (auto& t : terms) t.first = static_cast<int>(mod(t.first, L));
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<int, i64>> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first) {
            out.back().second += t.second;
        } else {
            out.push_back(t);
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& t) { return t.second == 0; }), out.end());
    terms = std::move(out);
}

i64 RootSum::l1() const {
    i64 s = 0;
    for (auto& t : terms) s += t.second < 0 ? -t.second : t.second;
    return s;
}

u64 RootSum::eval(const SplitPrime& sp, int j) const {
    u64 s = 0;
    for (auto& t : terms) {
        u64 w = sp.pw[static_cast<size_t>((static_cast<i64>(t.first) * j) % sp.L)];
        u64 c = t.second >= 0 ? static_cast<u64>(t.second) % sp.P : sp.P - static_cast<u64>(-t.second) % sp.P;
        s = sp.add(s, sp.mul(w, c));
    }
    return s;
}

CycScalar RootSum::to_cyc(int L) const {
    const CycTable& tab = cyc_table(L);
    CycScalar r(L);
    std::vector<mpq_class> acc(tab.phi);
    for (auto& t : terms)
        for (auto [i, c] : tab.rows[mod(t.first, L)]) acc[i] += mpq_class(static_cast<long>(c)) * static_cast<long>(t.second);
    for (int i = 0; i < tab.phi; ++i)
        if (acc[i] != 0) r += CycScalar::root(i, L).scaled(acc[i]);
    return r;
}

int rank_mod_p(std::vector<std::vector<u64>> rows, const SplitPrime& sp, std::vector<int>* pivot_rows) {
    if (rows.empty()) return 0;
    size_t ncols = rows[0].size();
    // echelon rows with pivot normalized to 1
    std::vector<std::vector<u64>> ech;
    std::vector<size_t> piv;
    for (size_t r = 0; r < rows.size(); ++r) {
        auto& row = rows[r];
        for (size_t e = 0; e < ech.size(); ++e) {
            u64 f = row[piv[e]];
            if (f == 0) continue;
            for (size_t c = piv[e]; c < ncols; ++c)
                if (ech[e][c]) row[c] = sp.sub(row[c], sp.mul(f, ech[e][c]));
        }
        size_t p = 0;
        while (p < ncols && row[p] == 0) ++p;
        if (p == ncols) continue;
        u64 inv = sp.inv(row[p]);
        for (size_t c = p; c < ncols; ++c) row[c] = sp.mul(row[c], inv);
        ech.push_back(std::move(row));
        piv.push_back(p);
        if (pivot_rows) pivot_rows->push_back(static_cast<int>(r));
        if (ech.size() == ncols) break;
    }
    return static_cast<int>(ech.size());
}

}  // namespace jacobi
