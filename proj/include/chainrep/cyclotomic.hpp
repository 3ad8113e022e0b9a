#pragma once

// Exact arithmetic in Z[zeta_n]: integer coefficient vectors in the power
// basis 1, zeta, ..., zeta^{phi(n)-1}, reduced modulo the n-th cyclotomic
// polynomial.  Character values, inner products, and norms stay exact; there
// is no floating point anywhere in the character-theoretic layer.
//
// Phase is an exact rational number of turns (j/d mod 1) and is the cheap
// representation for one-dimensional characters; it converts to a CycInt in
// any domain whose order d divides.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "chainrep/errors.hpp"

namespace chainrep {

namespace detail {

// quotient of integer polynomials, requires exact division by a monic divisor
inline std::vector<long long> ipoly_div_exact(std::vector<long long> num,
                                              const std::vector<long long>& den) {
    int dn = (int)num.size() - 1, dd = (int)den.size() - 1;
    while (dn >= 0 && num[size_t(dn)] == 0) --dn;
    while (dd >= 0 && den[size_t(dd)] == 0) --dd;
    if (dd < 0 || den[size_t(dd)] != 1) throw SpecError("cyclotomic division by non-monic poly");
    std::vector<long long> quo(size_t(dn - dd + 1), 0);
    for (int k = dn - dd; k >= 0; --k) {
        long long c = num[size_t(k + dd)];
        quo[size_t(k)] = c;
        for (int i = 0; i <= dd; ++i) num[size_t(k + i)] -= c * den[size_t(i)];
    }
    for (long long v : num)
        if (v != 0) throw SpecError("cyclotomic division left a remainder (internal)");
    return quo;
}

// n-th cyclotomic polynomial via Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d
inline std::vector<long long> cyclotomic_poly(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<long long>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto compute = [](auto&& self, int k) -> const std::vector<long long>& {
        auto it = cache.find(k);
        if (it != cache.end()) return it->second;
        std::vector<long long> num(size_t(k) + 1, 0);
        num[0] = -1;
        num[size_t(k)] = 1;
        for (int d = 1; d < k; ++d)
            if (k % d == 0) num = ipoly_div_exact(std::move(num), self(self, d));
        while (num.size() > 1 && num.back() == 0) num.pop_back();
        return cache.emplace(k, std::move(num)).first->second;
    };
    return compute(compute, n);
}

} // namespace detail

// reduction data for Z[zeta_n], interned per order
struct CycDomain {
    int n = 1;
    int deg = 1;
    std::vector<std::vector<long long>> power; // x^k mod Phi_n for k in [0, 2n)

    static const CycDomain* get(int n) {
        if (n < 1) throw SpecError("cyclotomic order must be positive");
        static std::mutex mu;
        static std::map<int, std::unique_ptr<CycDomain>> pool;
        std::lock_guard<std::mutex> lock(mu);
        auto it = pool.find(n);
        if (it != pool.end()) return it->second.get();
        auto D = std::make_unique<CycDomain>();
        D->n = n;
        std::vector<long long> phi = detail::cyclotomic_poly(n);
        D->deg = (int)phi.size() - 1;
        D->power.assign(size_t(2 * n), std::vector<long long>(size_t(D->deg), 0));
        std::vector<long long> cur(size_t(D->deg), 0);
        cur[0] = 1;
        for (int k = 0; k < 2 * n; ++k) {
            D->power[size_t(k)] = cur;
            // multiply by x, reduce the overflowing top coefficient by Phi_n
            long long top = cur[size_t(D->deg - 1)];
            for (int i = D->deg - 1; i > 0; --i) cur[size_t(i)] = cur[size_t(i - 1)];
            cur[0] = 0;
            if (top != 0)
                for (int i = 0; i < D->deg; ++i) cur[size_t(i)] -= top * phi[size_t(i)];
        }
        return pool.emplace(n, std::move(D)).first->second.get();
    }
};

struct CycInt {
    const CycDomain* D = nullptr;
    std::vector<long long> c;

    CycInt() = default;
    explicit CycInt(const CycDomain* dom) : D(dom), c(size_t(dom->deg), 0) {}

    static CycInt integer(const CycDomain* dom, long long v) {
        CycInt r(dom);
        r.c[0] = v;
        return r;
    }
    // zeta_n^k
    static CycInt root(const CycDomain* dom, long long k) {
        CycInt r(dom);
        long long e = ((k % dom->n) + dom->n) % dom->n;
        r.c = dom->power[size_t(e)];
        return r;
    }

    bool is_zero() const {
        for (long long v : c)
            if (v != 0) return false;
        return true;
    }
    bool is_integer() const {
        for (size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0) return false;
        return true;
    }
    long long integer_value() const {
        if (!is_integer()) throw SpecError("cyclotomic value is not a rational integer");
        return c[0];
    }
    bool operator==(const CycInt& o) const { return D == o.D && c == o.c; }
    bool operator!=(const CycInt& o) const { return !(*this == o); }
};

inline void cyc_check_domain(const CycInt& a, const CycInt& b) {
    if (a.D != b.D) throw SpecError("cyclotomic domain mismatch");
}

inline CycInt cyc_add(const CycInt& a, const CycInt& b) {
    cyc_check_domain(a, b);
    CycInt r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
}
inline CycInt cyc_sub(const CycInt& a, const CycInt& b) {
    cyc_check_domain(a, b);
    CycInt r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
}
inline CycInt cyc_neg(const CycInt& a) {
    CycInt r = a;
    for (auto& v : r.c) v = -v;
    return r;
}
inline CycInt cyc_scale(const CycInt& a, long long s) {
    CycInt r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

inline CycInt cyc_mul(const CycInt& a, const CycInt& b) {
    cyc_check_domain(a, b);
    int deg = a.D->deg;
    std::vector<__int128> conv(size_t(2 * deg - 1), 0);
    for (int i = 0; i < deg; ++i) {
        if (a.c[size_t(i)] == 0) continue;
        for (int j = 0; j < deg; ++j)
            conv[size_t(i + j)] += (__int128)a.c[size_t(i)] * b.c[size_t(j)];
    }
    CycInt r(a.D);
    std::vector<__int128> acc(size_t(deg), 0);
    for (int k = 0; k < 2 * deg - 1; ++k) {
        if (conv[size_t(k)] == 0) continue;
        const auto& pw = a.D->power[size_t(k)];
        for (int i = 0; i < deg; ++i) acc[size_t(i)] += conv[size_t(k)] * pw[size_t(i)];
    }
    for (int i = 0; i < deg; ++i) {
        if (acc[size_t(i)] > INT64_MAX || acc[size_t(i)] < INT64_MIN)
            throw SpecError("cyclotomic coefficient overflow");
        r.c[size_t(i)] = (long long)acc[size_t(i)];
    }
    return r;
}

// complex conjugation zeta -> zeta^{-1}
inline CycInt cyc_conj(const CycInt& a) {
    CycInt r(a.D);
    for (int k = 0; k < a.D->deg; ++k) {
        if (a.c[size_t(k)] == 0) continue;
        const auto& pw = a.D->power[size_t((a.D->n - k) % a.D->n)];
        for (int i = 0; i < a.D->deg; ++i) r.c[size_t(i)] += a.c[size_t(k)] * pw[size_t(i)];
    }
    return r;
}

inline CycInt cyc_div_exact(const CycInt& a, long long s) {
    if (s == 0) throw SpecError("cyclotomic division by zero");
    CycInt r = a;
    for (auto& v : r.c) {
        if (v % s != 0) throw SpecError("cyclotomic division is not exact");
        v /= s;
    }
    return r;
}

// embed into a domain of larger conductor: zeta_n -> zeta_N^{N/n}
inline CycInt cyc_embed(const CycInt& a, const CycDomain* E) {
    if (a.D == E) return a;
    if (E->n % a.D->n != 0) throw SpecError("cyclotomic embedding needs a conductor multiple");
    long long s = E->n / a.D->n;
    CycInt r(E);
    for (size_t k = 0; k < a.c.size(); ++k) {
        if (a.c[k] == 0) continue;
        r = cyc_add(r, cyc_scale(CycInt::root(E, (long long)k * s), a.c[k]));
    }
    return r;
}

// exact rational number of turns, normalized to 0 <= num < den, gcd = 1
struct Phase {
    long long num = 0;
    long long den = 1;

    static Phase of(long long num, long long den) {
        if (den <= 0) throw SpecError("phase denominator must be positive");
        num %= den;
        if (num < 0) num += den;
        long long g = std::gcd(num, den);
        if (g == 0) g = 1;
        return Phase{num / g, den / g};
    }
    bool is_trivial() const { return num == 0; }
    bool operator==(const Phase& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Phase& o) const { return !(*this == o); }
};

inline Phase phase_add(const Phase& a, const Phase& b) {
    long long g = std::gcd(a.den, b.den);
    long long den = a.den / g * b.den;
    return Phase::of(a.num * (den / a.den) + b.num * (den / b.den), den);
}
inline Phase phase_neg(const Phase& a) { return Phase::of(-a.num, a.den); }
inline Phase phase_sub(const Phase& a, const Phase& b) { return phase_add(a, phase_neg(b)); }
inline Phase phase_scale(const Phase& a, long long k) {
    long long r = ((k % a.den) + a.den) % a.den;
    return Phase::of(a.num * r, a.den);
}

inline CycInt phase_to_cyc(const Phase& p, const CycDomain* D) {
    if (D->n % p.den != 0) throw SpecError("phase order does not divide the cyclotomic order");
    return CycInt::root(D, p.num * (D->n / p.den));
}

} // namespace chainrep
