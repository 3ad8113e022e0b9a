#pragma once

// Finite chain rings O_r with residue field F_q, q = p^m, uniformizer pi.
//
// Two kinds share one interface:
//   mixed: the Galois ring GR(p^r, m) = Z_{p^r}[x]/(f), pi = p, f the
//          coefficient lift of the canonical residue modulus;
//   equal: F_q[t]/(t^r), pi = t.
//
// Elements are stored as pi-adic Teichmuller digit vectors: a = sum mu(a_i) pi^i
// with a_i in F_q and mu the unique multiplicative section of the residue map
// (for equal characteristic mu is the constant embedding).  A digit vector is
// packed into a uint32 code = sum a_i q^i, which makes reduction and the
// digit-preserving section free and gives every element a canonical integer.
// Mixed-kind multiplication converts to polynomial-mod-(p^r, f) form and back.
//
// Specs are interned: one immutable instance per (kind, p, m, r), compared by
// pointer.  Rings with at most pack_cap elements additionally carry full
// add/mul tables, which the group engine relies on.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "chainrep/errors.hpp"
#include "chainrep/residue_field.hpp"

namespace chainrep {

enum class RingKind { mixed, equal };

using rcode_t = uint32_t;
constexpr int kMaxR = 30;

class RingSpec {
  public:
    RingKind kind;
    int p, m, r, q;
    long long card; // q^r
    const ResidueField* fq;

    static const RingSpec* get(RingKind kind, int p, int m, int r);
    static constexpr long long pack_cap = 1024;
    bool packed() const { return !add_tab_.empty(); }

    // digit access
    void digits_of(rcode_t code, fq_t* d) const {
        for (int i = 0; i < r; ++i) { d[i] = fq_t(code % q); code /= q; }
    }
    rcode_t encode(const fq_t* d) const {
        rcode_t code = 0;
        for (int i = r - 1; i >= 0; --i) code = rcode_t(code * q + d[i]);
        return code;
    }
    fq_t residue(rcode_t a) const { return fq_t(a % q); }
    fq_t digit(rcode_t a, int i) const { for (int k = 0; k < i; ++k) a /= q; return fq_t(a % q); }

    rcode_t zero() const { return 0; }
    rcode_t one() const { return 1; }
    rcode_t pi_pow(int k) const {
        if (k >= r) return 0;
        rcode_t c = 1;
        for (int i = 0; i < k; ++i) c *= rcode_t(q);
        return c;
    }
    rcode_t teich(fq_t c) const { return rcode_t(c); } // mu(c): digits (c, 0, ..., 0)

    rcode_t add(rcode_t a, rcode_t b) const {
        if (packed()) return add_tab_[size_t(a) * card + b];
        return add_generic(a, b);
    }
    rcode_t mul(rcode_t a, rcode_t b) const {
        if (packed()) return mul_tab_[size_t(a) * card + b];
        return mul_generic(a, b);
    }
    rcode_t neg(rcode_t a) const {
        if (packed()) return neg_tab_[a];
        return neg_generic(a);
    }
    rcode_t sub(rcode_t a, rcode_t b) const { return add(a, neg(b)); }
    bool is_unit(rcode_t a) const { return residue(a) != 0; }
    rcode_t inv(rcode_t a) const {
        if (packed()) {
            if (!is_unit(a)) throw NonUnitError("inverse of a non-unit");
            return inv_tab_[a];
        }
        return inv_generic(a);
    }
    int val(rcode_t a) const {
        if (a == 0) return r;
        int v = 0;
        while (a % q == 0) { a /= q; ++v; }
        return v;
    }
    // exact pi-adic shift: digits (a_k, ..., a_{r-1}, 0^k); satisfies
    // pi^k * shift_down(a, k) == a whenever val(a) >= k
    rcode_t shift_down(rcode_t a, int k) const {
        rcode_t w = 1;
        for (int i = 0; i < k; ++i) w *= rcode_t(q);
        return a / w;
    }
    rcode_t pow(rcode_t a, long long e) const {
        rcode_t acc = one(), base = a;
        if (e < 0) { base = inv(a); e = -e; }
        while (e) { if (e & 1) acc = mul(acc, base); base = mul(base, base); e >>= 1; }
        return acc;
    }

    // reduction rho_s and digit-preserving section mu_{r,s}
    rcode_t reduce_code(rcode_t a, const RingSpec* target) const {
        require_tower(target, /*down=*/true);
        rcode_t w = 1;
        for (int i = 0; i < target->r; ++i) w *= rcode_t(q);
        return a % w;
    }
    rcode_t section_code(rcode_t a, const RingSpec* target) const {
        require_tower(target, /*down=*/false);
        return a; // same digit encoding, higher precision
    }
    // unramified base change: same kind, p, r; residue degree divides
    rcode_t embed_code(rcode_t a, const RingSpec* ext) const {
        if (ext->kind != kind || ext->p != p || ext->r != r || ext->m % m != 0)
            throw SpecError("embed: not an unramified extension of this ring");
        const auto& etab = fq->embedding_into(ext->fq);
        fq_t d[kMaxR], e[kMaxR];
        digits_of(a, d);
        for (int i = 0; i < r; ++i) e[i] = etab[d[i]];
        return ext->encode(e);
    }

    // Frobenius ring automorphism (mixed kind): digitwise x -> x^p
    rcode_t frobenius(rcode_t a) const {
        if (kind != RingKind::mixed) throw SpecError("frobenius: mixed kind only");
        fq_t d[kMaxR];
        digits_of(a, d);
        for (int i = 0; i < r; ++i) d[i] = fq->frob(d[i]);
        return encode(d);
    }
    // Galois-ring trace to Z/p^r (mixed kind): sum of the m Frobenius powers.
    // Returns the integer value in [0, p^r); digits of the trace lie in F_p.
    long long galois_trace_int(rcode_t a) const {
        if (kind != RingKind::mixed) throw SpecError("galois_trace: mixed kind only");
        rcode_t t = a, x = a;
        for (int k = 1; k < m; ++k) {
            fq_t d[kMaxR];
            digits_of(x, d);
            for (int i = 0; i < r; ++i) d[i] = fq->frob(d[i]);
            x = encode(d);
            t = add(t, x);
        }
        // the trace is Frobenius fixed, hence a constant in polynomial form;
        // its value is that constant (Teichmueller digits of a constant are
        // nonconstant in general, so the digit vector is not read directly)
        std::vector<long long> poly = to_poly(t);
        for (int i = 1; i < m; ++i)
            if (poly[i] != 0) throw SpecError("galois trace not in the prime subring (internal)");
        return poly[0];
    }

    // integer conversion; for equal characteristic the base-p digits of v
    // become t-coefficients
    rcode_t from_int(long long v) const {
        if (kind == RingKind::mixed) {
            long long vv = v % pr_; if (vv < 0) vv += pr_;
            std::vector<long long> poly(m, 0);
            poly[0] = vv;
            return from_poly(poly);
        }
        long long vv = v;
        long long period = 1;
        for (int i = 0; i < r; ++i) period *= p;
        vv %= period; if (vv < 0) vv += period;
        fq_t d[kMaxR];
        for (int i = 0; i < r; ++i) { d[i] = fq_t(vv % p); vv /= p; }
        return encode(d);
    }

    int level_l() const { return (r + 1) / 2; }
    int level_lprime() const { return r / 2; }

    std::string describe() const;

    // mixed-kind polynomial form: coefficient vectors of length m mod p^r
    long long pr() const { return pr_; }
    std::vector<long long> to_poly(rcode_t a) const;
    rcode_t from_poly(std::vector<long long> poly) const;

  private:
    RingSpec(RingKind kind_, int p_, int m_, int r_);
    void require_tower(const RingSpec* t, bool down) const {
        bool ok = t->kind == kind && t->p == p && t->m == m &&
                  (down ? t->r <= r : t->r >= r);
        if (!ok) throw SpecError("reduction/section requires a tower over the same residue field");
    }
    rcode_t add_generic(rcode_t a, rcode_t b) const;
    rcode_t mul_generic(rcode_t a, rcode_t b) const;
    rcode_t neg_generic(rcode_t a) const;
    rcode_t inv_generic(rcode_t a) const;

    long long pr_ = 0;                                // p^r (mixed)
    std::vector<long long> modlift_;                  // monic modulus lift (mixed)
    std::vector<std::vector<long long>> teich_poly_;  // mu(c) in polynomial form (mixed)
    std::vector<uint16_t> add_tab_, mul_tab_, neg_tab_, inv_tab_;
};

inline std::vector<long long> RingSpec::to_poly(rcode_t a) const {
    if (kind != RingKind::mixed) throw SpecError("to_poly: mixed kind only");
    std::vector<long long> acc(m, 0);
    fq_t d[kMaxR];
    digits_of(a, d);
    long long pk = 1;
    for (int i = 0; i < r; ++i) {
        const auto& t = teich_poly_[d[i]];
        for (int j = 0; j < m; ++j) acc[j] = (acc[j] + t[j] % pr_ * pk) % pr_;
        pk *= p;
    }
    return acc;
}

inline rcode_t RingSpec::from_poly(std::vector<long long> poly) const {
    if (kind != RingKind::mixed) throw SpecError("from_poly: mixed kind only");
    for (auto& c : poly) { c %= pr_; if (c < 0) c += pr_; }
    fq_t d[kMaxR];
    long long prec = pr_;
    for (int i = 0; i < r; ++i) {
        long long idx = 0, w = 1;
        for (int j = 0; j < m; ++j) { idx += (poly[j] % p) * w; w *= p; }
        d[i] = fq_t(idx);
        const auto& t = teich_poly_[d[i]];
        for (int j = 0; j < m; ++j) {
            long long c = (poly[j] - t[j]) % prec;
            if (c < 0) c += prec;
            if (c % p != 0) throw SpecError("digit extraction misaligned (internal)");
            poly[j] = c / p;
        }
        prec /= p;
    }
    return encode(d);
}

inline rcode_t RingSpec::add_generic(rcode_t a, rcode_t b) const {
    if (kind == RingKind::equal) {
        fq_t da[kMaxR], db[kMaxR];
        digits_of(a, da);
        digits_of(b, db);
        for (int i = 0; i < r; ++i) da[i] = fq->add(da[i], db[i]);
        return encode(da);
    }
    auto pa = to_poly(a), pb = to_poly(b);
    for (int j = 0; j < m; ++j) pa[j] = (pa[j] + pb[j]) % pr_;
    return from_poly(pa);
}

inline rcode_t RingSpec::mul_generic(rcode_t a, rcode_t b) const {
    if (kind == RingKind::equal) {
        fq_t da[kMaxR], db[kMaxR], dc[kMaxR];
        digits_of(a, da);
        digits_of(b, db);
        for (int i = 0; i < r; ++i) {
            fq_t s = 0;
            for (int k = 0; k <= i; ++k) s = fq->add(s, fq->mul(da[k], db[i - k]));
            dc[i] = s;
        }
        return encode(dc);
    }
    auto pa = to_poly(a), pb = to_poly(b);
    std::vector<long long> prod(2 * m - 1, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % pr_;
    // reduce by the monic modulus lift
    for (int d = 2 * m - 2; d >= m; --d) {
        long long lead = prod[d] % pr_;
        if (lead == 0) continue;
        for (int j = 0; j <= m; ++j) {
            long long& c = prod[d - m + j];
            c = ((c - lead * modlift_[j]) % pr_ + pr_) % pr_;
        }
    }
    prod.resize(m);
    return from_poly(prod);
}

inline rcode_t RingSpec::neg_generic(rcode_t a) const {
    if (kind == RingKind::equal) {
        fq_t d[kMaxR];
        digits_of(a, d);
        for (int i = 0; i < r; ++i) d[i] = fq->neg(d[i]);
        return encode(d);
    }
    auto pa = to_poly(a);
    for (int j = 0; j < m; ++j) pa[j] = (pr_ - pa[j]) % pr_;
    return from_poly(pa);
}

inline rcode_t RingSpec::inv_generic(rcode_t a) const {
    if (!is_unit(a)) throw NonUnitError("inverse of a non-unit");
    // Newton lift of the residue inverse: x -> x(2 - ax) doubles precision
    rcode_t x = teich(fq->inv(residue(a)));
    int steps = 0;
    for (int prec = 1; prec < r; prec *= 2) ++steps;
    for (int i = 0; i < steps + 1; ++i) x = mul(x, sub(add(one(), one()), mul(a, x)));
    if (mul(a, x) != one()) throw SpecError("Newton inversion failed (internal)");
    return x;
}

inline RingSpec::RingSpec(RingKind kind_, int p_, int m_, int r_)
    : kind(kind_), p(p_), m(m_), r(r_) {
    if (r < 1 || r > kMaxR) throw SpecError("chain ring length out of range");
    fq = ResidueField::get(p, m);
    q = fq->q;
    card = 1;
    for (int i = 0; i < r; ++i) {
        card *= q;
        if (card > (1LL << 30)) throw BudgetExceededError(card, 1LL << 30);
    }
    if (kind == RingKind::mixed) {
        pr_ = 1;
        for (int i = 0; i < r; ++i) pr_ *= p;
        if (pr_ > (1LL << 30)) throw BudgetExceededError(pr_, 1LL << 30);
        modlift_.assign(fq->modulus.begin(), fq->modulus.end());
        // Teichmuller lifts: iterate x -> x^q from the coefficient lift to the
        // fixed point (gains at least one digit per step)
        teich_poly_.resize(q);
        auto poly_mul = [&](const std::vector<long long>& x, const std::vector<long long>& y) {
            std::vector<long long> prod(2 * m - 1, 0);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % pr_;
            for (int d = 2 * m - 2; d >= m; --d) {
                long long lead = prod[d] % pr_;
                if (lead == 0) continue;
                for (int j = 0; j <= m; ++j) {
                    long long& c = prod[d - m + j];
                    c = ((c - lead * modlift_[j]) % pr_ + pr_) % pr_;
                }
            }
            prod.resize(m);
            return prod;
        };
        auto poly_pow_q = [&](std::vector<long long> x) {
            std::vector<long long> acc(m, 0);
            acc[0] = 1;
            long long e = q;
            while (e) { if (e & 1) acc = poly_mul(acc, x); x = poly_mul(x, x); e >>= 1; }
            return acc;
        };
        for (int c = 0; c < q; ++c) {
            std::vector<long long> x(m, 0);
            for (int i = 0; i < m; ++i) x[i] = fq->coeff(fq_t(c), i);
            for (int it = 0; it < r + 2; ++it) {
                auto nx = poly_pow_q(x);
                if (nx == x) break;
                x = nx;
            }
            if (poly_pow_q(x) != x) throw SpecError("Teichmuller iteration did not converge (internal)");
            teich_poly_[c] = x;
        }
    }
    if (card <= pack_cap) {
        add_tab_.resize(size_t(card) * card);
        mul_tab_.resize(size_t(card) * card);
        neg_tab_.resize(card);
        inv_tab_.assign(card, 0);
        for (rcode_t a = 0; a < rcode_t(card); ++a) {
            neg_tab_[a] = uint16_t(neg_generic(a));
            for (rcode_t b = 0; b < rcode_t(card); ++b) {
                add_tab_[size_t(a) * card + b] = uint16_t(add_generic(a, b));
                mul_tab_[size_t(a) * card + b] = uint16_t(mul_generic(a, b));
            }
        }
        for (rcode_t a = 0; a < rcode_t(card); ++a)
            if (is_unit(a)) inv_tab_[a] = uint16_t(inv_generic(a));
    }
}

inline const RingSpec* RingSpec::get(RingKind kind, int p, int m, int r) {
    static std::map<std::tuple<int, int, int, int>, std::unique_ptr<RingSpec>> pool;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(int(kind), p, m, r);
    auto it = pool.find(key);
    if (it == pool.end())
        it = pool.emplace(key, std::unique_ptr<RingSpec>(new RingSpec(kind, p, m, r))).first;
    return it->second.get();
}

inline std::string RingSpec::describe() const {
    std::string k = kind == RingKind::mixed ? "mixed" : "equal";
    return k + "(p=" + std::to_string(p) + ",m=" + std::to_string(m) + ",r=" + std::to_string(r) + ")";
}

// splitting-extension constructor: residue degree d over the same (kind, p, r)
inline const RingSpec* unramified_extension(const RingSpec* base, int d) {
    return RingSpec::get(base->kind, base->p, base->m * d, base->r);
}

// Convenience element wrapper.  Perf-sensitive loops use RingSpec on raw codes.
struct RElem {
    const RingSpec* R = nullptr;
    rcode_t code = 0;
    RElem() = default;
    RElem(const RingSpec* R_, rcode_t c) : R(R_), code(c) {}
    friend RElem operator+(RElem a, RElem b) { return {a.R, a.R->add(a.code, b.code)}; }
    friend RElem operator-(RElem a, RElem b) { return {a.R, a.R->sub(a.code, b.code)}; }
    friend RElem operator*(RElem a, RElem b) { return {a.R, a.R->mul(a.code, b.code)}; }
    friend RElem operator-(RElem a) { return {a.R, a.R->neg(a.code)}; }
    friend bool operator==(RElem a, RElem b) { return a.R == b.R && a.code == b.code; }
    friend bool operator!=(RElem a, RElem b) { return !(a == b); }
    RElem inv() const { return {R, R->inv(code)}; }
    int val() const { return R->val(code); }
    bool is_unit() const { return R->is_unit(code); }
    bool is_zero() const { return code == 0; }
};

} // namespace chainrep
