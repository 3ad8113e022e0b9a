#pragma once

// Finite residue fields F_q, q = p^m, with table arithmetic.
//
// Elements are indices in [0, q): index = sum c_i p^i encodes the coefficient
// vector (c_0, ..., c_{m-1}) of a polynomial over F_p reduced modulo the
// canonical modulus.  The modulus for (p, m) is the lexicographically least
// monic irreducible polynomial of degree m, ordered by the integer code
// sum a_i p^i of its non-leading coefficients.  Fields are interned: one
// immutable instance per (p, m), compared by pointer.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "chainrep/errors.hpp"

namespace chainrep {

using fq_t = uint16_t;

namespace detail {

// dense polynomials over F_p, coefficient vectors ascending, no leading zeros
inline std::vector<int> fp_poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

inline std::vector<int> fp_poly_mod(std::vector<int> a, const std::vector<int>& f, int p) {
    // f monic
    while (a.size() >= f.size()) {
        int lead = a.back();
        size_t shift = a.size() - f.size();
        if (lead != 0)
            for (size_t i = 0; i < f.size(); ++i)
                a[shift + i] = ((a[shift + i] - lead * f[i]) % p + p) % p;
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

inline bool fp_poly_divides(const std::vector<int>& d, const std::vector<int>& f, int p) {
    return fp_poly_mod(f, d, p).empty();
}

// all monic polynomials of degree deg, enumerated by ascending coefficient code
inline std::vector<int> monic_from_code(long long code, int deg, int p) {
    std::vector<int> f(deg + 1, 0);
    for (int i = 0; i < deg; ++i) { f[i] = int(code % p); code /= p; }
    f[deg] = 1;
    return f;
}

inline bool fp_poly_irreducible(const std::vector<int>& f, int p) {
    int deg = int(f.size()) - 1;
    if (deg <= 0) return false;
    if (f[0] == 0 && deg > 1) return false; // divisible by x
    for (int d = 1; 2 * d <= deg; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long c = 0; c < count; ++c) {
            auto g = monic_from_code(c, d, p);
            if (fp_poly_irreducible(g, p) && fp_poly_divides(g, f, p)) return false;
        }
    }
    return true;
}

inline std::vector<int> canonical_modulus(int p, int m) {
    long long count = 1;
    for (int i = 0; i < m; ++i) count *= p;
    for (long long c = 0; c < count; ++c) {
        auto f = monic_from_code(c, m, p);
        if (fp_poly_irreducible(f, p)) return f;
    }
    throw SpecError("no irreducible modulus found (unreachable)");
}

} // namespace detail

class ResidueField {
  public:
    int p, m;
    int q; // p^m
    std::vector<int> modulus; // length m+1, monic, coeffs in [0, p)

    static const ResidueField* get(int p, int m);

    fq_t add(fq_t a, fq_t b) const { return add_tab_[size_t(a) * q + b]; }
    fq_t sub(fq_t a, fq_t b) const { return add(a, neg_tab_[b]); }
    fq_t mul(fq_t a, fq_t b) const { return mul_tab_[size_t(a) * q + b]; }
    fq_t neg(fq_t a) const { return neg_tab_[a]; }
    fq_t inv(fq_t a) const {
        if (a == 0) throw NonUnitError("inverse of zero in F_q");
        return inv_tab_[a];
    }
    fq_t frob(fq_t a) const { return frob_tab_[a]; } // x -> x^p
    int trace(fq_t a) const { return trace_tab_[a]; } // absolute trace, in [0, p)
    fq_t pow(fq_t a, long long e) const {
        if (a == 0) return e == 0 ? fq_t(1) : fq_t(0);
        long long ord = q - 1;
        e %= ord; if (e < 0) e += ord;
        fq_t acc = 1, base = a;
        while (e) { if (e & 1) acc = mul(acc, base); base = mul(base, base); e >>= 1; }
        return acc;
    }

    // coefficient access: index <-> (c_0, ..., c_{m-1})
    int coeff(fq_t a, int i) const { int v = a; for (int k = 0; k < i; ++k) v /= p; return v % p; }
    fq_t from_coeffs(const std::vector<int>& c) const {
        long long idx = 0, w = 1;
        for (int i = 0; i < m; ++i) { int ci = i < int(c.size()) ? ((c[i] % p) + p) % p : 0; idx += ci * w; w *= p; }
        return fq_t(idx);
    }
    fq_t from_int(long long v) const { v %= p; if (v < 0) v += p; return fq_t(v); }

    // canonical embedding into an extension (same p, m | ext.m): sends the
    // modulus root to its least-index root in the extension
    const std::vector<fq_t>& embedding_into(const ResidueField* ext) const;
    // inverse lookup: ext index -> base index, or -1 when outside the image
    const std::vector<int>& embedding_preimage(const ResidueField* ext) const;

  private:
    ResidueField(int p_, int m_);
    std::vector<fq_t> add_tab_, mul_tab_, neg_tab_, inv_tab_, frob_tab_;
    std::vector<int> trace_tab_;
    mutable std::map<const ResidueField*, std::vector<fq_t>> embed_cache_;
    mutable std::map<const ResidueField*, std::vector<int>> preimage_cache_;
    mutable std::mutex cache_mu_;
};

inline ResidueField::ResidueField(int p_, int m_) : p(p_), m(m_) {
    if (p < 2 || m < 1) throw SpecError("residue field needs p >= 2, m >= 1");
    long long qq = 1;
    for (int i = 0; i < m; ++i) {
        qq *= p;
        if (qq > 4096) throw BudgetExceededError(qq, 4096);
    }
    q = int(qq);
    modulus = detail::canonical_modulus(p, m);

    auto coeffs_of = [&](int idx) {
        std::vector<int> c(m);
        for (int i = 0; i < m; ++i) { c[i] = idx % p; idx /= p; }
        return c;
    };
    auto index_of = [&](const std::vector<int>& c) {
        long long idx = 0, w = 1;
        for (int i = 0; i < m; ++i) { idx += (i < int(c.size()) ? c[i] : 0) * w; w *= p; }
        return fq_t(idx);
    };

    add_tab_.resize(size_t(q) * q);
    mul_tab_.resize(size_t(q) * q);
    neg_tab_.resize(q);
    for (int a = 0; a < q; ++a) {
        auto ca = coeffs_of(a);
        std::vector<int> cn(m);
        for (int i = 0; i < m; ++i) cn[i] = (p - ca[i]) % p;
        neg_tab_[a] = index_of(cn);
        for (int b = 0; b < q; ++b) {
            auto cb = coeffs_of(b);
            std::vector<int> cs(m);
            for (int i = 0; i < m; ++i) cs[i] = (ca[i] + cb[i]) % p;
            add_tab_[size_t(a) * q + b] = index_of(cs);
            auto prod = detail::fp_poly_mod(detail::fp_poly_mul(ca, cb, p), modulus, p);
            mul_tab_[size_t(a) * q + b] = index_of(prod);
        }
    }
    inv_tab_.assign(q, 0);
    for (int a = 1; a < q; ++a)
        for (int b = 1; b < q; ++b)
            if (mul_tab_[size_t(a) * q + b] == 1) { inv_tab_[a] = fq_t(b); break; }
    frob_tab_.resize(q);
    trace_tab_.resize(q);
    for (int a = 0; a < q; ++a) {
        fq_t r = 1, base = fq_t(a);
        int e = p;
        while (e) { if (e & 1) r = mul_tab_[size_t(r) * q + base]; base = mul_tab_[size_t(base) * q + base]; e >>= 1; }
        frob_tab_[a] = (a == 0) ? fq_t(0) : r;
    }
    for (int a = 0; a < q; ++a) {
        fq_t t = fq_t(a), x = fq_t(a);
        for (int k = 1; k < m; ++k) { x = frob_tab_[x]; t = add(t, x); }
        // absolute trace lies in F_p: index < p encodes the constant coefficient
        if (t >= fq_t(p)) throw SpecError("trace landed outside F_p (internal)");
        trace_tab_[a] = t;
    }
}

inline const ResidueField* ResidueField::get(int p, int m) {
    static std::map<std::pair<int, int>, std::unique_ptr<ResidueField>> pool;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, m);
    auto it = pool.find(key);
    if (it == pool.end())
        it = pool.emplace(key, std::unique_ptr<ResidueField>(new ResidueField(p, m))).first;
    return it->second.get();
}

inline const std::vector<fq_t>& ResidueField::embedding_into(const ResidueField* ext) const {
    std::lock_guard<std::mutex> lock(cache_mu_);
    auto it = embed_cache_.find(ext);
    if (it != embed_cache_.end()) return it->second;
    if (ext->p != p || ext->m % m != 0)
        throw SpecError("no embedding: extension degree mismatch");
    // least root of our modulus in ext
    int root = -1;
    for (int x = 0; x < ext->q; ++x) {
        fq_t acc = 0, pw = 1;
        for (int i = 0; i <= m; ++i) {
            acc = ext->add(acc, ext->mul(ext->from_int(modulus[i]), pw));
            pw = ext->mul(pw, fq_t(x));
        }
        if (acc == 0) { root = x; break; }
    }
    if (root < 0) throw SpecError("modulus has no root in extension (internal)");
    std::vector<fq_t> tab(q);
    for (int a = 0; a < q; ++a) {
        fq_t acc = 0, pw = 1;
        for (int i = 0; i < m; ++i) {
            acc = ext->add(acc, ext->mul(ext->from_int(coeff(fq_t(a), i)), pw));
            pw = ext->mul(pw, fq_t(root));
        }
        tab[a] = acc;
    }
    return embed_cache_.emplace(ext, std::move(tab)).first->second;
}

inline const std::vector<int>& ResidueField::embedding_preimage(const ResidueField* ext) const {
    {
        std::lock_guard<std::mutex> lock(cache_mu_);
        auto it = preimage_cache_.find(ext);
        if (it != preimage_cache_.end()) return it->second;
    }
    const auto& tab = embedding_into(ext);
    std::lock_guard<std::mutex> lock(cache_mu_);
    std::vector<int> pre(ext->q, -1);
    for (int a = 0; a < q; ++a) pre[tab[a]] = a;
    return preimage_cache_.emplace(ext, std::move(pre)).first->second;
}

} // namespace chainrep
