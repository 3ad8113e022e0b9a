#pragma once

// Square matrices over a chain ring O_r.  Entries are element codes, row
// major.  Determinants use the division-free Samuelson-Berkowitz recursion
// (valid over any commutative ring); inverses use Gauss-Jordan with unit
// pivoting, which succeeds exactly when the residue matrix is invertible.

#include <cstdint>
#include <functional>
#include <vector>

#include "chainrep/chain_ring.hpp"
#include "chainrep/errors.hpp"

namespace chainrep {

struct RMat {
    const RingSpec* R = nullptr;
    int n = 0;
    std::vector<rcode_t> e; // n*n codes, row major

    RMat() = default;
    RMat(const RingSpec* R_, int n_) : R(R_), n(n_), e(size_t(n_) * n_, 0) {}

    rcode_t& at(int i, int j) { return e[size_t(i) * n + j]; }
    rcode_t at(int i, int j) const { return e[size_t(i) * n + j]; }

    static RMat identity(const RingSpec* R, int n) {
        RMat m(R, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = R->one();
        return m;
    }
    static RMat zero(const RingSpec* R, int n) { return RMat(R, n); }
    static RMat scalar(const RingSpec* R, int n, rcode_t c) {
        RMat m(R, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = c;
        return m;
    }

    friend bool operator==(const RMat& a, const RMat& b) {
        return a.R == b.R && a.n == b.n && a.e == b.e;
    }
    friend bool operator!=(const RMat& a, const RMat& b) { return !(a == b); }
    // canonical element order: lexicographic on row-major digit codes
    friend bool operator<(const RMat& a, const RMat& b) { return a.e < b.e; }
};

inline RMat mat_add(const RMat& a, const RMat& b) {
    RMat c(a.R, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->add(a.e[i], b.e[i]);
    return c;
}

inline RMat mat_sub(const RMat& a, const RMat& b) {
    RMat c(a.R, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->sub(a.e[i], b.e[i]);
    return c;
}

inline RMat mat_neg(const RMat& a) {
    RMat c(a.R, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->neg(a.e[i]);
    return c;
}

inline RMat mat_mul(const RMat& a, const RMat& b) {
    const RingSpec* R = a.R;
    int n = a.n;
    RMat c(R, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rcode_t s = 0;
            for (int k = 0; k < n; ++k) s = R->add(s, R->mul(a.at(i, k), b.at(k, j)));
            c.at(i, j) = s;
        }
    return c;
}

inline RMat mat_scale(rcode_t c, const RMat& a) {
    RMat out(a.R, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) out.e[i] = a.R->mul(c, a.e[i]);
    return out;
}

inline rcode_t mat_trace(const RMat& a) {
    rcode_t s = 0;
    for (int i = 0; i < a.n; ++i) s = a.R->add(s, a.at(i, i));
    return s;
}

// characteristic polynomial of det(xI - A), coefficients ascending
// (c[0] = constant term, c[n] = 1), by the Samuelson-Berkowitz recursion
inline std::vector<rcode_t> mat_charpoly(const RMat& A) {
    const RingSpec* R = A.R;
    int n = A.n;
    // p_k holds coefficients of det(xI - A_k) descending from x^k
    std::vector<rcode_t> p = {R->one()};
    for (int k = 1; k <= n; ++k) {
        // first column of the (k+1) x k Toeplitz factor:
        // (1, -a, -RC, -RMC, -RM^2C, ...)
        rcode_t a = A.at(k - 1, k - 1);
        std::vector<rcode_t> col(k + 1, 0);
        col[0] = R->one();
        col[1] = R->neg(a);
        if (k >= 2) {
            std::vector<rcode_t> v(k - 1); // v = M^d C
            for (int i = 0; i < k - 1; ++i) v[i] = A.at(i, k - 1);
            for (int d = 2; d <= k; ++d) {
                rcode_t rc = 0;
                for (int i = 0; i < k - 1; ++i) rc = R->add(rc, R->mul(A.at(k - 1, i), v[i]));
                col[d] = R->neg(rc);
                if (d < k) {
                    std::vector<rcode_t> nv(k - 1, 0);
                    for (int i = 0; i < k - 1; ++i) {
                        rcode_t s = 0;
                        for (int j = 0; j < k - 1; ++j) s = R->add(s, R->mul(A.at(i, j), v[j]));
                        nv[i] = s;
                    }
                    v.swap(nv);
                }
            }
        }
        std::vector<rcode_t> np(k + 1, 0);
        for (int i = 0; i <= k; ++i)
            for (int j = 0; j < k && j <= i; ++j)
                if (i - j <= k) np[i] = R->add(np[i], R->mul(col[i - j], p[j]));
        p.swap(np);
    }
    // reverse to ascending order
    std::vector<rcode_t> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = p[n - i];
    return c;
}

inline rcode_t mat_det(const RMat& a) {
    const RingSpec* R = a.R;
    if (a.n == 0) return R->one();
    if (a.n == 1) return a.at(0, 0);
    if (a.n == 2)
        return R->sub(R->mul(a.at(0, 0), a.at(1, 1)), R->mul(a.at(0, 1), a.at(1, 0)));
    auto cp = mat_charpoly(a);
    // det(xI - A) at x = 0 is (-1)^n det A
    rcode_t c0 = cp[0];
    return (a.n % 2 == 0) ? c0 : R->neg(c0);
}

inline bool mat_is_unit(const RMat& a) {
    // invertible over a local ring iff the residue matrix is invertible
    const ResidueField* F = a.R->fq;
    int n = a.n;
    std::vector<fq_t> w(size_t(n) * n);
    for (int i = 0; i < n * n; ++i) w[i] = a.R->residue(a.e[i]);
    int rank = 0;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = rank; row < n; ++row)
            if (w[size_t(row) * n + col] != 0) { piv = row; break; }
        if (piv < 0) return false;
        for (int j = 0; j < n; ++j) std::swap(w[size_t(piv) * n + j], w[size_t(rank) * n + j]);
        fq_t iv = F->inv(w[size_t(rank) * n + col]);
        for (int j = 0; j < n; ++j) w[size_t(rank) * n + j] = F->mul(iv, w[size_t(rank) * n + j]);
        for (int row = 0; row < n; ++row) {
            if (row == rank) continue;
            fq_t f = w[size_t(row) * n + col];
            if (f == 0) continue;
            for (int j = 0; j < n; ++j)
                w[size_t(row) * n + j] = F->sub(w[size_t(row) * n + j], F->mul(f, w[size_t(rank) * n + j]));
        }
        ++rank;
    }
    return true;
}

inline RMat mat_inv(const RMat& a) {
    const RingSpec* R = a.R;
    int n = a.n;
    RMat w = a, inv = RMat::identity(R, n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (R->is_unit(w.at(row, col))) { piv = row; break; }
        if (piv < 0) throw NotInvertibleError("matrix is not invertible over the chain ring");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(w.at(piv, j), w.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        rcode_t s = R->inv(w.at(col, col));
        for (int j = 0; j < n; ++j) {
            w.at(col, j) = R->mul(s, w.at(col, j));
            inv.at(col, j) = R->mul(s, inv.at(col, j));
        }
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            rcode_t f = w.at(row, col);
            if (f == 0) continue;
            for (int j = 0; j < n; ++j) {
                w.at(row, j) = R->sub(w.at(row, j), R->mul(f, w.at(col, j)));
                inv.at(row, j) = R->sub(inv.at(row, j), R->mul(f, inv.at(col, j)));
            }
        }
    }
    return inv;
}

// g a g^{-1}
inline RMat mat_conj(const RMat& g, const RMat& a) { return mat_mul(mat_mul(g, a), mat_inv(g)); }

inline RMat mat_pow(const RMat& a, long long e) {
    RMat acc = RMat::identity(a.R, a.n), base = a;
    if (e < 0) { base = mat_inv(a); e = -e; }
    while (e) { if (e & 1) acc = mat_mul(acc, base); base = mat_mul(base, base); e >>= 1; }
    return acc;
}

inline RMat mat_reduce(const RMat& a, const RingSpec* target) {
    RMat c(target, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->reduce_code(a.e[i], target);
    return c;
}

inline RMat mat_section(const RMat& a, const RingSpec* target) {
    RMat c(target, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->section_code(a.e[i], target);
    return c;
}

inline RMat mat_embed(const RMat& a, const RingSpec* ext) {
    RMat c(ext, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->embed_code(a.e[i], ext);
    return c;
}

// pi^k * a
inline RMat mat_pi_scale(const RMat& a, int k) { return mat_scale(a.R->pi_pow(k), a); }

// digits k.. of every entry; pi^k * mat_shift_down(a, k) == a when all
// valuations are >= k
inline RMat mat_shift_down(const RMat& a, int k) {
    RMat c(a.R, a.n);
    for (size_t i = 0; i < a.e.size(); ++i) c.e[i] = a.R->shift_down(a.e[i], k);
    return c;
}

inline int mat_min_val(const RMat& a) {
    int v = a.R->r;
    for (auto c : a.e) v = std::min(v, a.R->val(c));
    return v;
}

struct RMatHash {
    size_t operator()(const RMat& m) const {
        uint64_t h = 1469598103934665603ULL;
        for (auto c : m.e) { h ^= c; h *= 1099511628211ULL; }
        return size_t(h);
    }
};

// a finite generating set of GL_n(O_r): transvections I + pi^k mu(x^j) E_ij
// span the elementary subgroup, and diagonal units diag(u, 1, ..., 1) with u
// running over Teichmueller and 1-unit generators cover the determinant
inline std::vector<RMat> gl_generators(const RingSpec* R, int n) {
    std::vector<RMat> gens;
    std::vector<rcode_t> addgens; // additive generators pi^k mu(x^j)
    for (int k = 0; k < R->r; ++k)
        for (int j = 0; j < R->fq->m; ++j) {
            long long pw = 1; // field code of the monomial x^j is p^j
            for (int t = 0; t < j; ++t) pw *= R->p;
            addgens.push_back(R->mul(R->pi_pow(k), R->teich(fq_t(pw))));
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            for (rcode_t t : addgens) {
                RMat m = RMat::identity(R, n);
                m.at(i, j) = t;
                gens.push_back(m);
            }
        }
    // Teichmueller part of the unit group: a multiplicative generator of F_q
    fq_t prim = 1;
    for (int g = 1; g < R->q; ++g) {
        int ord = 1;
        fq_t acc = fq_t(g);
        while (acc != 1) { acc = R->fq->mul(acc, fq_t(g)); ++ord; }
        if (ord == R->q - 1) { prim = fq_t(g); break; }
    }
    {
        RMat m = RMat::identity(R, n);
        m.at(0, 0) = R->teich(prim);
        gens.push_back(m);
    }
    // 1-units: 1 + pi^k mu(x^j) generate the principal unit filtration
    for (int k = 1; k < R->r; ++k)
        for (int j = 0; j < R->fq->m; ++j) {
            long long pw = 1;
            for (int t = 0; t < j; ++t) pw *= R->p;
            RMat m = RMat::identity(R, n);
            m.at(0, 0) = R->add(R->one(), R->mul(R->pi_pow(k), R->teich(fq_t(pw))));
            gens.push_back(m);
        }
    return gens;
}

} // namespace chainrep
