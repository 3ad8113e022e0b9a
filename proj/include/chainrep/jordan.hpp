#pragma once

// Residue Jordan form and its canonical lift.  The residue matrix is put in
// Jordan canonical form over the minimal unramified splitting extension; the
// lift conjugates the input so that it becomes mu(J) + pi * (correction),
// where mu is the Teichmueller multiplicative section applied entrywise.
//
// Canonical ordering: eigenvalues that lie in the base residue field come
// first (by field code), then the rest (by extension field code); within an
// eigenvalue, Jordan blocks are listed with sizes descending.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "chainrep/chain_ring.hpp"
#include "chainrep/errors.hpp"
#include "chainrep/howell.hpp"
#include "chainrep/matrix.hpp"

namespace chainrep {

namespace detail {

// --- monic polynomial arithmetic over a residue field, coeffs ascending ---

using FPoly = std::vector<fq_t>;

inline int fpoly_deg(const FPoly& f) {
    for (int i = (int)f.size() - 1; i >= 0; --i)
        if (f[i] != 0) return i;
    return -1;
}

inline fq_t fpoly_eval(const ResidueField* F, const FPoly& f, fq_t x) {
    fq_t acc = 0;
    for (int i = (int)f.size() - 1; i >= 0; --i) acc = F->add(F->mul(acc, x), f[i]);
    return acc;
}

// divide by a monic divisor; returns quotient, rem holds the remainder
inline FPoly fpoly_divmod(const ResidueField* F, FPoly f, const FPoly& g, FPoly& rem) {
    int dg = fpoly_deg(g);
    FPoly quo(f.size(), 0);
    for (int i = fpoly_deg(f); i >= dg; --i) {
        fq_t c = f[i];
        if (c == 0) continue;
        quo[i - dg] = c;
        for (int j = 0; j <= dg; ++j) f[i - dg + j] = F->sub(f[i - dg + j], F->mul(c, g[j]));
    }
    rem = f;
    return quo;
}

// monic irreducible factors with multiplicity, by trial division in order of
// (degree, coefficient code); valid because smaller factors are removed first
inline std::vector<std::pair<FPoly, int>> fpoly_factor_monic(const ResidueField* F, FPoly f) {
    std::vector<std::pair<FPoly, int>> out;
    int df = fpoly_deg(f);
    if (df <= 0) return out;
    for (int d = 1; d <= fpoly_deg(f); ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= F->q;
        for (long long code = 0; code < count && fpoly_deg(f) >= d; ++code) {
            FPoly g(d + 1, 0);
            long long c = code;
            for (int i = 0; i < d; ++i) { g[i] = fq_t(c % F->q); c /= F->q; }
            g[d] = 1;
            int mult = 0;
            for (;;) {
                FPoly rem;
                FPoly quo = fpoly_divmod(F, f, g, rem);
                if (fpoly_deg(rem) >= 0) break;
                f = quo;
                f.resize(fpoly_deg(f) + 1 < 1 ? 1 : fpoly_deg(f) + 1);
                ++mult;
            }
            if (mult > 0) out.emplace_back(g, mult);
        }
    }
    if (fpoly_deg(f) != 0) throw SpecError("fpoly_factor_monic: factorization incomplete");
    return out;
}

inline RMat rmat_transpose(const RMat& a) {
    RMat t(a.R, a.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

// column kernel { v : B v = 0 } as a Howell form (over r = 1 this is a RREF
// basis of the null space)
inline HowellForm column_kernel(const RMat& B) {
    RMat t = rmat_transpose(B);
    std::vector<RVec> rows(B.n);
    for (int i = 0; i < B.n; ++i)
        rows[i].assign(t.e.begin() + size_t(i) * B.n, t.e.begin() + size_t(i + 1) * B.n);
    return module_kernel(B.R, rows, B.n);
}

} // namespace detail

struct JordanBlock {
    fq_t eig;      // eigenvalue, as an element code of the splitting field
    bool in_base;  // true when the eigenvalue lies in the base residue field
    int size;
};

struct JordanForm {
    const RingSpec* ring_ext; // splitting extension, same nilpotency r
    const RingSpec* res_ext;  // its residue ring (r = 1)
    int split_degree = 1;
    std::vector<JordanBlock> blocks;
    RMat J; // Jordan form over res_ext
    RMat g; // over res_ext, invertible, with g J g^{-1} = residue(embed(M))
};

// Jordan form of the residue of M over the minimal splitting extension
inline JordanForm residue_jcf(const RMat& M) {
    const RingSpec* R = M.R;
    const RingSpec* R1 = RingSpec::get(R->kind, R->p, R->m, 1);
    const int n = M.n;
    RMat Mbar = mat_reduce(M, R1);

    // factor the residue characteristic polynomial over F_q
    auto cp = mat_charpoly(Mbar); // codes over r = 1 are field codes
    detail::FPoly cpoly(cp.begin(), cp.end());
    auto factors = detail::fpoly_factor_monic(R1->fq, cpoly);
    int d = 1;
    for (auto& [f, mult] : factors) d = std::lcm(d, detail::fpoly_deg(f));

    JordanForm out;
    out.split_degree = d;
    out.ring_ext = unramified_extension(R, d);
    out.res_ext = RingSpec::get(R->kind, R->p, R->m * d, 1);
    const ResidueField* FQ = out.res_ext->fq;
    const ResidueField* Fq = R1->fq;
    const auto& emb = Fq->embedding_into(FQ);

    // collect eigenvalues in canonical order
    std::vector<std::pair<fq_t, bool>> eigs; // (code in FQ, in_base)
    for (auto& [f, mult] : factors) {
        (void)mult;
        detail::FPoly fe(f.size());
        for (size_t i = 0; i < f.size(); ++i) fe[i] = emb[f[i]];
        for (int x = 0; x < FQ->q; ++x)
            if (detail::fpoly_eval(FQ, fe, fq_t(x)) == 0)
                eigs.emplace_back(fq_t(x), detail::fpoly_deg(f) == 1);
    }
    std::sort(eigs.begin(), eigs.end(), [](auto a, auto b) {
        if (a.second != b.second) return a.second; // base-field eigenvalues first
        return a.first < b.first;
    });

    RMat Me = mat_embed(Mbar, out.res_ext);

    // Jordan chains per eigenvalue
    std::vector<RVec> columns;
    for (auto [lam, in_base] : eigs) {
        RMat B = mat_sub(Me, RMat::scalar(out.res_ext, n, lam));
        // kernel filtration of powers of B
        std::vector<HowellForm> ker; // ker[k] = ker B^(k+1)
        RMat Bp = B;
        for (;;) {
            ker.push_back(detail::column_kernel(Bp));
            size_t k = ker.size();
            if (k >= 2 && ker[k - 1].rows.size() == ker[k - 2].rows.size()) { ker.pop_back(); break; }
            if ((int)ker.back().rows.size() == n) break;
            Bp = mat_mul(Bp, B);
        }
        int L = (int)ker.size(); // longest block size
        // chains[c] = head vector and length; emit columns B^{len-1}v .. v
        std::vector<std::pair<RVec, int>> chains;
        for (int k = L; k >= 1; --k) {
            // span U_{k-1} + { B^{len-k} head : existing chains with len >= k }
            std::vector<RVec> span_gens;
            if (k >= 2) span_gens = ker[k - 2].rows;
            for (auto& [head, len] : chains) {
                RVec w = head;
                for (int t = 0; t < len - k; ++t) {
                    RVec nw(n, 0);
                    for (int i = 0; i < n; ++i) {
                        rcode_t s = 0;
                        for (int j = 0; j < n; ++j)
                            s = out.res_ext->add(s, out.res_ext->mul(B.at(i, j), w[j]));
                        nw[i] = s;
                    }
                    w = nw;
                }
                span_gens.push_back(w);
            }
            HowellForm span = howell(out.res_ext, span_gens, n);
            for (const auto& cand : ker[k - 1].rows) {
                if (howell_contains(span, cand)) continue;
                chains.emplace_back(cand, k);
                span_gens.push_back(cand);
                span = howell(out.res_ext, span_gens, n);
            }
            if ((int)span.rows.size() != (int)ker[k - 1].rows.size())
                throw SpecError("residue_jcf: chain span mismatch");
        }
        // chains were found longest-first; record blocks and emit columns
        for (auto& [head, len] : chains) {
            out.blocks.push_back(JordanBlock{lam, in_base, len});
            std::vector<RVec> tail(len);
            tail[len - 1] = head;
            for (int t = len - 2; t >= 0; --t) {
                tail[t].assign(n, 0);
                for (int i = 0; i < n; ++i) {
                    rcode_t s = 0;
                    for (int j = 0; j < n; ++j)
                        s = out.res_ext->add(s, out.res_ext->mul(B.at(i, j), tail[t + 1][j]));
                    tail[t][i] = s;
                }
            }
            for (int t = 0; t < len; ++t) columns.push_back(tail[t]);
        }
    }
    if ((int)columns.size() != n) throw SpecError("residue_jcf: chain columns do not fill the space");

    out.J = RMat(out.res_ext, n);
    {
        int pos = 0;
        for (auto& b : out.blocks) {
            for (int t = 0; t < b.size; ++t) {
                out.J.at(pos + t, pos + t) = b.eig;
                if (t + 1 < b.size) out.J.at(pos + t, pos + t + 1) = out.res_ext->one();
            }
            pos += b.size;
        }
    }
    out.g = RMat(out.res_ext, n);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i) out.g.at(i, c) = columns[c][i];

    if (!mat_is_unit(out.g)) throw SpecError("residue_jcf: conjugator not invertible");
    if (mat_mul(Me, out.g) != mat_mul(out.g, out.J)) throw SpecError("residue_jcf: M g != g J");
    return out;
}

struct JCFLift {
    JordanForm jf;
    RMat g; // over ring_ext, a lift of jf.g
    RMat A; // mu(J) over ring_ext
    RMat B; // g^{-1} M g = A + pi B
};

inline JCFLift lift_jcf(const RMat& M) {
    JCFLift out;
    out.jf = residue_jcf(M);
    const RingSpec* E = out.jf.ring_ext;
    RMat Me = mat_embed(M, E);
    out.g = mat_section(out.jf.g, E); // digit-0 lift; any unit lift works
    out.A = mat_section(out.jf.J, E); // entries of J are Teichmueller liftable
    RMat conj = mat_mul(mat_mul(mat_inv(out.g), Me), out.g);
    RMat diff = mat_sub(conj, out.A);
    if (mat_min_val(diff) < 1) throw SpecError("lift_jcf: conjugate does not reduce to J");
    out.B = mat_shift_down(diff, 1);
    return out;
}

// distinct residue eigenvalues, in canonical order
inline std::vector<fq_t> distinct_eigenvalues(const JordanForm& jf) {
    std::vector<fq_t> out;
    for (auto& b : jf.blocks)
        if (std::find(out.begin(), out.end(), b.eig) == out.end()) out.push_back(b.eig);
    return out;
}

inline bool residue_diagonalizable(const JordanForm& jf) {
    for (auto& b : jf.blocks)
        if (b.size != 1) return false;
    return true;
}

// one Jordan block per eigenvalue, i.e. the residue matrix is cyclic
inline bool residue_regular(const JordanForm& jf) {
    std::vector<fq_t> seen;
    for (auto& b : jf.blocks) {
        if (std::find(seen.begin(), seen.end(), b.eig) != seen.end()) return false;
        seen.push_back(b.eig);
    }
    return true;
}

// M is semisimple iff the product of (M - mu(a)) over the distinct residue
// eigenvalues a vanishes; this is the exact chain-ring analogue of a
// squarefree minimal polynomial
inline bool is_semisimple(const RMat& M) {
    JordanForm jf = residue_jcf(M);
    const RingSpec* E = jf.ring_ext;
    RMat Me = mat_embed(M, E);
    RMat acc = RMat::identity(E, M.n);
    for (fq_t a : distinct_eigenvalues(jf)) {
        RMat lin = mat_sub(Me, RMat::scalar(E, M.n, E->teich(a)));
        acc = mat_mul(acc, lin);
    }
    return acc == RMat::zero(E, M.n);
}

} // namespace chainrep
