#pragma once

// Additive characters of the chain ring and the linear characters of the
// congruence kernels K^i = I + pi^i M_n(O) they parameterize.
//
// A primitive additive character psi is fixed once per ring:
//   mixed characteristic:  psi(a) = zeta_{p^r}^{T(a)} with T the Galois trace
//   equal characteristic:  psi(a) = zeta_p^{tr(top digit of a)}
// For i >= r/2 the kernel K^i is abelian and its characters are exactly
//   psi_M(I + pi^i x) = psi(pi^{i-r} tr(M x)),   M over O_{r-i}.
// The negative power of pi never materializes: the phase depends on tr(Mx)
// modulo pi^{r-i} only, which is where well-definedness comes from.

#include <vector>

#include "chainrep/cyclotomic.hpp"
#include "chainrep/group.hpp"
#include "chainrep/matrix.hpp"

namespace chainrep {

struct AdditiveCharacter {
    const RingSpec* R = nullptr;

    explicit AdditiveCharacter(const RingSpec* ring) : R(ring) {}

    // phase of psi(pi^{-s} y) for integral y; only y mod pi^s matters
    Phase at_shifted(rcode_t y, int s) const {
        if (s < 0 || s > R->r) throw SpecError("additive character shift out of range");
        if (s == 0) return Phase::of(0, 1);
        if (R->kind == RingKind::mixed) {
            long long t = R->galois_trace_int(y);
            long long ps = 1;
            for (int i = 0; i < s; ++i) ps *= R->p;
            return Phase::of(t % ps, ps);
        }
        // equal characteristic: the t^{-1} coefficient of t^{-s} y
        return Phase::of(R->fq->trace(R->digit(y, s - 1)), R->p);
    }

    Phase operator()(rcode_t a) const { return at_shifted(a, R->r); }

    // the cyclotomic order every psi value lives in
    int order() const {
        if (R->kind == RingKind::mixed) return (int)R->pr();
        return R->p;
    }
};

// psi_M on K^level; M lives over the quotient ring O_{r-level}
struct KernelCharacter {
    const RingSpec* R = nullptr; // ring of the ambient group, O_r
    int n = 0;
    int level = 0;
    RMat M;    // over O_{r-level}
    RMat Msec; // M lifted digitwise into O_r

    Phase eval(const RMat& k) const {
        RMat d = mat_sub(k, RMat::identity(R, n));
        if (mat_min_val(d) < level) throw SpecError("element is outside the congruence kernel");
        RMat x = mat_shift_down(d, level);
        rcode_t y = mat_trace(mat_mul(Msec, x));
        return AdditiveCharacter(R).at_shifted(y, R->r - level);
    }
};

inline KernelCharacter kernel_character(const RingSpec* R, int n, int level, const RMat& M) {
    if (2 * level < R->r) throw SpecError("kernel character level below r/2: K^i is not abelian");
    const RingSpec* S = RingSpec::get(R->kind, R->p, R->fq->m, R->r - level);
    if (M.R != S) throw SpecError("kernel character matrix must live over the quotient ring");
    KernelCharacter psi;
    psi.R = R;
    psi.n = n;
    psi.level = level;
    psi.M = M;
    psi.Msec = mat_section(M, R);
    return psi;
}

// psi_M composed with conjugation by g is psi with M conjugated at the
// quotient level: the dual action matching Irr(K^i) with g_{r-i}
inline KernelCharacter char_conjugate(const KernelCharacter& psi, const RMat& g) {
    RMat gq = mat_reduce(g, psi.M.R);
    RMat Mg = mat_mul(mat_mul(mat_inv(gq), psi.M), gq);
    return kernel_character(psi.R, psi.n, psi.level, Mg);
}

inline bool kernel_chars_equal(const KernelCharacter& a, const KernelCharacter& b) {
    return a.R == b.R && a.level == b.level && a.M == b.M;
}

// stabilizer of psi_M in a materialized group, by the commuting-image formula:
// G_r(psi_M) = rho_s^{-1}(C_{G_s}(M)) with s = r - level
inline Subgroup kernel_char_stabilizer_formula(const GroupTable& G, const KernelCharacter& psi) {
    Subgroup S;
    S.mask.assign(G.elems.size(), 0);
    for (size_t i = 0; i < G.elems.size(); ++i) {
        RMat gq = mat_reduce(G.elems[i], psi.M.R);
        if (mat_mul(gq, psi.M) == mat_mul(psi.M, gq)) {
            S.mask[i] = 1;
            S.elems.push_back((int)i);
        }
    }
    return S;
}

// the same stabilizer by direct conjugation scan: g fixes psi_M iff the
// conjugated character agrees on a generating set of the abelian kernel
inline Subgroup kernel_char_stabilizer_scan(const GroupTable& G, const GroupTable& K,
                                            const KernelCharacter& psi) {
    std::vector<RMat> kgens;
    for (int gi : K.genidx) kgens.push_back(K.elems[size_t(gi)]);
    Subgroup S;
    S.mask.assign(G.elems.size(), 0);
    for (size_t i = 0; i < G.elems.size(); ++i) {
        const RMat& g = G.elems[i];
        RMat ginv = mat_inv(g);
        bool fixes = true;
        for (auto& k : kgens) {
            if (!(psi.eval(mat_mul(mat_mul(g, k), ginv)) == psi.eval(k))) {
                fixes = false;
                break;
            }
        }
        if (fixes) {
            S.mask[i] = 1;
            S.elems.push_back((int)i);
        }
    }
    return S;
}

// K^i/K^j -> g_{j-i}: I + pi^i x maps to x mod pi^{j-i}; the bijection behind
// the Irr(K^i) parameterization
inline RMat kernel_quotient_image(const RingSpec* R, int n, int i, int j, const RMat& k) {
    if (!(0 < i && i <= j && j <= R->r)) throw SpecError("kernel quotient levels out of range");
    RMat d = mat_sub(k, RMat::identity(R, n));
    if (mat_min_val(d) < i) throw SpecError("element is outside the congruence kernel");
    const RingSpec* S = RingSpec::get(R->kind, R->p, R->fq->m, j - i);
    return mat_reduce(mat_shift_down(d, i), S);
}

} // namespace chainrep
