#pragma once

// The Heisenberg lift at odd level r = 2l - 1.
//
// K^{l'}/K^l is the additive group of g_1 = M_n(F_q); a matrix M over O_{l'}
// induces the alternating form B_M(x, y) = tr(Mbar(xy - yx)) on it.  psi_M
// extends from K^l to the preimage J_M of any maximal isotropic subspace by
// the explicit quadratic-corrected formula
//   psi_Mhat(I + pi^{l'} x) = psi(pi^{-l} tr(Mhat (x - 1/2 pi^{l'} x^2))),
// Mhat over O_l lifting M, odd p only.  Induction to K^{l'} yields the unique
// irreducible sigma above each extension; its stabilizer is computed by a
// coset sweep.

#include <vector>

#include "chainrep/characters.hpp"
#include "chainrep/class_function.hpp"
#include "chainrep/group.hpp"

namespace chainrep {

namespace detail {

// row-reduced spans over the residue field, for radical and isotropic work
struct FqSpan {
    const ResidueField* F = nullptr;
    int d = 0;
    std::vector<std::vector<fq_t>> rows; // reduced, pivot-normalized
    std::vector<int> pivots;

    FqSpan(const ResidueField* field, int dim) : F(field), d(dim) {}

    std::vector<fq_t> reduce(std::vector<fq_t> v) const {
        for (size_t i = 0; i < rows.size(); ++i) {
            fq_t c = v[size_t(pivots[i])];
            if (c == 0) continue;
            for (int j = 0; j < d; ++j) v[size_t(j)] = F->sub(v[size_t(j)], F->mul(c, rows[i][size_t(j)]));
        }
        return v;
    }
    bool contains(const std::vector<fq_t>& v) const {
        auto r = reduce(v);
        for (auto c : r)
            if (c != 0) return false;
        return true;
    }
    // returns false when v is already in the span
    bool add(const std::vector<fq_t>& v) {
        auto r = reduce(v);
        int p = -1;
        for (int j = 0; j < d; ++j)
            if (r[size_t(j)] != 0) { p = j; break; }
        if (p < 0) return false;
        fq_t inv = F->inv(r[size_t(p)]);
        for (int j = 0; j < d; ++j) r[size_t(j)] = F->mul(r[size_t(j)], inv);
        rows.push_back(std::move(r));
        pivots.push_back(p);
        return true;
    }
    int dim() const { return (int)rows.size(); }
};

// kernel basis of the linear map given by its rows
inline std::vector<std::vector<fq_t>> fq_kernel(const ResidueField* F,
                                                std::vector<std::vector<fq_t>> rows, int d) {
    std::vector<int> pivots;
    size_t rank = 0;
    for (int col = 0; col < d && rank < rows.size(); ++col) {
        size_t sel = rank;
        while (sel < rows.size() && rows[sel][size_t(col)] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        fq_t inv = F->inv(rows[rank][size_t(col)]);
        for (int j = 0; j < d; ++j) rows[rank][size_t(j)] = F->mul(rows[rank][size_t(j)], inv);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == rank) continue;
            fq_t c = rows[i][size_t(col)];
            if (c == 0) continue;
            for (int j = 0; j < d; ++j)
                rows[i][size_t(j)] = F->sub(rows[i][size_t(j)], F->mul(c, rows[rank][size_t(j)]));
        }
        pivots.push_back(col);
        ++rank;
    }
    std::vector<uint8_t> is_pivot(size_t(d), 0);
    for (int p : pivots) is_pivot[size_t(p)] = 1;
    std::vector<std::vector<fq_t>> kernel;
    for (int free = 0; free < d; ++free) {
        if (is_pivot[size_t(free)]) continue;
        std::vector<fq_t> v(size_t(d), 0);
        v[size_t(free)] = 1;
        for (size_t i = 0; i < rank; ++i)
            v[size_t(pivots[i])] = F->neg(rows[i][size_t(free)]);
        kernel.push_back(std::move(v));
    }
    return kernel;
}

} // namespace detail

// the Gram matrix of B_M on the standard basis E_{ij} of M_n(F_q)
struct AlternatingForm {
    const ResidueField* F = nullptr;
    int n = 0;
    int d = 0;                        // n^2
    std::vector<std::vector<fq_t>> gram;

    fq_t apply(const std::vector<fq_t>& x, const std::vector<fq_t>& y) const {
        fq_t acc = 0;
        for (int a = 0; a < d; ++a) {
            if (x[size_t(a)] == 0) continue;
            fq_t row = 0;
            for (int b = 0; b < d; ++b)
                if (y[size_t(b)] != 0) row = F->add(row, F->mul(gram[size_t(a)][size_t(b)], y[size_t(b)]));
            acc = F->add(acc, F->mul(x[size_t(a)], row));
        }
        return acc;
    }
};

inline AlternatingForm gram(const RMat& M) {
    const RingSpec* R1 = RingSpec::get(M.R->kind, M.R->p, M.R->fq->m, 1);
    RMat Mbar = mat_reduce(M, R1);
    int n = M.n, d = n * n;
    AlternatingForm B;
    B.F = M.R->fq;
    B.n = n;
    B.d = d;
    B.gram.assign(size_t(d), std::vector<fq_t>(size_t(d), 0));
    for (int a = 0; a < d; ++a) {
        RMat Ea = RMat::zero(R1, n);
        Ea.e[size_t(a)] = R1->one();
        for (int b = 0; b < d; ++b) {
            RMat Eb = RMat::zero(R1, n);
            Eb.e[size_t(b)] = R1->one();
            RMat c = mat_sub(mat_mul(Ea, Eb), mat_mul(Eb, Ea));
            B.gram[size_t(a)][size_t(b)] = fq_t(mat_trace(mat_mul(Mbar, c)));
        }
    }
    // alternating: B(x, x) = 0 on the basis and skew-symmetric overall
    for (int a = 0; a < d; ++a) {
        if (B.gram[size_t(a)][size_t(a)] != 0) throw SpecError("form is not alternating (internal)");
        for (int b = 0; b < d; ++b)
            if (B.F->add(B.gram[size_t(a)][size_t(b)], B.gram[size_t(b)][size_t(a)]) != 0)
                throw SpecError("form is not skew-symmetric (internal)");
    }
    return B;
}

struct IsotropicData {
    std::vector<std::vector<fq_t>> radical;   // basis of the radical
    std::vector<std::vector<fq_t>> isotropic; // basis of a maximal isotropic, contains the radical
};

// Choose a maximal isotropic subspace containing the radical.  When action
// operators are supplied (d x d matrices over F_q), the chosen subspace must
// be invariant under all of them; the search backtracks over extension
// choices and throws InvariantChoiceError when no invariant choice exists.
inline IsotropicData radical_and_isotropic(const AlternatingForm& B,
                                           const std::vector<std::vector<fq_t>>& action_ops = {}) {
    const ResidueField* F = B.F;
    int d = B.d;
    IsotropicData out;
    out.radical = detail::fq_kernel(F, B.gram, d);
    int rad = (int)out.radical.size();
    if ((d - rad) % 2 != 0) throw SpecError("alternating form has odd rank (internal)");
    int target = rad + (d - rad) / 2;

    long long total = 1;
    for (int i = 0; i < d; ++i) {
        total *= F->q;
        if (total > (1LL << 22)) throw BudgetExceededError("isotropic search", total, 1LL << 22);
    }

    std::vector<std::vector<fq_t>> all;
    for (long long code = 1; code < total; ++code) {
        std::vector<fq_t> v(size_t(d), 0);
        long long c = code;
        for (int i = 0; i < d; ++i) { v[size_t(i)] = fq_t(c % F->q); c /= F->q; }
        all.push_back(std::move(v));
    }

    std::vector<std::vector<fq_t>> chosen = out.radical;
    auto invariant = [&](const std::vector<std::vector<fq_t>>& basis) {
        detail::FqSpan span(F, d);
        for (auto& v : basis) span.add(v);
        for (auto& T : action_ops) {
            for (auto& v : basis) {
                std::vector<fq_t> w(size_t(d), 0);
                for (int a = 0; a < d; ++a) {
                    fq_t acc = 0;
                    for (int b = 0; b < d; ++b)
                        if (v[size_t(b)] != 0) acc = F->add(acc, F->mul(T[size_t(a) * d + b], v[size_t(b)]));
                    w[size_t(a)] = acc;
                }
                if (!span.contains(w)) return false;
            }
        }
        return true;
    };

    // depth-first over greedy extensions
    auto dfs = [&](auto&& self, std::vector<std::vector<fq_t>>& basis) -> bool {
        if ((int)basis.size() == target) return invariant(basis);
        detail::FqSpan span(F, d);
        for (auto& v : basis) span.add(v);
        for (auto& v : all) {
            if (span.contains(v)) continue;
            bool ok = true;
            for (auto& b : basis)
                if (B.apply(v, b) != 0) { ok = false; break; }
            if (!ok) continue;
            basis.push_back(v);
            if (self(self, basis)) return true;
            basis.pop_back();
        }
        return false;
    };
    if (!dfs(dfs, chosen)) throw InvariantChoiceError("no invariant maximal isotropic subspace");
    out.isotropic = std::move(chosen);
    return out;
}

// conjugation action of a unit residue matrix on g_1, as a d x d matrix
inline std::vector<fq_t> conjugation_operator(const RMat& gbar) {
    if (gbar.R->r != 1) throw SpecError("conjugation operator expects a residue matrix");
    int n = gbar.n, d = n * n;
    RMat ginv = mat_inv(gbar);
    std::vector<fq_t> T(size_t(d) * d, 0);
    for (int b = 0; b < d; ++b) {
        RMat Eb = RMat::zero(gbar.R, n);
        Eb.e[size_t(b)] = gbar.R->one();
        RMat img = mat_mul(mat_mul(gbar, Eb), ginv);
        for (int a = 0; a < d; ++a) T[size_t(a) * d + b] = fq_t(img.e[size_t(a)]);
    }
    return T;
}

// psi_Mhat on the preimage of an isotropic subspace; odd p, odd r = 2l - 1
struct LiftedCharacter {
    const RingSpec* R = nullptr;
    int n = 0;
    int level = 0; // l'
    RMat Mhat;     // over O_l
    RMat Mhatsec;  // lifted into O_r
    rcode_t half = 0;

    Phase eval(const RMat& k) const {
        RMat d = mat_sub(k, RMat::identity(R, n));
        if (mat_min_val(d) < level) throw SpecError("element is outside the congruence kernel");
        RMat x = mat_shift_down(d, level);
        RMat corr = mat_scale(half, mat_pi_scale(mat_mul(x, x), level));
        RMat arg = mat_sub(x, corr);
        rcode_t y = mat_trace(mat_mul(Mhatsec, arg));
        return AdditiveCharacter(R).at_shifted(y, R->r - level);
    }
};

inline LiftedCharacter lifted_char(const RingSpec* R, int n, const RMat& Mhat) {
    if (R->p == 2) throw SpecError("lifted character requires odd p: the formula divides by 2");
    if (R->r % 2 == 0) throw SpecError("lifted character lives at odd level r = 2l - 1");
    int l = R->level_l();
    const RingSpec* Sl = RingSpec::get(R->kind, R->p, R->fq->m, l);
    if (Mhat.R != Sl) throw SpecError("lifted character matrix must live over O_l");
    LiftedCharacter psi;
    psi.R = R;
    psi.n = n;
    psi.level = R->level_lprime();
    psi.Mhat = Mhat;
    psi.Mhatsec = mat_section(Mhat, R);
    psi.half = R->inv(R->from_int(2));
    return psi;
}

// restriction of the lifted character to K^l is the plain kernel character of
// M = Mhat mod pi^{l'}
inline KernelCharacter lifted_char_base(const LiftedCharacter& psi) {
    const RingSpec* Slp = RingSpec::get(psi.R->kind, psi.R->p, psi.R->fq->m, psi.level);
    return kernel_character(psi.R, psi.n, psi.R->level_l(), mat_reduce(psi.Mhat, Slp));
}

// elements of the kernel table whose image in g_1 lies in the given span
inline Subgroup kernel_subgroup_from_span(const GroupTable& K, int level,
                                          const std::vector<std::vector<fq_t>>& basis) {
    const RingSpec* R = K.R;
    int n = K.n, d = n * n;
    detail::FqSpan span(R->fq, d);
    for (auto& v : basis) span.add(v);
    Subgroup S;
    S.mask.assign(K.elems.size(), 0);
    for (size_t i = 0; i < K.elems.size(); ++i) {
        RMat diff = mat_sub(K.elems[i], RMat::identity(R, n));
        if (mat_min_val(diff) < level) throw SpecError("kernel table has an element below its level");
        RMat x = mat_shift_down(diff, level);
        std::vector<fq_t> v(size_t(d), 0);
        for (int a = 0; a < d; ++a) v[size_t(a)] = R->residue(x.e[size_t(a)]);
        if (span.contains(v)) {
            S.mask[i] = 1;
            S.elems.push_back((int)i);
        }
    }
    return S;
}

struct InducedSigma {
    const CycDomain* D = nullptr;
    long long degree = 0;      // [K^{l'} : J_M]
    std::vector<CycInt> values; // per element of the kernel table
};

inline InducedSigma induce_sigma(const GroupTable& K, const Subgroup& J,
                                 const LiftedCharacter& psi, const CycDomain* D) {
    CosetDecomposition cosets = coset_decomposition(K, J);
    InducedSigma sigma;
    sigma.D = D;
    sigma.degree = (long long)cosets.reps.size();
    sigma.values.assign(K.elems.size(), CycInt(D));
    for (size_t x = 0; x < K.elems.size(); ++x) {
        CycInt s(D);
        for (int t : cosets.reps) {
            int y = K.mul(K.mul(K.inv(t), (int)x), t);
            if (J.contains(y)) s = cyc_add(s, phase_to_cyc(psi.eval(K.elems[size_t(y)]), D));
        }
        sigma.values[x] = s;
    }
    return sigma;
}

// stabilizer of sigma in G by a coset sweep over K-cosets: sigma is a class
// function of K, so invariance is constant on each coset of K in G
inline Subgroup sigma_stabilizer(const GroupTable& G, const GroupTable& K,
                                 const InducedSigma& sigma) {
    Subgroup KS;
    KS.mask.assign(G.elems.size(), 0);
    for (auto& m : K.elems) {
        int i = G.id(m);
        if (i < 0) throw SpecError("kernel element missing from the ambient group");
        KS.mask[size_t(i)] = 1;
        KS.elems.push_back(i);
    }
    std::sort(KS.elems.begin(), KS.elems.end());
    CosetDecomposition D = coset_decomposition(G, KS);
    Subgroup S;
    S.mask.assign(G.elems.size(), 0);
    for (int rep : D.reps) {
        const RMat& t = G.elems[size_t(rep)];
        RMat tinv = mat_inv(t);
        bool fixes = true;
        for (size_t k = 0; k < K.elems.size() && fixes; ++k) {
            int img = K.id(mat_mul(mat_mul(t, K.elems[k]), tinv));
            if (img < 0) throw SpecError("kernel is not normal (internal)");
            if (!(sigma.values[size_t(img)] == sigma.values[k])) fixes = false;
        }
        if (!fixes) continue;
        for (size_t i = 0; i < G.elems.size(); ++i)
            if (D.coset_of[i] == D.coset_of[size_t(rep)]) {
                S.mask[i] = 1;
                S.elems.push_back((int)i);
            }
    }
    std::sort(S.elems.begin(), S.elems.end());
    return S;
}

} // namespace chainrep
