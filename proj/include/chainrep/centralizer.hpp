#pragma once

// Commutant algebras C(A) = { X : AX = XA } over a chain ring, their centers,
// and the structural checks used by the stability theory: block splitting of
// the commutant of a lifted Jordan form, cardinality formulas, and
// surjectivity of reduction maps between levels.

#include <cstdint>
#include <vector>

#include "chainrep/chain_ring.hpp"
#include "chainrep/errors.hpp"
#include "chainrep/howell.hpp"
#include "chainrep/jordan.hpp"
#include "chainrep/matrix.hpp"

namespace chainrep {

inline RMat vec_to_mat(const RingSpec* R, int n, const RVec& v) {
    RMat m(R, n);
    m.e = v;
    return m;
}

// Howell form of { X : AX = XA } inside O_r^(n^2), row-major coordinates
inline HowellForm commutant_module(const RMat& A) {
    const RingSpec* R = A.R;
    int n = A.n;
    std::vector<RVec> rows(size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RMat E(R, n);
            E.at(i, j) = R->one();
            RMat im = mat_sub(mat_mul(A, E), mat_mul(E, A));
            rows[size_t(i) * n + j] = im.e;
        }
    return module_kernel(R, rows, n * n);
}

inline std::vector<RMat> module_generators(const HowellForm& H, int n) {
    std::vector<RMat> out;
    for (const auto& row : H.rows) out.push_back(vec_to_mat(H.R, n, row));
    return out;
}

// Howell form of the center Z(C(A)) = { X : AX = XA, GX = XG for all
// commutant generators G }
inline HowellForm center_of_commutant(const RMat& A) {
    const RingSpec* R = A.R;
    int n = A.n;
    HowellForm C = commutant_module(A);
    std::vector<RMat> gens = module_generators(C, n);
    std::vector<RMat> against;
    against.push_back(A);
    for (auto& g : gens) against.push_back(g);
    int d = int(against.size()) * n * n;
    std::vector<RVec> rows(size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RMat E(R, n);
            E.at(i, j) = R->one();
            RVec row;
            row.reserve(d);
            for (auto& Y : against) {
                RMat im = mat_sub(mat_mul(Y, E), mat_mul(E, Y));
                row.insert(row.end(), im.e.begin(), im.e.end());
            }
            rows[size_t(i) * n + j] = std::move(row);
        }
    return module_kernel(R, rows, d);
}

// all invertible elements of the commutant, i.e. the centralizer of A in
// GL_n(O_r); enumeration is guarded by the budget
inline std::vector<RMat> centralizer_units(const RMat& A, long long budget = 0) {
    HowellForm C = commutant_module(A);
    auto elems = howell_enumerate(C, budget);
    std::vector<RMat> out;
    for (auto& v : elems) {
        RMat m = vec_to_mat(A.R, A.n, v);
        if (mat_is_unit(m)) out.push_back(m);
    }
    return out;
}

// expected commutant size: log_q |C(A)| = r * sum over pairs of blocks with
// equal eigenvalue of min(size_i, size_j)
inline int commutant_log_card_formula(const JordanForm& jf) {
    int s = 0;
    for (auto& a : jf.blocks)
        for (auto& b : jf.blocks)
            if (a.eig == b.eig) s += std::min(a.size, b.size);
    return jf.ring_ext->r * s;
}

// expected center size: log_q |Z(C(A))| = r * sum over eigenvalues of the
// largest block size
inline int center_log_card_formula(const JordanForm& jf) {
    int s = 0;
    std::vector<fq_t> seen;
    for (auto& b : jf.blocks) {
        if (std::find(seen.begin(), seen.end(), b.eig) != seen.end()) continue;
        seen.push_back(b.eig);
        int mx = 0;
        for (auto& c : jf.blocks)
            if (c.eig == b.eig) mx = std::max(mx, c.size);
        s += mx;
    }
    return jf.ring_ext->r * s;
}

// the commutant of A = mu(J) splits along the primary (eigenvalue) blocks;
// verified by comparing canonical forms of both routes
inline bool check_centralsplit(const JordanForm& jf) {
    const RingSpec* E = jf.ring_ext;
    int n = jf.J.n;
    RMat A = mat_section(jf.J, E);
    HowellForm direct = commutant_module(A);

    // offsets of the primary components
    std::vector<std::pair<fq_t, std::pair<int, int>>> spans; // eig -> [start, end)
    {
        int pos = 0;
        for (auto& b : jf.blocks) {
            bool found = false;
            for (auto& s : spans)
                if (s.first == b.eig) {
                    if (s.second.second != pos)
                        throw EigenvalueCollisionError("primary components are not contiguous");
                    s.second.second = pos + b.size;
                    found = true;
                }
            if (!found) spans.push_back({b.eig, {pos, pos + b.size}});
            pos += b.size;
        }
    }
    std::vector<RVec> embedded;
    for (auto& [eig, span] : spans) {
        (void)eig;
        int s = span.first, w = span.second - span.first;
        RMat Ablk(E, w);
        for (int i = 0; i < w; ++i)
            for (int j = 0; j < w; ++j) Ablk.at(i, j) = A.at(s + i, s + j);
        HowellForm Cblk = commutant_module(Ablk);
        for (const auto& row : Cblk.rows) {
            RVec big(size_t(n) * n, 0);
            for (int i = 0; i < w; ++i)
                for (int j = 0; j < w; ++j) big[size_t(s + i) * n + (s + j)] = row[size_t(i) * w + j];
            embedded.push_back(std::move(big));
        }
    }
    HowellForm split = howell(E, embedded, n * n);
    return direct == split;
}

// is the reduction map C(M) -> C(M mod pi^s) surjective?  checked by testing
// every canonical generator of the level-s commutant for a lift
inline bool check_reduction_surjectivity(const RMat& M, int s) {
    const RingSpec* R = M.R;
    if (s <= 0 || s > R->r) throw SpecError("check_reduction_surjectivity: bad level");
    if (s == R->r) return true;
    const RingSpec* Rs = RingSpec::get(R->kind, R->p, R->m, s);
    int n = M.n;
    HowellForm Clow = commutant_module(mat_reduce(M, Rs));
    HowellForm Chigh = commutant_module(M);
    // module C(M) + pi^s M_n inside O_r^(n^2)
    std::vector<RVec> gens = Chigh.rows;
    for (int k = 0; k < n * n; ++k) {
        RVec v(size_t(n) * n, 0);
        v[k] = R->pi_pow(s);
        gens.push_back(std::move(v));
    }
    HowellForm target = howell(R, gens, n * n);
    for (const auto& row : Clow.rows) {
        RVec lift(row.size());
        for (size_t i = 0; i < row.size(); ++i) lift[i] = Rs->section_code(row[i], R);
        if (!howell_contains(target, lift)) return false;
    }
    return true;
}

} // namespace chainrep
