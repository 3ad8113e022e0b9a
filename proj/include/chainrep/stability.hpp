#pragma once

// Stability of a matrix over a chain ring.  M is stable when some conjugate
// of it equals mu(J) + pi * Z for a central element Z of the commutant of
// mu(J), i.e. the pi-adic correction to the Jordan lift can be pushed into
// the center.  Phase one tests the lift itself; phase two searches over all
// conjugators that fix the residue Jordan form (a complete set, since any
// aligner reduces to an element of the residue centralizer).

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "chainrep/centralizer.hpp"
#include "chainrep/chain_ring.hpp"
#include "chainrep/errors.hpp"
#include "chainrep/howell.hpp"
#include "chainrep/jordan.hpp"
#include "chainrep/matrix.hpp"

namespace chainrep {

enum class StabilityVerdict { stable, notStable, unknownBudget };

inline const char* to_string(StabilityVerdict v) {
    switch (v) {
        case StabilityVerdict::stable: return "stable";
        case StabilityVerdict::notStable: return "notStable";
        default: return "unknownBudget";
    }
}

struct StabilityCertificate {
    StabilityVerdict verdict = StabilityVerdict::unknownBudget;
    bool constructive = false; // decided by the lift alone, no search
    JCFLift lift;
    RMat aligner;              // h with h (g^{-1} M g) h^{-1} = A + pi * central
    long long searched = 0;    // distinct conjugates examined in phase two
};

inline StabilityCertificate is_stable(const RMat& M, long long budget = 0) {
    if (budget <= 0) budget = default_budget();
    StabilityCertificate cert;
    cert.lift = lift_jcf(M);
    const RingSpec* E = cert.lift.jf.ring_ext;
    const int n = M.n;
    RMat A = cert.lift.A;
    RMat Mp = mat_add(A, mat_pi_scale(cert.lift.B, 1)); // g^{-1} M g

    HowellForm Z = center_of_commutant(A);
    std::vector<RVec> piZgens;
    for (const auto& row : Z.rows) {
        RVec v(row.size());
        for (size_t i = 0; i < row.size(); ++i) v[i] = E->mul(E->pi_pow(1), row[i]);
        piZgens.push_back(std::move(v));
    }
    HowellForm piZ = howell(E, piZgens, n * n);

    cert.aligner = RMat::identity(E, n);
    if (howell_contains(piZ, mat_sub(Mp, A).e)) {
        cert.verdict = StabilityVerdict::stable;
        cert.constructive = true;
        return cert;
    }
    if (E->r == 1) { // over a field the lift is exact, handled above
        cert.verdict = StabilityVerdict::notStable;
        return cert;
    }

    // phase two: h ranges over lifts of the residue centralizer of J
    const RingSpec* E1 = cert.lift.jf.res_ext;
    std::vector<RMat> resC;
    try {
        resC = centralizer_units(mat_reduce(A, E1), budget);
    } catch (const BudgetExceededError&) {
        return cert; // unknownBudget
    }
    long long kcount = 1;
    for (int i = 0; i < (E->r - 1) * n * n; ++i) {
        if (kcount > budget / E->q) { kcount = budget + 1; break; }
        kcount *= E->q;
    }
    if (kcount > budget || (long long)resC.size() > budget / kcount) return cert; // unknownBudget

    long long span = 1;
    for (int i = 0; i < E->r - 1; ++i) span *= E->q;
    struct VecHash {
        size_t operator()(const std::vector<rcode_t>& v) const {
            uint64_t h = 1469598103934665603ULL;
            for (auto c : v) { h ^= c; h *= 1099511628211ULL; }
            return size_t(h);
        }
    };
    std::unordered_set<std::vector<rcode_t>, VecHash> seen;
    std::vector<long long> odo(size_t(n) * n, 0);
    for (const auto& hbar : resC) {
        RMat h0 = mat_section(hbar, E);
        std::fill(odo.begin(), odo.end(), 0);
        for (;;) {
            RMat N(E, n);
            for (int i = 0; i < n * n; ++i) N.e[i] = rcode_t(odo[i]) * rcode_t(E->q);
            RMat h = mat_mul(h0, mat_add(RMat::identity(E, n), N));
            RMat T = mat_conj(h, Mp);
            if (seen.insert(T.e).second) {
                ++cert.searched;
                if (howell_contains(piZ, mat_sub(T, A).e)) {
                    cert.verdict = StabilityVerdict::stable;
                    cert.aligner = h;
                    return cert;
                }
            }
            int d = 0;
            while (d < n * n && ++odo[d] == span) odo[d++] = 0;
            if (d == n * n) break;
        }
    }
    cert.verdict = StabilityVerdict::notStable;
    return cert;
}

// residue-diagonalizable and stable
inline bool is_strongly_semisimple(const RMat& M, long long budget = 0) {
    StabilityCertificate c = is_stable(M, budget);
    if (c.verdict == StabilityVerdict::unknownBudget)
        throw BudgetExceededError("strong semisimplicity search", c.searched, budget);
    return residue_diagonalizable(c.lift.jf) && c.verdict == StabilityVerdict::stable;
}

struct MatrixClassInfo {
    RMat rep;        // lexicographically least element of the class
    long long size = 0;
};

// conjugacy classes of M_n(O_r) under GL_n(O_r), by orbit sweep over the
// whole matrix space (guarded by the budget)
inline std::vector<MatrixClassInfo> matrix_conjugacy_classes(const RingSpec* R, int n,
                                                             long long budget = 0) {
    long long total = 1;
    for (int i = 0; i < n * n; ++i) {
        if (total > (long long)(1LL << 62) / R->card) throw BudgetExceededError("matrix space", -1, budget);
        total *= R->card;
    }
    check_budget(total, budget);
    std::vector<RMat> gens = gl_generators(R, n);
    std::vector<std::pair<RMat, RMat>> geninv;
    for (auto& g : gens) geninv.emplace_back(g, mat_inv(g));

    auto index_of = [&](const RMat& m) {
        long long idx = 0;
        for (int i = n * n - 1; i >= 0; --i) idx = idx * R->card + m.e[i];
        return idx;
    };
    auto matrix_at = [&](long long idx) {
        RMat m(R, n);
        for (int i = 0; i < n * n; ++i) { m.e[i] = rcode_t(idx % R->card); idx /= R->card; }
        return m;
    };

    std::vector<uint8_t> visited(size_t(total), 0);
    std::vector<MatrixClassInfo> out;
    for (long long start = 0; start < total; ++start) {
        if (visited[size_t(start)]) continue;
        // BFS orbit
        std::vector<long long> queue = {start};
        visited[size_t(start)] = 1;
        long long size = 0;
        long long least = start;
        while (!queue.empty()) {
            long long cur = queue.back();
            queue.pop_back();
            ++size;
            RMat m = matrix_at(cur);
            for (auto& [g, gi] : geninv) {
                RMat t = mat_mul(mat_mul(g, m), gi);
                long long ti = index_of(t);
                if (!visited[size_t(ti)]) {
                    visited[size_t(ti)] = 1;
                    if (ti < least) least = ti;
                    queue.push_back(ti);
                }
            }
        }
        out.push_back(MatrixClassInfo{matrix_at(least), size});
    }
    return out;
}

// classes whose representatives are stable; pairs each with its certificate.
// an undecided class is an error here, since callers rely on completeness
inline std::vector<std::pair<MatrixClassInfo, StabilityCertificate>>
stable_matrix_classes(const RingSpec* R, int n, long long budget = 0) {
    std::vector<std::pair<MatrixClassInfo, StabilityCertificate>> out;
    for (auto& cls : matrix_conjugacy_classes(R, n, budget)) {
        StabilityCertificate cert = is_stable(cls.rep, budget);
        if (cert.verdict == StabilityVerdict::unknownBudget)
            throw BudgetExceededError("stability sweep", cert.searched, budget);
        if (cert.verdict == StabilityVerdict::stable) out.emplace_back(cls, cert);
    }
    return out;
}

} // namespace chainrep
