#pragma once

// Canonical row-module arithmetic over a chain ring O_r.  A Howell form is
// the unique canonical generating matrix of a submodule of O_r^c: pivots sit
// in strictly increasing columns, each pivot is a pure power pi^v, entries
// above a pivot are reduced mod pi^v, and the form is closed under
// multiplying rows by pi (the Howell completeness property).  Equal modules
// produce byte-identical forms, so module comparison is vector comparison.

#include <cstdint>
#include <vector>

#include "chainrep/chain_ring.hpp"
#include "chainrep/errors.hpp"

namespace chainrep {

using RVec = std::vector<rcode_t>;

struct HowellForm {
    const RingSpec* R = nullptr;
    int cols = 0;
    std::vector<RVec> rows;
    std::vector<int> pivot_col;
    std::vector<int> pivot_val;

    // number of module elements is q^(sum of (r - v_i))
    int log_q_cardinality() const {
        int s = 0;
        for (int v : pivot_val) s += R->r - v;
        return s;
    }
    long long cardinality() const {
        int e = log_q_cardinality();
        long long c = 1;
        for (int i = 0; i < e; ++i) {
            if (c > (1LL << 62) / R->q) throw BudgetExceededError("module cardinality", c, 1LL << 62);
            c *= R->q;
        }
        return c;
    }

    friend bool operator==(const HowellForm& a, const HowellForm& b) {
        return a.R == b.R && a.cols == b.cols && a.rows == b.rows;
    }
};

namespace detail {

inline bool vec_is_zero(const RVec& v) {
    for (auto c : v) if (c != 0) return false;
    return true;
}

// x -= lam * row
inline void vec_submul(const RingSpec* R, RVec& x, rcode_t lam, const RVec& row) {
    for (size_t j = 0; j < x.size(); ++j) x[j] = R->sub(x[j], R->mul(lam, row[j]));
}

// greedy reduction of x by the form; returns the remainder
inline RVec howell_reduce(const HowellForm& H, RVec x) {
    const RingSpec* R = H.R;
    for (size_t i = 0; i < H.rows.size(); ++i) {
        int j = H.pivot_col[i], v = H.pivot_val[i];
        rcode_t b = x[j];
        if (b == 0) continue;
        if (R->val(b) < v) continue; // cannot clear; remainder keeps the digit
        vec_submul(R, x, R->shift_down(b, v), H.rows[i]);
    }
    return x;
}

} // namespace detail

// canonical form of the module generated by the given rows
inline HowellForm howell(const RingSpec* R, std::vector<RVec> gens, int cols) {
    for (auto& g : gens)
        if ((int)g.size() != cols) throw SpecError("howell: ragged generator rows");
    const int guard = (R->r + 2) * (cols + 2) + 8;
    for (int pass = 0; pass < guard; ++pass) {
        // echelon sweep with minimal-valuation pivoting
        std::vector<RVec> work = gens;
        HowellForm H;
        H.R = R;
        H.cols = cols;
        size_t active = 0;
        for (int col = 0; col < cols && active < work.size(); ++col) {
            size_t best = SIZE_MAX;
            int bestv = R->r;
            for (size_t i = active; i < work.size(); ++i) {
                int v = R->val(work[i][col]);
                if (v < bestv) { bestv = v; best = i; }
            }
            if (best == SIZE_MAX) continue;
            std::swap(work[active], work[best]);
            // normalize pivot to pi^v
            rcode_t u = R->shift_down(work[active][col], bestv); // unit part
            rcode_t ui = R->inv(u);
            for (auto& c : work[active]) c = R->mul(ui, c);
            for (size_t i = active + 1; i < work.size(); ++i) {
                rcode_t b = work[i][col];
                if (b == 0) continue;
                detail::vec_submul(R, work[i], R->shift_down(b, bestv), work[active]);
            }
            H.rows.push_back(work[active]);
            H.pivot_col.push_back(col);
            H.pivot_val.push_back(bestv);
            ++active;
        }
        // reduce entries above each pivot mod pi^v: subtracting
        // shift_down(b, v) * row turns the entry b into b mod pi^v
        for (size_t i = 0; i < H.rows.size(); ++i) {
            int j = H.pivot_col[i], v = H.pivot_val[i];
            for (size_t k = 0; k < i; ++k) {
                rcode_t lam = R->shift_down(H.rows[k][j], v);
                if (lam != 0) detail::vec_submul(R, H.rows[k], lam, H.rows[i]);
            }
        }
        // completeness: pi^(r-v) * row must reduce to zero within the form
        bool extended = false;
        for (size_t i = 0; i < H.rows.size() && !extended; ++i) {
            int v = H.pivot_val[i];
            if (v == 0) continue;
            RVec t = H.rows[i];
            rcode_t s = R->pi_pow(R->r - v);
            for (auto& c : t) c = R->mul(s, c);
            RVec rem = detail::howell_reduce(H, t);
            if (!detail::vec_is_zero(rem)) {
                gens = H.rows;
                gens.push_back(rem);
                extended = true;
            }
        }
        if (!extended) return H;
    }
    throw SpecError("howell: completion failed to stabilize");
}

inline bool howell_contains(const HowellForm& H, const RVec& x) {
    if ((int)x.size() != H.cols) throw SpecError("howell_contains: wrong vector length");
    return detail::vec_is_zero(detail::howell_reduce(H, x));
}

// right kernel of x -> x * B, where B is given by rows (c of them, width d);
// the result is the canonical form of { x in O_r^c : x B = 0 }
inline HowellForm module_kernel(const RingSpec* R, const std::vector<RVec>& rowsB, int d) {
    int c = (int)rowsB.size();
    std::vector<RVec> aug(c);
    for (int i = 0; i < c; ++i) {
        if ((int)rowsB[i].size() != d) throw SpecError("module_kernel: ragged rows");
        aug[i].assign(size_t(d) + c, 0);
        for (int j = 0; j < d; ++j) aug[i][j] = rowsB[i][j];
        aug[i][size_t(d) + i] = R->one();
    }
    HowellForm A = howell(R, aug, d + c);
    HowellForm K;
    K.R = R;
    K.cols = c;
    for (size_t i = 0; i < A.rows.size(); ++i) {
        if (A.pivot_col[i] < d) continue; // image part nonzero
        RVec tag(A.rows[i].begin() + d, A.rows[i].end());
        K.rows.push_back(std::move(tag));
        K.pivot_col.push_back(A.pivot_col[i] - d);
        K.pivot_val.push_back(A.pivot_val[i]);
    }
    return K;
}

// enumerate all module elements (guarded; intended for small modules)
inline std::vector<RVec> howell_enumerate(const HowellForm& H, long long budget = 0) {
    long long card = H.cardinality();
    check_budget(card, budget);
    const RingSpec* R = H.R;
    std::vector<RVec> out;
    out.reserve(size_t(card));
    out.emplace_back(H.cols, 0);
    for (size_t i = 0; i < H.rows.size(); ++i) {
        int v = H.pivot_val[i];
        long long span = 1;
        for (int k = 0; k < R->r - v; ++k) span *= R->q;
        size_t base = out.size();
        std::vector<RVec> next;
        next.reserve(base * size_t(span));
        for (long long lam = 0; lam < span; ++lam) {
            // lam runs over digit codes of length r - v
            rcode_t lc = rcode_t(lam);
            for (const auto& prev : out) {
                RVec x = prev;
                for (int j = 0; j < H.cols; ++j)
                    x[j] = R->add(x[j], R->mul(lc, H.rows[i][j]));
                next.push_back(std::move(x));
            }
        }
        out.swap(next);
    }
    return out;
}

} // namespace chainrep
