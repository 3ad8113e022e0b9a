#pragma once

// Concrete finite matrix groups over a chain ring: breadth-first closures,
// congruence kernels K^i = I + pi^i M_n(O), subgroup machinery (closure,
// commutators, Sylow subgroups, cosets), conjugacy classes, and quotients
// materialized as small multiplication tables.
//
// Elements are stored once and addressed by dense index; products are matrix
// products followed by a hash lookup.  This scales to the order-3^5 * 48
// groups the verification layer needs while staying exact.

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "chainrep/chain_ring.hpp"
#include "chainrep/errors.hpp"
#include "chainrep/matrix.hpp"

namespace chainrep {

struct CodeVecHash {
    size_t operator()(const std::vector<rcode_t>& v) const {
        uint64_t h = 1469598103934665603ULL;
        for (auto c : v) { h ^= c; h *= 1099511628211ULL; }
        return size_t(h);
    }
};

struct GroupTable {
    const RingSpec* R = nullptr;
    int n = 0;
    std::vector<RMat> elems; // elems[0] is the identity
    std::unordered_map<std::vector<rcode_t>, int, CodeVecHash> index;
    std::vector<int> genidx;
    mutable std::vector<int> invs; // lazy inverse cache, -1 when unknown

    long long order() const { return (long long)elems.size(); }

    int id(const RMat& m) const {
        auto it = index.find(m.e);
        return it == index.end() ? -1 : it->second;
    }
    bool contains(const RMat& m) const { return id(m) >= 0; }

    int mul(int a, int b) const {
        int r = id(mat_mul(elems[a], elems[b]));
        if (r < 0) throw SpecError("group table is not closed (internal)");
        return r;
    }
    int inv(int a) const {
        if (invs[a] < 0) {
            invs[a] = id(mat_inv(elems[a]));
            if (invs[a] < 0) throw SpecError("group table lacks an inverse (internal)");
        }
        return invs[a];
    }
    int conj(int g, int x) const { // g x g^{-1}
        RMat t = mat_mul(mat_mul(elems[g], elems[x]), elems[inv(g)]);
        int r = id(t);
        if (r < 0) throw SpecError("group table not closed under conjugation (internal)");
        return r;
    }

    void insert(const RMat& m) {
        if (index.emplace(m.e, (int)elems.size()).second) {
            elems.push_back(m);
            invs.push_back(-1);
        }
    }

    // breadth-first closure of a generating set
    static GroupTable closure(const RingSpec* R, int n, const std::vector<RMat>& gens,
                              long long budget = 0) {
        if (budget <= 0) budget = default_budget();
        GroupTable G;
        G.R = R;
        G.n = n;
        G.insert(RMat::identity(R, n));
        for (auto& g : gens) G.insert(g);
        for (auto& g : gens) {
            int gi = G.id(g);
            if (gi != 0) G.genidx.push_back(gi);
        }
        size_t head = 0;
        while (head < G.elems.size()) {
            RMat cur = G.elems[head++];
            for (auto& g : gens) {
                RMat t = mat_mul(cur, g);
                G.insert(t);
                if ((long long)G.elems.size() > budget)
                    throw BudgetExceededError("group closure", (long long)G.elems.size(), budget);
            }
        }
        return G;
    }

    // K^level = I + pi^level M_n(O_r), enumerated directly in odometer order
    static GroupTable congruence_kernel(const RingSpec* R, int n, int level,
                                        long long budget = 0) {
        if (level < 1 || level > R->r) throw SpecError("congruence kernel level out of range");
        if (budget <= 0) budget = default_budget();
        long long span = 1;
        for (int i = 0; i < R->r - level; ++i) span *= R->q;
        long long total = 1;
        for (int i = 0; i < n * n; ++i) {
            total *= span;
            check_budget(total, budget);
        }
        GroupTable G;
        G.R = R;
        G.n = n;
        std::vector<long long> odo(size_t(n) * n, 0);
        rcode_t shift = 1;
        for (int i = 0; i < level; ++i) shift *= rcode_t(R->q);
        for (long long it = 0; it < total; ++it) {
            RMat m = RMat::identity(R, n);
            for (int i = 0; i < n * n; ++i)
                m.e[i] = R->add(m.e[i], rcode_t(odo[i]) * shift);
            G.insert(m);
            int d = 0;
            while (d < n * n && ++odo[d] == span) odo[d++] = 0;
        }
        // generators: elementary congruence units, enough for conjugacy sweeps
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = level; k < R->r; ++k)
                    for (int t = 0; t < R->fq->m; ++t) {
                        long long pw = 1;
                        for (int s = 0; s < t; ++s) pw *= R->p;
                        RMat g = RMat::identity(R, n);
                        g.at(i, j) = R->add(g.at(i, j), R->mul(R->pi_pow(k), R->teich(fq_t(pw))));
                        int gi = G.id(g);
                        if (gi > 0) G.genidx.push_back(gi);
                    }
        return G;
    }

    static const GroupTable& general_linear(const RingSpec* R, int n, long long budget = 0);
};

inline const GroupTable& GroupTable::general_linear(const RingSpec* R, int n, long long budget) {
    static std::mutex mu;
    static std::map<std::pair<const RingSpec*, int>, GroupTable> pool;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(R, n);
    auto it = pool.find(key);
    if (it != pool.end()) return it->second;
    GroupTable G = closure(R, n, gl_generators(R, n), budget);
    return pool.emplace(key, std::move(G)).first->second;
}

// subgroup of a GroupTable: sorted element indices plus a membership mask
struct Subgroup {
    std::vector<int> elems;
    std::vector<uint8_t> mask;

    bool contains(int i) const { return mask[size_t(i)] != 0; }
    long long order() const { return (long long)elems.size(); }
};

inline Subgroup subgroup_closure(const GroupTable& G, const std::vector<int>& gens) {
    Subgroup S;
    S.mask.assign(G.elems.size(), 0);
    std::vector<int> frontier = {0};
    S.mask[0] = 1;
    for (int g : gens)
        if (!S.mask[size_t(g)]) { S.mask[size_t(g)] = 1; frontier.push_back(g); }
    std::vector<int> all = frontier;
    while (!frontier.empty()) {
        int cur = frontier.back();
        frontier.pop_back();
        for (int g : gens) {
            int t = G.mul(cur, g);
            if (!S.mask[size_t(t)]) {
                S.mask[size_t(t)] = 1;
                frontier.push_back(t);
                all.push_back(t);
            }
        }
    }
    std::sort(all.begin(), all.end());
    S.elems = std::move(all);
    return S;
}

inline Subgroup whole_group(const GroupTable& G) {
    Subgroup S;
    S.elems.resize(G.elems.size());
    for (size_t i = 0; i < G.elems.size(); ++i) S.elems[i] = (int)i;
    S.mask.assign(G.elems.size(), 1);
    return S;
}

// normal closure of the commutators of the group generators
inline Subgroup commutator_subgroup(const GroupTable& G) {
    std::vector<int> seeds;
    std::vector<int> gens = G.genidx;
    if (gens.empty())
        for (size_t i = 0; i < G.elems.size(); ++i) gens.push_back((int)i);
    for (int a : gens)
        for (int b : gens) {
            // [a, b] = a b a^{-1} b^{-1}
            int c = G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b)));
            seeds.push_back(c);
        }
    Subgroup S = subgroup_closure(G, seeds);
    // close under conjugation by group generators until normal
    for (;;) {
        std::vector<int> extra;
        for (int x : S.elems)
            for (int g : G.genidx) {
                int t = G.conj(g, x);
                if (!S.contains(t)) extra.push_back(t);
            }
        if (extra.empty()) break;
        std::vector<int> next = S.elems;
        next.insert(next.end(), extra.begin(), extra.end());
        S = subgroup_closure(G, next);
    }
    return S;
}

inline bool is_normal(const GroupTable& G, const Subgroup& S) {
    std::vector<int> gens = G.genidx;
    if (gens.empty())
        for (size_t i = 0; i < G.elems.size(); ++i) gens.push_back((int)i);
    for (int g : gens)
        for (int x : S.elems)
            if (!S.contains(G.conj(g, x))) return false;
    return true;
}

inline int element_order(const GroupTable& G, int x) {
    int ord = 1, cur = x;
    while (cur != 0) { cur = G.mul(cur, x); ++ord; }
    return ord;
}

// deterministic greedy Sylow p-subgroup: grow a p-subgroup by adjoining
// normalizing p-elements until the full p-part is reached
inline Subgroup sylow_subgroup(const GroupTable& G, int p) {
    long long order = G.order();
    long long ppart = 1;
    while (order % p == 0) { ppart *= p; order /= p; }
    Subgroup S = subgroup_closure(G, {});
    if (ppart == 1) return S;
    // collect p-elements once
    std::vector<int> pelems;
    for (size_t i = 1; i < G.elems.size(); ++i) {
        int o = element_order(G, (int)i);
        bool is_p = true;
        while (o > 1) { if (o % p != 0) { is_p = false; break; } o /= p; }
        if (is_p) pelems.push_back((int)i);
    }
    while (S.order() < ppart) {
        bool grew = false;
        for (int x : pelems) {
            if (S.contains(x)) continue;
            // x must normalize S for <S, x> to stay a p-group candidate
            bool normalizes = true;
            for (int s : S.elems)
                if (!S.contains(G.conj(x, s))) { normalizes = false; break; }
            if (!normalizes) continue;
            std::vector<int> gens = S.elems;
            gens.push_back(x);
            Subgroup T = subgroup_closure(G, gens);
            long long o = T.order(), t = o;
            while (t % p == 0) t /= p;
            if (t == 1 && o <= ppart) {
                S = std::move(T);
                grew = true;
                break;
            }
        }
        if (!grew) throw SpecError("sylow subgroup search stalled (internal)");
    }
    return S;
}

struct ConjClasses {
    std::vector<int> class_of;            // element index -> class number
    std::vector<std::vector<int>> members;
    std::vector<int> reps;                // least element index per class
};

inline ConjClasses conjugacy_classes(const GroupTable& G) {
    ConjClasses C;
    C.class_of.assign(G.elems.size(), -1);
    std::vector<int> gens = G.genidx;
    if (gens.empty())
        for (size_t i = 0; i < G.elems.size(); ++i) gens.push_back((int)i);
    for (size_t start = 0; start < G.elems.size(); ++start) {
        if (C.class_of[start] >= 0) continue;
        int cls = (int)C.reps.size();
        C.reps.push_back((int)start);
        C.members.emplace_back();
        std::vector<int> frontier = {(int)start};
        C.class_of[start] = cls;
        C.members[cls].push_back((int)start);
        while (!frontier.empty()) {
            int cur = frontier.back();
            frontier.pop_back();
            for (int g : gens) {
                int t = G.conj(g, cur);
                if (C.class_of[t] < 0) {
                    C.class_of[t] = cls;
                    C.members[cls].push_back(t);
                    frontier.push_back(t);
                }
            }
        }
    }
    return C;
}

inline Subgroup centralizer_in_group(const GroupTable& G, const RMat& M) {
    Subgroup S;
    S.mask.assign(G.elems.size(), 0);
    for (size_t i = 0; i < G.elems.size(); ++i)
        if (mat_mul(G.elems[i], M) == mat_mul(M, G.elems[i])) {
            S.mask[i] = 1;
            S.elems.push_back((int)i);
        }
    return S;
}

// left cosets gS; reps are the least element index in each coset
struct CosetDecomposition {
    std::vector<int> coset_of; // element index -> coset number
    std::vector<int> reps;
};

inline CosetDecomposition coset_decomposition(const GroupTable& G, const Subgroup& S) {
    CosetDecomposition D;
    D.coset_of.assign(G.elems.size(), -1);
    for (size_t i = 0; i < G.elems.size(); ++i) {
        if (D.coset_of[i] >= 0) continue;
        int c = (int)D.reps.size();
        D.reps.push_back((int)i);
        for (int s : S.elems) D.coset_of[size_t(G.mul((int)i, s))] = c;
        if (D.coset_of[i] != c) throw SpecError("coset marking failed (internal)");
    }
    return D;
}

// finite group as a dense multiplication table; the working representation
// for quotients and for character hunting on small groups
struct SmallGroup {
    int order = 0;
    std::vector<int> mul;  // order * order
    std::vector<int> inv;
    int at(int a, int b) const { return mul[size_t(a) * order + b]; }
};

inline SmallGroup small_group_from_subgroup(const GroupTable& G, const Subgroup& S) {
    SmallGroup g;
    g.order = (int)S.elems.size();
    std::vector<int> pos(G.elems.size(), -1);
    for (size_t i = 0; i < S.elems.size(); ++i) pos[size_t(S.elems[i])] = (int)i;
    g.mul.assign(size_t(g.order) * g.order, -1);
    g.inv.assign(g.order, -1);
    for (int a = 0; a < g.order; ++a) {
        for (int b = 0; b < g.order; ++b) {
            int t = G.mul(S.elems[a], S.elems[b]);
            if (pos[size_t(t)] < 0) throw SpecError("subgroup not closed (internal)");
            g.mul[size_t(a) * g.order + b] = pos[size_t(t)];
        }
        g.inv[a] = pos[size_t(G.inv(S.elems[a]))];
    }
    if (S.elems.empty() || S.elems[0] != 0)
        throw SpecError("subgroup must contain the identity at index 0");
    return g;
}

// quotient G / N as a SmallGroup together with the projection map
struct QuotientGroup {
    SmallGroup table;
    std::vector<int> proj; // element index in G -> coset number
    std::vector<int> reps; // coset number -> element index in G
};

inline QuotientGroup quotient_group(const GroupTable& G, const Subgroup& N) {
    if (!is_normal(G, N)) throw SpecError("quotient by a non-normal subgroup");
    CosetDecomposition D = coset_decomposition(G, N);
    QuotientGroup Q;
    Q.proj = D.coset_of;
    Q.reps = D.reps;
    int m = (int)D.reps.size();
    Q.table.order = m;
    Q.table.mul.assign(size_t(m) * m, -1);
    Q.table.inv.assign(m, -1);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b)
            Q.table.mul[size_t(a) * m + b] = D.coset_of[size_t(G.mul(D.reps[a], D.reps[b]))];
        Q.table.inv[a] = D.coset_of[size_t(G.inv(D.reps[a]))];
    }
    return Q;
}

} // namespace chainrep
