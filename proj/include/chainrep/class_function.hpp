#pragma once

// Exact character theory on two scales.
//
// SmallGroup side (orders up to a few hundred): conjugacy classes, duals of
// abelian groups by stepwise cyclic extension, linear characters through the
// abelianization, induction, and a pool-based search that recovers the full
// set of irreducible characters from inductions of linear characters plus
// tensor products.  All values are CycInt; inner products divide exactly.
//
// GroupTable side (orders up to a few hundred thousand): class functions
// stored per element, induction along coset representatives, inner products,
// and the one-dimensional extension machinery through the abelianization.

#include <optional>
#include <vector>

#include "chainrep/cyclotomic.hpp"
#include "chainrep/group.hpp"

namespace chainrep {

// ---------------------------------------------------------------- SmallGroup

struct SmallClasses {
    std::vector<int> class_of;
    std::vector<std::vector<int>> members;
    std::vector<int> reps;
};

inline SmallClasses small_conjugacy_classes(const SmallGroup& G) {
    SmallClasses C;
    C.class_of.assign(size_t(G.order), -1);
    for (int x = 0; x < G.order; ++x) {
        if (C.class_of[size_t(x)] >= 0) continue;
        int cls = (int)C.reps.size();
        C.reps.push_back(x);
        C.members.emplace_back();
        for (int g = 0; g < G.order; ++g) {
            int y = G.at(G.at(g, x), G.inv[size_t(g)]);
            if (C.class_of[size_t(y)] < 0) {
                C.class_of[size_t(y)] = cls;
                C.members[size_t(cls)].push_back(y);
            }
        }
    }
    return C;
}

inline int small_element_order(const SmallGroup& G, int x) {
    int ord = 1, cur = x;
    while (cur != 0) { cur = G.at(cur, x); ++ord; }
    return ord;
}

inline int small_exponent(const SmallGroup& G) {
    long long e = 1;
    for (int x = 0; x < G.order; ++x)
        e = std::lcm(e, (long long)small_element_order(G, x));
    return (int)e;
}

inline std::vector<int> small_subgroup_closure(const SmallGroup& G, std::vector<int> gens) {
    std::vector<uint8_t> in(size_t(G.order), 0);
    std::vector<int> frontier = {0};
    in[0] = 1;
    for (int g : gens)
        if (!in[size_t(g)]) { in[size_t(g)] = 1; frontier.push_back(g); }
    std::vector<int> all = frontier;
    while (!frontier.empty()) {
        int cur = frontier.back();
        frontier.pop_back();
        for (int g : gens) {
            int t = G.at(cur, g);
            if (!in[size_t(t)]) { in[size_t(t)] = 1; frontier.push_back(t); all.push_back(t); }
        }
    }
    std::sort(all.begin(), all.end());
    return all;
}

// reindexed multiplication table of a subgroup; pos maps parent -> local, -1 outside
inline SmallGroup small_subgroup_table(const SmallGroup& G, const std::vector<int>& elems,
                                       std::vector<int>* pos_out = nullptr) {
    std::vector<int> pos(size_t(G.order), -1);
    for (size_t i = 0; i < elems.size(); ++i) pos[size_t(elems[i])] = (int)i;
    if (elems.empty() || elems[0] != 0) throw SpecError("subgroup must be sorted with identity first");
    SmallGroup H;
    H.order = (int)elems.size();
    H.mul.assign(size_t(H.order) * H.order, -1);
    H.inv.assign(size_t(H.order), -1);
    for (int a = 0; a < H.order; ++a) {
        for (int b = 0; b < H.order; ++b) {
            int t = pos[size_t(G.at(elems[size_t(a)], elems[size_t(b)]))];
            if (t < 0) throw SpecError("subgroup list is not closed");
            H.mul[size_t(a) * H.order + b] = t;
        }
        H.inv[size_t(a)] = pos[size_t(G.inv[size_t(elems[size_t(a)])])];
    }
    if (pos_out) *pos_out = std::move(pos);
    return H;
}

inline std::vector<int> small_commutator_subgroup(const SmallGroup& G) {
    std::vector<int> seeds;
    for (int a = 0; a < G.order; ++a)
        for (int b = 0; b < G.order; ++b)
            seeds.push_back(G.at(G.at(a, b), G.at(G.inv[size_t(a)], G.inv[size_t(b)])));
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    // all commutators are present, so the closure is automatically normal
    return small_subgroup_closure(G, seeds);
}

struct SmallQuotient {
    SmallGroup table;
    std::vector<int> proj; // parent element -> coset
    std::vector<int> reps;
};

inline SmallQuotient small_quotient(const SmallGroup& G, const std::vector<int>& normal_elems) {
    std::vector<uint8_t> in(size_t(G.order), 0);
    for (int x : normal_elems) in[size_t(x)] = 1;
    for (int g = 0; g < G.order; ++g)
        for (int x : normal_elems)
            if (!in[size_t(G.at(G.at(g, x), G.inv[size_t(g)]))])
                throw SpecError("quotient by a non-normal subgroup");
    SmallQuotient Q;
    Q.proj.assign(size_t(G.order), -1);
    for (int g = 0; g < G.order; ++g) {
        if (Q.proj[size_t(g)] >= 0) continue;
        int c = (int)Q.reps.size();
        Q.reps.push_back(g);
        for (int x : normal_elems) Q.proj[size_t(G.at(g, x))] = c;
        if (Q.proj[size_t(g)] != c) throw SpecError("coset marking failed (internal)");
    }
    int m = (int)Q.reps.size();
    Q.table.order = m;
    Q.table.mul.assign(size_t(m) * m, -1);
    Q.table.inv.assign(size_t(m), -1);
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b)
            Q.table.mul[size_t(a) * m + b] = Q.proj[size_t(G.at(Q.reps[size_t(a)], Q.reps[size_t(b)]))];
        Q.table.inv[size_t(a)] = Q.proj[size_t(G.inv[size_t(Q.reps[size_t(a)])])];
    }
    return Q;
}

// ------------------------------------------------- linear characters (exact)

// a one-dimensional character as a phase per element
struct SmallLinear {
    std::vector<Phase> v;
};

// all characters of an abelian group, built by extending along a chain of
// cyclic steps; each step takes an exact k-th root of the known phase
inline std::vector<SmallLinear> abelian_dual(const SmallGroup& A) {
    for (int a = 0; a < A.order; ++a)
        for (int b = 0; b < A.order; ++b)
            if (A.at(a, b) != A.at(b, a)) throw SpecError("dual of a non-abelian group");
    std::vector<int> sub = {0};
    std::vector<uint8_t> in(size_t(A.order), 0);
    in[0] = 1;
    std::vector<std::vector<Phase>> chars(1, std::vector<Phase>(size_t(A.order)));
    chars[0][0] = Phase::of(0, 1);
    while ((int)sub.size() < A.order) {
        int x = -1;
        for (int g = 0; g < A.order; ++g)
            if (!in[size_t(g)]) { x = g; break; }
        int k = 1, cur = x;
        while (!in[size_t(cur)]) { cur = A.at(cur, x); ++k; }
        // cur = x^k is the first power landing in the current subgroup
        std::vector<std::vector<Phase>> next;
        std::vector<int> newsub;
        for (auto& chi : chars) {
            Phase base = chi[size_t(cur)];
            for (int i = 0; i < k; ++i) {
                Phase omega = Phase::of(base.num + (long long)i * base.den, base.den * k);
                std::vector<Phase> ext(size_t(A.order));
                int xp = 0; // x^j
                for (int j = 0; j < k; ++j) {
                    for (int s : sub) {
                        int e = A.at(s, xp);
                        ext[size_t(e)] = phase_add(chi[size_t(s)], phase_scale(omega, j));
                        if (next.empty() && i == 0) newsub.push_back(e);
                    }
                    xp = A.at(xp, x);
                }
                next.push_back(std::move(ext));
            }
        }
        chars = std::move(next);
        for (int e : newsub) in[size_t(e)] = 1;
        sub = std::move(newsub);
        std::sort(sub.begin(), sub.end());
    }
    std::vector<SmallLinear> out;
    for (auto& c : chars) out.push_back(SmallLinear{std::move(c)});
    return out;
}

// linear characters of any group, pulled back from the abelianization
inline std::vector<SmallLinear> small_linear_characters(const SmallGroup& G) {
    std::vector<int> comm = small_commutator_subgroup(G);
    SmallQuotient Q = small_quotient(G, comm);
    std::vector<SmallLinear> duals = abelian_dual(Q.table);
    std::vector<SmallLinear> out;
    for (auto& d : duals) {
        SmallLinear l;
        l.v.resize(size_t(G.order));
        for (int g = 0; g < G.order; ++g) l.v[size_t(g)] = d.v[size_t(Q.proj[size_t(g)])];
        out.push_back(std::move(l));
    }
    return out;
}

// ----------------------------------------------------- class function values

struct SmallChar {
    const CycDomain* D = nullptr;
    std::vector<CycInt> v; // one value per element

    static SmallChar zero(const CycDomain* D, int order) {
        SmallChar c;
        c.D = D;
        c.v.assign(size_t(order), CycInt(D));
        return c;
    }
    bool operator==(const SmallChar& o) const { return v == o.v; }
};

inline SmallChar linear_to_char(const SmallLinear& l, const CycDomain* D) {
    SmallChar c;
    c.D = D;
    c.v.reserve(l.v.size());
    for (auto& p : l.v) c.v.push_back(phase_to_cyc(p, D));
    return c;
}

inline SmallChar char_add(const SmallChar& a, const SmallChar& b) {
    SmallChar r = a;
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = cyc_add(r.v[i], b.v[i]);
    return r;
}
inline SmallChar char_sub(const SmallChar& a, const SmallChar& b) {
    SmallChar r = a;
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = cyc_sub(r.v[i], b.v[i]);
    return r;
}
inline SmallChar char_scale(const SmallChar& a, long long s) {
    SmallChar r = a;
    for (auto& x : r.v) x = cyc_scale(x, s);
    return r;
}
inline SmallChar char_mul(const SmallChar& a, const SmallChar& b) {
    SmallChar r = a;
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = cyc_mul(r.v[i], b.v[i]);
    return r;
}
inline bool char_is_zero(const SmallChar& a) {
    for (auto& x : a.v)
        if (!x.is_zero()) return false;
    return true;
}

// <a, b> = (1/|G|) sum a(g) conj(b(g)); exact, must be a rational integer
inline long long small_inner(const SmallGroup& G, const SmallChar& a, const SmallChar& b) {
    CycInt s(a.D);
    for (int g = 0; g < G.order; ++g) s = cyc_add(s, cyc_mul(a.v[size_t(g)], cyc_conj(b.v[size_t(g)])));
    return cyc_div_exact(s, G.order).integer_value();
}

// induction from a subgroup given by its sorted parent-index list
inline SmallChar small_induce(const SmallGroup& G, const std::vector<int>& H,
                              const std::vector<int>& pos, const SmallChar& chiH) {
    SmallChar r = SmallChar::zero(chiH.D, G.order);
    for (int g = 0; g < G.order; ++g) {
        CycInt s(chiH.D);
        for (int x = 0; x < G.order; ++x) {
            int y = G.at(G.at(x, g), G.inv[size_t(x)]);
            int p = pos[size_t(y)];
            if (p >= 0) s = cyc_add(s, chiH.v[size_t(p)]);
        }
        r.v[size_t(g)] = cyc_div_exact(s, (long long)H.size());
    }
    return r;
}

// -------------------------------------------------------------- irr hunting

// Recover all irreducible characters: seed with the linear characters, then
// reduce inductions of linear characters of one- and two-generated subgroups
// and tensor products of found characters until the class count is reached.
inline std::vector<SmallChar> small_irreducible_characters(const SmallGroup& G) {
    SmallClasses cls = small_conjugacy_classes(G);
    int target = (int)cls.reps.size();
    const CycDomain* D = CycDomain::get(small_exponent(G));

    std::vector<SmallChar> irr;
    auto has = [&](const SmallChar& c) {
        for (auto& k : irr)
            if (k == c) return true;
        return false;
    };
    auto admit = [&](SmallChar c) {
        // reduce against known irreducibles, then test for norm one
        for (auto& k : irr) {
            long long m = small_inner(G, c, k);
            if (m != 0) c = char_sub(c, char_scale(k, m));
        }
        if (char_is_zero(c)) return false;
        if (small_inner(G, c, c) != 1) return false;
        if (!c.v[0].is_integer()) throw SpecError("character degree is not an integer (internal)");
        if (c.v[0].integer_value() < 0) c = char_scale(c, -1);
        if (c.v[0].integer_value() <= 0) return false;
        if (!has(c)) { irr.push_back(std::move(c)); return true; }
        return false;
    };

    for (auto& l : small_linear_characters(G)) admit(linear_to_char(l, D));

    // candidate subgroups: generated by one or two elements, deduplicated
    std::vector<std::vector<int>> subs;
    auto add_sub = [&](std::vector<int> s) {
        if ((int)s.size() == G.order || (int)s.size() == 1) return;
        for (auto& t : subs)
            if (t == s) return;
        subs.push_back(std::move(s));
    };
    for (int a = 1; a < G.order; ++a) add_sub(small_subgroup_closure(G, {a}));
    size_t one_generated = subs.size();
    for (int pass = 0; pass < 3 && (int)irr.size() < target; ++pass) {
        // inductions of linear characters of the candidate subgroups
        for (auto& H : subs) {
            if ((int)irr.size() >= target) break;
            std::vector<int> pos;
            SmallGroup Ht = small_subgroup_table(G, H, &pos);
            for (auto& l : small_linear_characters(Ht))
                admit(small_induce(G, H, pos, linear_to_char(l, D)));
        }
        if ((int)irr.size() >= target) break;
        // tensor products of everything found so far
        size_t cur = irr.size();
        for (size_t i = 0; i < cur && (int)irr.size() < target; ++i)
            for (size_t j = i; j < cur && (int)irr.size() < target; ++j)
                admit(char_mul(irr[i], irr[j]));
        if ((int)irr.size() >= target) break;
        if (pass == 0 && subs.size() == one_generated) {
            // widen the subgroup family to two generators
            for (int a = 1; a < G.order; ++a)
                for (int b = a + 1; b < G.order; ++b)
                    add_sub(small_subgroup_closure(G, {a, b}));
        }
    }
    if ((int)irr.size() != target)
        throw SpecError("irreducible character search stalled");
    long long degsq = 0;
    for (auto& c : irr) degsq += c.v[0].integer_value() * c.v[0].integer_value();
    if (degsq != G.order) throw SpecError("character degrees do not sum to the group order (internal)");
    std::sort(irr.begin(), irr.end(), [](const SmallChar& a, const SmallChar& b) {
        if (a.v[0].integer_value() != b.v[0].integer_value())
            return a.v[0].integer_value() < b.v[0].integer_value();
        for (size_t i = 0; i < a.v.size(); ++i) {
            if (a.v[i].c != b.v[i].c) return a.v[i].c < b.v[i].c;
        }
        return false;
    });
    return irr;
}

// ---------------------------------------------------------- GroupTable side

// class function on a materialized matrix group, one value per element index
struct GroupChar {
    const CycDomain* D = nullptr;
    std::vector<CycInt> v;

    static GroupChar zero(const CycDomain* D, const GroupTable& G) {
        GroupChar c;
        c.D = D;
        c.v.assign(size_t(G.order()), CycInt(D));
        return c;
    }
};

inline GroupChar gchar_mul(const GroupChar& a, const GroupChar& b) {
    GroupChar r = a;
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = cyc_mul(r.v[i], b.v[i]);
    return r;
}
inline GroupChar gchar_sub(const GroupChar& a, const GroupChar& b) {
    GroupChar r = a;
    for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = cyc_sub(r.v[i], b.v[i]);
    return r;
}
inline GroupChar gchar_scale(const GroupChar& a, long long s) {
    GroupChar r = a;
    for (auto& x : r.v) x = cyc_scale(x, s);
    return r;
}
inline bool gchar_is_zero(const GroupChar& a) {
    for (auto& x : a.v)
        if (!x.is_zero()) return false;
    return true;
}

inline long long gchar_inner(const GroupTable& G, const GroupChar& a, const GroupChar& b) {
    CycInt s(a.D);
    for (size_t i = 0; i < a.v.size(); ++i) {
        if (a.v[i].is_zero() || b.v[i].is_zero()) continue;
        s = cyc_add(s, cyc_mul(a.v[i], cyc_conj(b.v[i])));
    }
    return cyc_div_exact(s, G.order()).integer_value();
}

// induction from a subgroup along explicit coset representatives
inline GroupChar gchar_induce(const GroupTable& G, const Subgroup& H,
                              const std::vector<int>& coset_reps, const GroupChar& chi) {
    GroupChar r = GroupChar::zero(chi.D, G);
    for (size_t x = 0; x < r.v.size(); ++x) {
        CycInt s(chi.D);
        bool nonzero = false;
        for (int t : coset_reps) {
            int y = G.mul(G.mul(G.inv(t), (int)x), t);
            if (H.contains(y)) {
                s = cyc_add(s, chi.v[size_t(y)]);
                nonzero = true;
            }
        }
        if (nonzero) r.v[x] = s;
    }
    return r;
}

// one-dimensional class functions as per-element phases
struct GroupLinear {
    std::vector<Phase> v;
};

// find a small generating set of a subgroup and materialize it as a table
inline GroupTable group_from_subgroup(const GroupTable& G, const Subgroup& S) {
    std::vector<RMat> gens;
    std::vector<int> genidx;
    Subgroup cur = subgroup_closure(G, {});
    for (int e : S.elems) {
        if (cur.contains(e)) continue;
        genidx.push_back(e);
        gens.push_back(G.elems[size_t(e)]);
        cur = subgroup_closure(G, genidx);
        if (cur.order() == S.order()) break;
    }
    if (cur.order() != S.order()) throw SpecError("subgroup generation failed (internal)");
    GroupTable T = GroupTable::closure(G.R, G.n, gens);
    if (T.order() != S.order()) throw SpecError("subgroup closure mismatch (internal)");
    return T;
}

// Extend a one-dimensional invariant character from a normal subgroup through
// the abelianization.  Returns nothing when the character is nontrivial on
// [G, G] cap N, which is exactly the obstruction.
inline std::optional<GroupLinear> extend_linear_character(
    const GroupTable& G, const Subgroup& N, const std::vector<Phase>& lambda_on_N) {
    Subgroup comm = commutator_subgroup(G);
    // obstruction test
    for (size_t i = 0; i < N.elems.size(); ++i)
        if (comm.contains(N.elems[i]) && !lambda_on_N[i].is_trivial()) return std::nullopt;
    QuotientGroup Q = quotient_group(G, comm);
    // image of N in the abelianization, with the descended character
    std::vector<int> nbar;
    std::vector<Phase> lbar(size_t(Q.table.order), Phase::of(0, 1));
    std::vector<uint8_t> seen(size_t(Q.table.order), 0);
    for (size_t i = 0; i < N.elems.size(); ++i) {
        int c = Q.proj[size_t(N.elems[i])];
        if (!seen[size_t(c)]) {
            seen[size_t(c)] = 1;
            nbar.push_back(c);
            lbar[size_t(c)] = lambda_on_N[i];
        } else if (!(lbar[size_t(c)] == lambda_on_N[i])) {
            return std::nullopt; // not constant on cosets: conjugation-twisted
        }
    }
    std::sort(nbar.begin(), nbar.end());
    // extend across the abelian quotient by cyclic steps
    std::vector<int> sub = nbar;
    std::vector<uint8_t> in(size_t(Q.table.order), 0);
    for (int x : sub) in[size_t(x)] = 1;
    std::vector<Phase> chi = lbar;
    while ((int)sub.size() < Q.table.order) {
        int x = -1;
        for (int g = 0; g < Q.table.order; ++g)
            if (!in[size_t(g)]) { x = g; break; }
        int k = 1, cur = x;
        while (!in[size_t(cur)]) { cur = Q.table.at(cur, x); ++k; }
        Phase base = chi[size_t(cur)];
        Phase omega = Phase::of(base.num, base.den * k); // canonical k-th root
        std::vector<int> newsub;
        int xp = 0;
        std::vector<Phase> next = chi;
        for (int j = 0; j < k; ++j) {
            for (int s : sub) {
                int e = Q.table.at(s, xp);
                next[size_t(e)] = phase_add(chi[size_t(s)], phase_scale(omega, j));
                newsub.push_back(e);
            }
            xp = Q.table.at(xp, x);
        }
        chi = std::move(next);
        sub = std::move(newsub);
        std::sort(sub.begin(), sub.end());
        for (int e : sub) in[size_t(e)] = 1;
    }
    GroupLinear out;
    out.v.resize(size_t(G.order()));
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = chi[size_t(Q.proj[i])];
    // the construction yields a homomorphism; verify the extension property
    for (size_t i = 0; i < N.elems.size(); ++i)
        if (!(out.v[size_t(N.elems[i])] == lambda_on_N[i]))
            throw SpecError("linear extension failed to restrict (internal)");
    return out;
}

} // namespace chainrep
