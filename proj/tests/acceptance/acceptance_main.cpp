// Acceptance gate: one binary, one pass/fail line per criterion.
//
// Each criterion pins its oracle values in code; a FAIL line plus a nonzero
// exit means the corresponding guarantee is broken. Run with --criterion N
// for a single criterion or with no arguments for all eight.

#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chainrep/verify.hpp"

using namespace chainrep;

namespace {

bool row_passes(const VerificationReport& r, const std::string& name,
                const std::string& expected) {
    for (const CheckResult& c : r.checks)
        if (c.name == name) return c.pass && c.expected == expected;
    return false;
}

bool note_contains(const VerificationReport& r, const std::string& s) {
    for (const std::string& n : r.notes)
        if (n.find(s) != std::string::npos) return true;
    return false;
}

void dump_report(const VerificationReport& r) {
    std::fprintf(stderr, "== %s | %s ==\n", r.suite.c_str(), r.instance.c_str());
    for (const CheckResult& c : r.checks)
        std::fprintf(stderr, "  [%s] %s: expected %s observed %s\n", c.pass ? "ok" : "FAIL",
                     c.name.c_str(), c.expected.c_str(), c.observed.c_str());
    for (const std::string& n : r.notes) std::fprintf(stderr, "  note: %s\n", n.c_str());
}

long long llpow(long long b, int e) {
    long long acc = 1;
    for (int i = 0; i < e; ++i) acc *= b;
    return acc;
}

const std::vector<std::vector<int>> kPartitions = {{1}, {2}, {1, 1}, {3}, {2, 1}, {1, 1, 1}};

std::vector<const RingSpec*> small_rings() {
    return {RingSpec::get(RingKind::mixed, 2, 1, 2), RingSpec::get(RingKind::mixed, 3, 1, 2),
            RingSpec::get(RingKind::equal, 2, 1, 2)};
}

RMat jordan_sum(const RingSpec* R, const std::vector<int>& parts) {
    int n = 0;
    for (int k : parts) n += k;
    RMat J = RMat::zero(R, n);
    int off = 0;
    for (int k : parts) {
        for (int i = 0; i + 1 < k; ++i) J.at(off + i, off + i + 1) = R->one();
        off += k;
    }
    return J;
}

int min_sum(const std::vector<int>& parts) {
    int s = 0;
    for (int a : parts)
        for (int b : parts) s += std::min(a, b);
    return s;
}

// brute-force count of X with XJ = JX. J is a nilpotent Jordan sum, so both
// products are entry relocations: (XJ)_{ij} = X_{i,src(j)} and
// (JX)_{ij} = X_{dst(i),j}; the scan walks all q^(r n^2) matrices with an
// odometer and compares entries directly
long long brute_commutant_count(const RingSpec* R, const RMat& J) {
    int n = J.n;
    std::vector<int> src(size_t(n), -1), dst(size_t(n), -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (J.at(i, j) == R->one()) {
                src[size_t(j)] = i;
                dst[size_t(i)] = j;
            }
    std::vector<rcode_t> X(size_t(n) * n, 0);
    long long count = 0;
    while (true) {
        bool comm = true;
        for (int i = 0; i < n && comm; ++i)
            for (int j = 0; j < n && comm; ++j) {
                rcode_t lhs = src[size_t(j)] >= 0 ? X[size_t(i) * n + size_t(src[size_t(j)])] : 0;
                rcode_t rhs = dst[size_t(i)] >= 0 ? X[size_t(dst[size_t(i)]) * n + size_t(j)] : 0;
                if (lhs != rhs) comm = false;
            }
        if (comm) ++count;
        size_t k = 0;
        while (k < X.size() && ++X[k] == (rcode_t)R->card) {
            X[k] = 0;
            ++k;
        }
        if (k == X.size()) break;
    }
    return count;
}

bool criterion1() {
    long long instances = 0;
    for (const RingSpec* R : small_rings())
        for (const auto& parts : kPartitions) {
            RMat J = jordan_sum(R, parts);
            long long expect = llpow(R->q, R->r * min_sum(parts));
            int logq = commutant_module(J).log_q_cardinality();
            if (logq != R->r * min_sum(parts)) return false;
            if (brute_commutant_count(R, J) != expect) return false;
            ++instances;
        }
    std::printf("criterion 1: PASS - commutant cardinality q^(r*sum min(ni,nj)) matches the "
                "solved module and the brute-force count on %lld instances\n",
                instances);
    return true;
}

bool mats_commute(const RingSpec* R, const std::vector<rcode_t>& X, const RMat& g) {
    int n = g.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rcode_t lhs = 0, rhs = 0;
            for (int k = 0; k < n; ++k) {
                lhs = R->add(lhs, R->mul(X[size_t(i) * n + size_t(k)], g.at(k, j)));
                rhs = R->add(rhs, R->mul(g.at(i, k), X[size_t(k) * n + size_t(j)]));
            }
            if (lhs != rhs) return false;
        }
    return true;
}

bool criterion2() {
    long long instances = 0;
    for (const RingSpec* R : small_rings())
        for (const auto& parts : kPartitions) {
            RMat J = jordan_sum(R, parts);
            int n = J.n;
            std::vector<RMat> gens = module_generators(commutant_module(J), n);

            // brute force: every matrix commuting with all commutant generators
            std::set<std::vector<rcode_t>> brute;
            std::vector<rcode_t> X(size_t(n) * n, 0);
            while (true) {
                bool central = true;
                for (const RMat& g : gens)
                    if (!mats_commute(R, X, g)) {
                        central = false;
                        break;
                    }
                if (central) brute.insert(X);
                size_t k = 0;
                while (k < X.size() && ++X[k] == (rcode_t)R->card) {
                    X[k] = 0;
                    ++k;
                }
                if (k == X.size()) break;
            }

            // solved route: enumerate the span of the Howell center basis
            HowellForm Z = center_of_commutant(J);
            std::set<std::vector<rcode_t>> solved;
            std::vector<rcode_t> coef(Z.rows.size(), 0);
            while (true) {
                std::vector<rcode_t> v(size_t(n) * n, 0);
                for (size_t t = 0; t < Z.rows.size(); ++t)
                    for (size_t e = 0; e < v.size(); ++e)
                        v[e] = R->add(v[e], R->mul(coef[t], Z.rows[t][e]));
                solved.insert(v);
                size_t k = 0;
                while (k < coef.size() && ++coef[k] == (rcode_t)R->card) {
                    coef[k] = 0;
                    ++k;
                }
                if (k == coef.size()) break;
            }

            int nmax = *std::max_element(parts.begin(), parts.end());
            if (brute != solved) return false;
            if ((long long)brute.size() != llpow(R->q, R->r * nmax)) return false;
            ++instances;
        }
    std::printf("criterion 2: PASS - center of the commutant matches brute force exactly and "
                "has cardinality q^(r*max ni) on %lld instances\n",
                instances);
    return true;
}

bool criterion3() {
    VerificationReport even = verify_det_lemma(RingSpec::get(RingKind::mixed, 2, 1, 2), 2);
    VerificationReport odd = verify_det_lemma(RingSpec::get(RingKind::mixed, 3, 1, 3), 2, 10000);
    bool ok = even.ok() && odd.ok();
    ok = ok && note_contains(even, "exhaustive over all 256");
    // the odd case must cover at least 10^4 deterministically enumerated matrices
    long long odd_count = 0;
    for (const CheckResult& c : odd.checks)
        if (c.name == "congruence modulo pi^{2l'}") odd_count = std::stoll(c.expected);
    ok = ok && odd_count >= 10000;
    if (!ok) {
        dump_report(even);
        dump_report(odd);
        std::printf("criterion 3: FAIL - determinant congruence identities\n");
        return false;
    }
    std::printf("criterion 3: PASS - determinant identity exhaustive over 256 matrices at "
                "(q=2,n=2,r=2) and exact on %lld matrices at (p=3,n=2,r=3)\n",
                odd_count);
    return true;
}

bool criterion4() {
    VerificationReport a = verify_all_stable_r2(RingSpec::get(RingKind::mixed, 2, 1, 2), 2);
    VerificationReport b = verify_all_stable_r2(RingSpec::get(RingKind::mixed, 3, 1, 2), 2);
    bool ok = a.ok() && b.ok();
    ok = ok && row_passes(a, "degree-square sum equals the group order", "96");
    ok = ok && row_passes(b, "degree-square sum equals the group order", "3888");
    if (!ok) {
        dump_report(a);
        dump_report(b);
        std::printf("criterion 4: FAIL - length-2 extension and exhaustion\n");
        return false;
    }
    std::printf("criterion 4: PASS - every stable class extends and induction exhausts the "
                "irreducibles over Z/4 (sum deg^2 = 96) and Z/9 (sum deg^2 = 3888)\n");
    return true;
}

bool criterion5() {
    VerificationReport r = verify_theorem_B_sweep(RingSpec::get(RingKind::mixed, 3, 1, 3), 2);
    bool ok = r.ok() && row_passes(r, "stable lift classes verified", "72");
    if (!ok) {
        dump_report(r);
        std::printf("criterion 5: FAIL - length-3 extension sweep\n");
        return false;
    }
    std::printf("criterion 5: PASS - all 72 stable lift classes at (p=3,n=2,r=3) verify "
                "stabilizer match, Sylow commutator triviality, extension, and irreducible "
                "induced twists\n");
    return true;
}

// greedy isotropic completion identical to the library routine except that
// candidate vectors are scanned in the opposite order; any maximal isotropic
// through the radical is equally valid, so the induced class function must
// not depend on which one is picked
std::vector<std::vector<fq_t>> isotropic_reversed(const AlternatingForm& B) {
    const ResidueField* F = B.F;
    int d = B.d;
    std::vector<std::vector<fq_t>> basis = detail::fq_kernel(F, B.gram, d);
    size_t target = basis.size() + size_t(d - (int)basis.size()) / 2;
    long long total = 1;
    for (int i = 0; i < d; ++i) total *= F->q;
    for (long long code = total - 1; code >= 1 && basis.size() < target; --code) {
        std::vector<fq_t> v(size_t(d), 0);
        long long c = code;
        for (int i = 0; i < d; ++i) {
            v[size_t(i)] = fq_t(c % F->q);
            c /= F->q;
        }
        detail::FqSpan span(F, d);
        for (const auto& b : basis) span.add(b);
        if (span.contains(v)) continue;
        bool ok = true;
        for (const auto& b : basis)
            if (B.apply(v, b) != 0) {
                ok = false;
                break;
            }
        if (ok) basis.push_back(v);
    }
    if (basis.size() != target) throw SpecError("reversed isotropic completion failed");
    return basis;
}

std::string cyc_key(const std::vector<CycInt>& vals) {
    std::string s;
    for (const CycInt& v : vals) {
        for (long long c : v.c) s += std::to_string(c) + ",";
        s += ";";
    }
    return s;
}

bool criterion6() {
    const RingSpec* R = RingSpec::get(RingKind::mixed, 3, 1, 3);
    const RingSpec* Rl = RingSpec::get(RingKind::mixed, 3, 1, 2);
    const RingSpec* Rres = RingSpec::get(RingKind::mixed, 3, 1, 1);
    const CycDomain* D = CycDomain::get(AdditiveCharacter(R).order());
    GroupTable K = GroupTable::congruence_kernel(R, 2, 1);
    Subgroup Zs = detail::congruence_subgroup_in(K, 2);
    CosetDecomposition KZ = coset_decomposition(K, Zs);

    // three residue ranks: 0, 1, 2
    std::vector<RMat> mats;
    RMat zero = RMat::zero(Rl, 2);
    RMat nil = RMat::zero(Rl, 2);
    nil.at(0, 1) = Rl->one();
    RMat nonsplit = RMat::zero(Rl, 2);
    nonsplit.at(0, 1) = Rl->one();
    nonsplit.at(1, 0) = Rl->one();
    nonsplit.at(1, 1) = Rl->one();
    mats = {zero, nil, nonsplit};

    std::set<int> ranks;
    std::string counts;
    for (const RMat& Mhat : mats) {
        RMat Mbar = mat_reduce(Mhat, Rres);
        int rank = 2 - (int)detail::column_kernel(Mbar).rows.size();
        ranks.insert(rank);

        LiftedCharacter psis = lifted_char(R, 2, Mhat);
        AlternatingForm B = gram(Mhat);
        IsotropicData iso1 = radical_and_isotropic(B);
        std::vector<std::vector<fq_t>> iso2 = isotropic_reversed(B);
        Subgroup J1 = kernel_subgroup_from_span(K, psis.level, iso1.isotropic);
        Subgroup J2 = kernel_subgroup_from_span(K, psis.level, iso2);
        InducedSigma s1 = induce_sigma(K, J1, psis, D);
        InducedSigma s2 = induce_sigma(K, J2, psis, D);

        // choice independence, exactly
        if (s1.degree != s2.degree) return false;
        for (size_t i = 0; i < s1.values.size(); ++i)
            if (!(s1.values[i] == s2.values[i])) return false;

        // degree = [K^{l'} : J_M], cross-checked against the form dimensions
        if (s1.degree != K.order() / J1.order()) return false;
        if (s1.degree != llpow(3, 4 - (int)iso1.isotropic.size())) return false;

        // exhaustive decomposition of Ind_{K^l}^{K^{l'}} psi_M: the lifted
        // characters (inductions of the extensions of psi_M to J_M) must be
        // exactly the irreducibles above psi_M, each with multiplicity equal
        // to its degree share
        KernelCharacter psi = kernel_character(R, 2, 2, mat_reduce(Mhat, Rres));
        std::vector<CycInt> F(K.elems.size(), CycInt(D));
        for (int x : Zs.elems) {
            CycInt acc(D);
            for (int t : KZ.reps) {
                int y = K.mul(K.mul(K.inv(t), x), t);
                acc = cyc_add(acc, phase_to_cyc(psi.eval(K.elems[size_t(y)]), D));
            }
            F[size_t(x)] = acc;
        }

        GroupTable Jt = group_from_subgroup(K, J1);
        Subgroup ZinJ = detail::congruence_subgroup_in(Jt, 2);
        QuotientGroup Q = quotient_group(Jt, ZinJ);
        std::vector<SmallLinear> duals = abelian_dual(Q.table);
        CosetDecomposition KJ = coset_decomposition(K, J1);

        std::map<std::string, std::vector<CycInt>> distinct;
        for (const SmallLinear& lam : duals) {
            std::vector<CycInt> vals(K.elems.size(), CycInt(D));
            for (size_t x = 0; x < K.elems.size(); ++x) {
                CycInt acc(D);
                for (int t : KJ.reps) {
                    int y = K.mul(K.mul(K.inv(t), (int)x), t);
                    if (!J1.contains(y)) continue;
                    int jp = Jt.id(K.elems[size_t(y)]);
                    Phase ph = phase_add(psis.eval(K.elems[size_t(y)]),
                                         lam.v[size_t(Q.proj[size_t(jp)])]);
                    acc = cyc_add(acc, phase_to_cyc(ph, D));
                }
                vals[x] = acc;
            }
            distinct.emplace(cyc_key(vals), std::move(vals));
        }

        long long degsum = 0, msq = 0;
        for (const auto& [key, vals] : distinct) {
            (void)key;
            CycInt nrm(D), inner(D);
            for (size_t x = 0; x < K.elems.size(); ++x) {
                nrm = cyc_add(nrm, cyc_mul(vals[x], cyc_conj(vals[x])));
                inner = cyc_add(inner, cyc_mul(F[x], cyc_conj(vals[x])));
            }
            CycInt unit = cyc_div_exact(nrm, K.order());
            if (!(unit == CycInt::integer(D, 1))) return false; // each lift is irreducible
            CycInt mult = cyc_div_exact(inner, K.order());
            if (!mult.is_integer() || mult.integer_value() <= 0) return false;
            long long m = mult.integer_value();
            degsum += m * vals[0].integer_value();
            msq += m * m;
        }
        // completeness: the distinct lifted characters exhaust the fiber
        if (degsum != K.order() / Zs.order()) return false;
        CycInt ff(D);
        for (int x : Zs.elems) ff = cyc_add(ff, cyc_mul(F[size_t(x)], cyc_conj(F[size_t(x)])));
        if (!(cyc_div_exact(ff, K.order()) == CycInt::integer(D, msq))) return false;

        counts += (counts.empty() ? "" : ", ") + std::string("rank ") + std::to_string(rank) +
                  ": degree " + std::to_string(s1.degree) + ", " +
                  std::to_string(distinct.size()) + " lifted";
    }
    if (ranks.size() < 3) return false;
    std::printf("criterion 6: PASS - lift independent of the isotropic choice, degree "
                "[K:J], and the lifted characters exhaust the fiber (%s)\n",
                counts.c_str());
    return true;
}

bool criterion7() {
    VerificationReport r = verify_hill_counterexample(RingSpec::get(RingKind::mixed, 3, 1, 3), 2);
    bool ok = r.ok();
    ok = ok && row_passes(r, "lift stabilizer equals the centralizer preimage", "26244");
    ok = ok && row_passes(r, "containment is strict", "true");
    ok = ok && note_contains(r, "containment index: 12");
    if (!ok) {
        dump_report(r);
        std::printf("criterion 7: FAIL - strict containment counterexample\n");
        return false;
    }
    std::printf("criterion 7: PASS - the lift stabilizer is the centralizer preimage of order "
                "26244, strictly inside the kernel-character stabilizer, index 12\n");
    return true;
}

bool criterion8() {
    // the pinned non-stable instance
    const RingSpec* R4 = RingSpec::get(RingKind::mixed, 2, 1, 2);
    RMat bad(R4, 2);
    bad.at(0, 0) = 1;
    bad.at(0, 1) = 1;
    bad.at(1, 0) = 0;
    bad.at(1, 1) = 3; // 1 + pi
    if (is_stable(bad).verdict != StabilityVerdict::notStable) return false;

    // strongly semisimple recipe: diagonal Teichmueller part plus a central
    // topologically nilpotent part, every combination over each small ring
    std::vector<std::pair<RMat, StabilityVerdict>> instances;
    instances.emplace_back(bad, StabilityVerdict::notStable);
    for (const RingSpec* R : small_rings()) {
        for (int a = 0; a < R->q; ++a)
            for (int b = 0; b < R->q; ++b) {
                if (a == b) {
                    for (rcode_t c = 0; c < (rcode_t)R->card; ++c) {
                        if (R->val(c) < 1) continue;
                        RMat M = RMat::scalar(R, 2, R->add(R->teich(fq_t(a)), c));
                        if (is_stable(M).verdict != StabilityVerdict::stable) return false;
                        if (!is_strongly_semisimple(M)) return false;
                        instances.emplace_back(M, StabilityVerdict::stable);
                    }
                } else {
                    for (rcode_t c1 = 0; c1 < (rcode_t)R->card; ++c1) {
                        if (R->val(c1) < 1) continue;
                        for (rcode_t c2 = 0; c2 < (rcode_t)R->card; ++c2) {
                            if (R->val(c2) < 1) continue;
                            RMat M = RMat::zero(R, 2);
                            M.at(0, 0) = R->add(R->teich(fq_t(a)), c1);
                            M.at(1, 1) = R->add(R->teich(fq_t(b)), c2);
                            if (is_stable(M).verdict != StabilityVerdict::stable) return false;
                            if (!is_strongly_semisimple(M)) return false;
                            instances.emplace_back(M, StabilityVerdict::stable);
                        }
                    }
                }
            }
    }

    // verdicts are conjugation invariant: 10^3 pseudo-random conjugates per
    // instance from a fixed-seed generator
    std::mt19937 rng(20240915u);
    long long conjugates = 0;
    for (const auto& [M, verdict] : instances) {
        const RingSpec* R = M.R;
        for (int t = 0; t < 1000; ++t) {
            RMat g(R, 2);
            do {
                for (int e = 0; e < 4; ++e) g.e[size_t(e)] = (rcode_t)(rng() % R->card);
            } while (!R->is_unit(mat_det(g)));
            RMat conj = mat_conj(g, M);
            if (is_stable(conj).verdict != verdict) return false;
            ++conjugates;
        }
    }
    std::printf("criterion 8: PASS - notStable pinned for the residue-regular example, %zu "
                "strongly semisimple instances stable, verdicts unchanged on %lld conjugates\n",
                instances.size() - 1, conjugates);
    return true;
}

} // namespace

int main(int argc, char** argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) which = std::atoi(argv[i + 1]);
    bool (*crits[])() = {criterion1, criterion2, criterion3, criterion4,
                         criterion5, criterion6, criterion7, criterion8};
    bool all = true;
    for (int c = 1; c <= 8; ++c) {
        if (which != 0 && which != c) continue;
        bool ok = false;
        try {
            ok = crits[c - 1]();
        } catch (const std::exception& e) {
            std::fprintf(stderr, "criterion %d threw: %s\n", c, e.what());
        }
        if (!ok) {
            std::printf("criterion %d: FAIL\n", c);
            all = false;
        }
    }
    return all ? 0 : 1;
}
