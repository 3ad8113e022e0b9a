// chainrep: exact computations over finite chain rings from the command line.
//
// The subcommands mirror the library layers: `ring` and `mat` expose the
// arithmetic, `jcf` / `centralizer` / `stable` the matrix structure theory,
// `char` and `heis` the congruence-kernel characters and their lifts, `group`
// the brute-force group engine, `verify` the certified suites, and `corpus`
// the bundled instance files under data/instances.
//
// All computation is exact (ring codes, rational phases, cyclotomic
// integers); output is deterministic and byte-identical across runs.
//
// Exit codes: 0 success, 1 failed verification or a negative verdict,
// 2 usage or input errors, 3 budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "chainrep/verify.hpp"

using json = nlohmann::ordered_json;
using namespace chainrep;

namespace {

int g_exit = 0;       // sticky process exit code set by subcommand bodies
bool g_json = false;  // --json: machine output instead of the human summary

// ---------------------------------------------------------------------------
// serialization: rings, ring elements (LSB-first digit arrays), matrices
// ---------------------------------------------------------------------------

RingKind kind_from_string(const std::string& s) {
    if (s == "mixed") return RingKind::mixed;
    if (s == "equal") return RingKind::equal;
    throw SpecError("unknown ring kind: " + s);
}

const char* kind_to_string(RingKind k) { return k == RingKind::mixed ? "mixed" : "equal"; }

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw SpecError(path + ": " + e.what());
    }
}

const RingSpec* ring_from_json(const json& j) {
    if (!j.is_object()) throw SpecError("ring descriptor must be a JSON object");
    std::string kind = j.at("kind").get<std::string>();
    int p = j.at("p").get<int>();
    int m = j.value("m", 1);
    int r = j.at("r").get<int>();
    return RingSpec::get(kind_from_string(kind), p, m, r);
}

json ring_to_json(const RingSpec* R) {
    json j;
    j["kind"] = kind_to_string(R->kind);
    j["p"] = R->p;
    j["m"] = R->m;
    j["r"] = R->r;
    return j;
}

int least_prime_factor(long long v) {
    for (int d = 2; (long long)d * d <= v; ++d)
        if (v % d == 0) return d;
    return (int)v;
}

// shorthand grammar: z<p^r> is the mixed ring of that cardinality with m = 1
// (z4, z9, z27); f<q>t<r> is F_q[t]/t^r (f2t2, f9t3); anything else is a path
// to a ring descriptor JSON file
const RingSpec* ring_from_arg(const std::string& s) {
    if (s.size() > 1 && s[0] == 'z' && std::isdigit((unsigned char)s[1])) {
        long long v = std::strtoll(s.c_str() + 1, nullptr, 10);
        if (v < 2) throw SpecError("bad ring shorthand: " + s);
        int p = least_prime_factor(v);
        int r = 0;
        long long w = v;
        while (w % p == 0) { w /= p; ++r; }
        if (w != 1) throw SpecError("ring shorthand needs a prime power: " + s);
        return RingSpec::get(RingKind::mixed, p, 1, r);
    }
    if (s.size() > 1 && s[0] == 'f' && std::isdigit((unsigned char)s[1])) {
        size_t t = s.find('t', 1);
        if (t != std::string::npos) {
            long long q = std::strtoll(s.substr(1, t - 1).c_str(), nullptr, 10);
            long long r = std::strtoll(s.substr(t + 1).c_str(), nullptr, 10);
            if (q >= 2 && r >= 1) {
                int p = least_prime_factor(q);
                int m = 0;
                long long w = q;
                while (w % p == 0) { w /= p; ++m; }
                if (w != 1) throw SpecError("ring shorthand needs a prime power field: " + s);
                return RingSpec::get(RingKind::equal, p, m, (int)r);
            }
        }
        throw SpecError("bad ring shorthand: " + s);
    }
    return ring_from_json(load_json_file(s));
}

rcode_t entry_from_json(const RingSpec* R, const json& e) {
    if (e.is_number_integer()) return R->from_int(e.get<long long>());
    if (e.is_array()) {
        if ((int)e.size() != R->r)
            throw SpecError("digit array length " + std::to_string(e.size()) +
                            " does not match the ring length " + std::to_string(R->r));
        std::vector<fq_t> d(size_t(R->r));
        for (int i = 0; i < R->r; ++i) {
            long long di = e[size_t(i)].get<long long>();
            if (di < 0 || di >= R->q) throw SpecError("digit out of range for the residue field");
            d[size_t(i)] = fq_t(di);
        }
        return R->encode(d.data());
    }
    throw SpecError("matrix entries must be integers or digit arrays");
}

json entry_to_json(const RingSpec* R, rcode_t code) {
    std::vector<fq_t> d(size_t(R->r));
    R->digits_of(code, d.data());
    json a = json::array();
    for (int i = 0; i < R->r; ++i) a.push_back((int)d[size_t(i)]);
    return a;
}

RMat entries_to_mat(const RingSpec* R, int n, const json& rows) {
    if (!rows.is_array() || (int)rows.size() != n)
        throw SpecError("entries must be an n x n array");
    RMat M(R, n);
    for (int i = 0; i < n; ++i) {
        const json& row = rows[size_t(i)];
        if (!row.is_array() || (int)row.size() != n)
            throw SpecError("entries must be an n x n array");
        for (int k = 0; k < n; ++k) M.at(i, k) = entry_from_json(R, row[size_t(k)]);
    }
    return M;
}

RMat mat_from_json(const json& j) {
    const RingSpec* R = ring_from_json(j.at("ring"));
    int n = j.at("n").get<int>();
    if (n < 1) throw SpecError("matrix size must be positive");
    return entries_to_mat(R, n, j.at("entries"));
}

RMat mat_from_file(const std::string& path) { return mat_from_json(load_json_file(path)); }

json mat_to_json(const RMat& M) {
    json j;
    j["ring"] = ring_to_json(M.R);
    j["n"] = M.n;
    json rows = json::array();
    for (int i = 0; i < M.n; ++i) {
        json row = json::array();
        for (int k = 0; k < M.n; ++k) row.push_back(entry_to_json(M.R, M.at(i, k)));
        rows.push_back(row);
    }
    j["entries"] = rows;
    return j;
}

json phase_to_json(const Phase& ph) {
    json j;
    j["num"] = ph.num;
    j["den"] = ph.den;
    return j;
}

// FNV-1a; stable across platforms, good enough to fingerprint class functions
std::string digest_string(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return std::string(buf);
}

std::string cyc_serialize(const CycInt& v) {
    std::string s;
    for (size_t i = 0; i < v.c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v.c[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

void emit(const json& machine, const std::function<void()>& human) {
    if (g_json)
        std::cout << machine.dump(2) << "\n";
    else
        human();
}

json report_to_json(const VerificationReport& r) {
    json j;
    j["suite"] = r.suite;
    j["instance"] = r.instance;
    j["pass"] = r.ok();
    json checks = json::array();
    for (const CheckResult& c : r.checks) {
        json cj;
        cj["name"] = c.name;
        cj["expected"] = c.expected;
        cj["observed"] = c.observed;
        cj["pass"] = c.pass;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["notes"] = r.notes;
    return j;
}

void print_report(const VerificationReport& r) {
    std::cout << "== " << r.suite << " | " << r.instance << " ==\n";
    for (const CheckResult& c : r.checks)
        std::cout << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << ": expected "
                  << c.expected << " observed " << c.observed << "\n";
    for (const std::string& n : r.notes) std::cout << "  note: " << n << "\n";
    std::cout << (r.ok() ? "PASS" : "FAIL") << "\n";
}

void finish_report(const VerificationReport& r) {
    emit(report_to_json(r), [&] { print_report(r); });
    if (!r.ok()) g_exit = 1;
}

std::string mat_human(const RMat& M) { return detail::mat_brief(M) + " over " + M.R->describe(); }

// ---------------------------------------------------------------------------
// shared flag bundles
// ---------------------------------------------------------------------------

long long resolve_budget(long long flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("CHAINREP_BUDGET")) {
        char* end = nullptr;
        long long v = std::strtoll(env, &end, 10);
        if (!end || *end != '\0' || v <= 0)
            throw SpecError("CHAINREP_BUDGET must be a positive integer");
        return v;
    }
    return 0; // library default
}

struct RingArgs {
    std::string ring;
    std::string kind = "mixed";
    int p = 0, m = 1, r = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--ring", ring,
                        "ring shorthand (z4, z27, f2t2) or a ring descriptor JSON file");
        cmd->add_option("--kind", kind, "ring kind when using --p/--r")
            ->check(CLI::IsMember({"mixed", "equal"}));
        cmd->add_option("--p", p, "residue characteristic when using --p/--r");
        cmd->add_option("--m", m, "residue field degree over F_p (default 1)");
        cmd->add_option("--r", r, "nilpotency length when using --p/--r");
    }
    bool given() const { return !ring.empty() || (p > 0 && r > 0); }
    const RingSpec* resolve() const {
        if (!ring.empty()) return ring_from_arg(ring);
        if (p > 0 && r > 0) return RingSpec::get(kind_from_string(kind), p, m, r);
        throw SpecError("specify a ring with --ring or with --p and --r");
    }
};

// ---------------------------------------------------------------------------
// corpus: bundled instances, embedded so the binary answers anywhere; the
// same files live under data/instances for use as subcommand inputs
// ---------------------------------------------------------------------------

struct CorpusEntry {
    const char* name;
    const char* path;
    const char* summary;
    const char* body;
};

const CorpusEntry kCorpus[] = {
    {"regular-not-stable", "data/instances/regular_not_stable.json",
     "residue-regular 2x2 matrix over Z/4 whose stability search returns notStable",
     R"({
  "ring": {"kind": "mixed", "p": 2, "m": 1, "r": 2},
  "n": 2,
  "entries": [
    [[1, 0], [1, 0]],
    [[0, 0], [1, 1]]
  ],
  "note": "residue-regular upper triangular matrix with eigenvalue lift 1 + pi; no conjugate aligns it to a Teichmueller part plus a central correction, so the stability search returns notStable"
})"},
    {"hill-family", "data/instances/hill_family.json",
     "scalar-residue matrix over Z/9 whose lift over Z/27 has a strictly smaller stabilizer",
     R"({
  "ring": {"kind": "mixed", "p": 3, "m": 1, "r": 2},
  "n": 2,
  "entries": [
    [[1, 1], [0, 0]],
    [[0, 0], [1, 0]]
  ],
  "note": "identity plus pi times a corner idempotent: scalar residue with a nonscalar top correction. Over the length-3 ring its lifted character has a stabilizer strictly smaller than the kernel-character stabilizer (index 12), so the lift admits no extension; the verify hill suite pins this family member"
})"},
    {"stable-z9-scalar", "data/instances/stable_z9_scalar.json",
     "scalar representative over Z/9 for the length-3 extension suite",
     R"({
  "ring": {"kind": "mixed", "p": 3, "m": 1, "r": 2},
  "n": 2,
  "entries": [
    [[1, 0], [0, 0]],
    [[0, 0], [1, 0]]
  ],
  "note": "scalar representative over the half-length ring of Z/27; its lift stabilizer is the whole group and the extension argument runs through the pure linear case"
})"},
    {"stable-z9-nilpotent", "data/instances/stable_z9_nilpotent.json",
     "regular nilpotent representative over Z/9 for the length-3 extension suite",
     R"({
  "ring": {"kind": "mixed", "p": 3, "m": 1, "r": 2},
  "n": 2,
  "entries": [
    [[0, 0], [1, 0]],
    [[0, 0], [0, 0]]
  ],
  "note": "regular nilpotent representative over the half-length ring of Z/27; its stabilizer quotient is cyclic of order 6 and the extension is built through an intertwining operator"
})"},
    {"stable-z9-split", "data/instances/stable_z9_split.json",
     "split semisimple representative over Z/9 for the length-3 extension suite",
     R"({
  "ring": {"kind": "mixed", "p": 3, "m": 1, "r": 2},
  "n": 2,
  "entries": [
    [[1, 0], [0, 0]],
    [[0, 0], [0, 0]]
  ],
  "note": "split semisimple representative (distinct residue eigenvalues in the base field) over the half-length ring of Z/27; its stabilizer quotient is a Klein four group and the extension is induced from a pair stabilizer"
})"},
    {"stable-z9-nonsplit", "data/instances/stable_z9_nonsplit.json",
     "nonsplit semisimple representative over Z/9 for the length-3 extension suite",
     R"({
  "ring": {"kind": "mixed", "p": 3, "m": 1, "r": 2},
  "n": 2,
  "entries": [
    [[0, 0], [1, 0]],
    [[1, 0], [1, 0]]
  ],
  "note": "companion matrix of an irreducible quadratic: nonsplit semisimple over the half-length ring of Z/27; its stabilizer quotient is cyclic of order 8 and the extension is built through an intertwining operator"
})"},
    {"stable-reps-z4", "data/instances/stable_reps_z4.json",
     "all 6 class representatives of M_2(F_2); they index the fibers over Z/4 and F_2[t]/t^2",
     R"({
  "ring": {"kind": "mixed", "p": 2, "m": 1, "r": 1},
  "n": 2,
  "matrices": [
    [[[0], [0]], [[0], [0]]],
    [[[1], [0]], [[0], [0]]],
    [[[0], [1]], [[0], [0]]],
    [[[0], [1]], [[1], [0]]],
    [[[1], [1]], [[1], [0]]],
    [[[1], [0]], [[0], [1]]]
  ],
  "note": "all 6 conjugacy class representatives of 2x2 matrices over F_2, the shared residue field of Z/4 and F_2[t]/t^2; every class is stable, so these matrices index the character fibers of both length-2 groups"
})"},
    {"stable-reps-z9", "data/instances/stable_reps_z9.json",
     "all 12 class representatives of M_2(F_3); they index the fibers over Z/9",
     R"({
  "ring": {"kind": "mixed", "p": 3, "m": 1, "r": 1},
  "n": 2,
  "matrices": [
    [[[0], [0]], [[0], [0]]],
    [[[1], [0]], [[0], [0]]],
    [[[2], [0]], [[0], [0]]],
    [[[0], [1]], [[0], [0]]],
    [[[0], [1]], [[1], [0]]],
    [[[1], [1]], [[1], [0]]],
    [[[2], [1]], [[1], [0]]],
    [[[0], [2]], [[1], [0]]],
    [[[1], [2]], [[1], [0]]],
    [[[2], [2]], [[1], [0]]],
    [[[1], [0]], [[0], [1]]],
    [[[2], [0]], [[0], [2]]]
  ],
  "note": "all 12 conjugacy class representatives of 2x2 matrices over F_3, the residue field of Z/9; every class is stable, so these matrices index the character fibers of the length-2 group"
})"},
};

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

void run_ring(const std::string& arg) {
    const RingSpec* R = ring_from_arg(arg);
    json j = ring_to_json(R);
    j["q"] = R->q;
    j["card"] = R->card;
    j["levelL"] = R->level_l();
    j["levelLprime"] = R->level_lprime();
    j["description"] = R->describe();
    emit(j, [&] {
        std::cout << R->describe() << ": residue field F_" << R->q << ", cardinality " << R->card
                  << ", levels l = " << R->level_l() << ", l' = " << R->level_lprime() << "\n";
    });
}

void run_mat_det(const std::string& file) {
    RMat M = mat_from_file(file);
    rcode_t d = mat_det(M);
    json j;
    j["ring"] = ring_to_json(M.R);
    j["det"] = entry_to_json(M.R, d);
    j["unit"] = M.R->is_unit(d);
    emit(j, [&] {
        std::cout << "det = " << entry_to_json(M.R, d).dump() << " (code " << d << ", "
                  << (M.R->is_unit(d) ? "unit" : "non-unit") << ") over " << M.R->describe()
                  << "\n";
    });
}

void run_mat_inv(const std::string& file) {
    RMat M = mat_from_file(file);
    try {
        RMat inv = mat_inv(M);
        json j = mat_to_json(inv);
        emit(j, [&] { std::cout << "inverse = " << mat_human(inv) << "\n"; });
    } catch (const NotInvertibleError&) {
        json j;
        j["invertible"] = false;
        emit(j, [&] { std::cout << "matrix is not invertible over " << M.R->describe() << "\n"; });
        g_exit = 1;
    }
}

void run_mat_conj(const std::string& file, const std::string& by) {
    RMat M = mat_from_file(file);
    RMat g = mat_from_file(by);
    if (g.R != M.R || g.n != M.n) throw SpecError("--by matrix must match the ring and size");
    RMat out = mat_conj(g, M);
    emit(mat_to_json(out), [&] { std::cout << "g M g^-1 = " << mat_human(out) << "\n"; });
}

void run_mat_level_change(const std::string& file, int to, bool lift) {
    RMat M = mat_from_file(file);
    const RingSpec* T = RingSpec::get(M.R->kind, M.R->p, M.R->m, to);
    if (lift && to < M.R->r) throw SpecError("section target must not be shorter");
    if (!lift && to > M.R->r) throw SpecError("reduce target must not be longer");
    RMat out = lift ? mat_section(M, T) : mat_reduce(M, T);
    emit(mat_to_json(out), [&] {
        std::cout << (lift ? "section " : "reduction ") << mat_human(out) << "\n";
    });
}

void run_mat_commutant(const std::string& file) {
    RMat M = mat_from_file(file);
    HowellForm H = commutant_module(M);
    JordanForm jf = residue_jcf(M);
    int logq = H.log_q_cardinality();
    json j;
    j["ring"] = ring_to_json(M.R);
    j["q"] = M.R->q;
    j["logQCardinality"] = logq;
    j["formulaLogQCardinality"] = commutant_log_card_formula(jf);
    json basis = json::array();
    for (const RMat& B : module_generators(H, M.n)) basis.push_back(mat_to_json(B)["entries"]);
    j["basis"] = basis;
    emit(j, [&] {
        std::cout << "commutant of " << mat_human(M) << ": cardinality " << M.R->q << "^" << logq
                  << " (formula exponent " << commutant_log_card_formula(jf) << "), "
                  << basis.size() << " Howell generators\n";
    });
}

void run_jcf(const std::string& file) {
    RMat M = mat_from_file(file);
    JCFLift lift = lift_jcf(M);
    const JordanForm& jf = lift.jf;
    json j;
    j["ring"] = ring_to_json(M.R);
    j["splitDegree"] = jf.split_degree;
    json blocks = json::array();
    for (const JordanBlock& b : jf.blocks) {
        json bj;
        bj["eig"] = (int)b.eig;
        bj["inBase"] = b.in_base;
        bj["size"] = b.size;
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    j["conjugator"] = mat_to_json(jf.g);
    j["residueForm"] = mat_to_json(jf.J);
    emit(j, [&] {
        std::cout << "residue Jordan form over " << jf.res_ext->describe() << " (splitting degree "
                  << jf.split_degree << ")\n";
        for (const JordanBlock& b : jf.blocks)
            std::cout << "  block: eigenvalue code " << (int)b.eig
                      << (b.in_base ? " (base field)" : " (extension)") << ", size " << b.size
                      << "\n";
        std::cout << "conjugator " << mat_human(jf.g) << "\n";
    });
}

void run_centralizer(const std::string& file, bool units, bool center, long long budget) {
    RMat M = mat_from_file(file);
    HowellForm H = commutant_module(M);
    JordanForm jf = residue_jcf(M);
    json j;
    j["ring"] = ring_to_json(M.R);
    j["logQCardinality"] = H.log_q_cardinality();
    j["formulaLogQCardinality"] = commutant_log_card_formula(jf);
    if (center) {
        HowellForm Z = center_of_commutant(M);
        j["centerLogQCardinality"] = Z.log_q_cardinality();
        j["centerFormulaLogQCardinality"] = center_log_card_formula(jf);
    }
    if (units) j["unitGroupOrder"] = (long long)centralizer_units(M, resolve_budget(budget)).size();
    emit(j, [&] {
        std::cout << "centralizer of " << mat_human(M) << ": module cardinality " << M.R->q << "^"
                  << H.log_q_cardinality() << "\n";
        if (center)
            std::cout << "  center cardinality " << M.R->q << "^"
                      << j["centerLogQCardinality"].get<int>() << "\n";
        if (units) std::cout << "  unit group order " << j["unitGroupOrder"].get<long long>() << "\n";
    });
}

void run_stable(const std::string& file, long long budget) {
    RMat M = mat_from_file(file);
    StabilityCertificate cert = is_stable(M, resolve_budget(budget));
    json j;
    j["ring"] = ring_to_json(M.R);
    j["verdict"] = to_string(cert.verdict);
    j["constructive"] = cert.constructive;
    j["searched"] = cert.searched;
    j["splitDegree"] = cert.lift.jf.split_degree;
    if (cert.verdict == StabilityVerdict::stable) j["aligner"] = mat_to_json(cert.aligner);
    emit(j, [&] {
        std::cout << "stability of " << mat_human(M) << ": " << to_string(cert.verdict)
                  << (cert.constructive ? " (constructive)" : "") << ", searched " << cert.searched
                  << " conjugates\n";
    });
    if (cert.verdict == StabilityVerdict::unknownBudget) g_exit = 3;
}

struct CharInput {
    const RingSpec* R = nullptr;
    int n = 0;
    int level = 0;
    RMat M;
    std::optional<RMat> elem;
};

CharInput char_input(const std::string& file) {
    json j = load_json_file(file);
    CharInput in;
    in.R = ring_from_json(j.at("ring"));
    in.n = j.at("n").get<int>();
    in.level = j.at("level").get<int>();
    if (in.level < 1 || in.level >= in.R->r)
        throw SpecError("level must lie strictly between 0 and r");
    const RingSpec* Rq = RingSpec::get(in.R->kind, in.R->p, in.R->m, in.R->r - in.level);
    in.M = entries_to_mat(Rq, in.n, j.at("M"));
    if (j.contains("element")) in.elem = entries_to_mat(in.R, in.n, j.at("element"));
    return in;
}

void run_char(const std::string& what, const std::string& file, long long budget) {
    CharInput in = char_input(file);
    KernelCharacter psi = kernel_character(in.R, in.n, in.level, in.M);
    if (what == "eval") {
        if (!in.elem) throw SpecError("char eval needs an \"element\" entry in the input file");
        Phase ph = psi.eval(*in.elem);
        json j;
        j["phase"] = phase_to_json(ph);
        emit(j, [&] { std::cout << "psi(k) = e(" << ph.num << "/" << ph.den << ")\n"; });
        return;
    }
    long long b = resolve_budget(budget);
    const GroupTable& G = GroupTable::general_linear(in.R, in.n, b);
    Subgroup S = kernel_char_stabilizer_formula(G, psi);
    GroupTable K = GroupTable::congruence_kernel(in.R, in.n, in.level, b);
    Subgroup Ss = kernel_char_stabilizer_scan(G, K, psi);
    json j;
    j["groupOrder"] = G.order();
    j["stabilizerOrder"] = S.order();
    j["scanStabilizerOrder"] = Ss.order();
    j["orbitSize"] = G.order() / S.order();
    if (S.order() != Ss.order()) g_exit = 1;
    if (what == "stabilizer") {
        emit(j, [&] {
            std::cout << "stabilizer order " << S.order() << " (scan agrees: "
                      << (S.order() == Ss.order() ? "yes" : "NO") << "), index "
                      << G.order() / S.order() << " in the group of order " << G.order() << "\n";
        });
    } else { // orbit
        emit(j, [&] {
            std::cout << "orbit of psi under conjugation has size " << G.order() / S.order()
                      << "\n";
        });
    }
}

struct HeisInput {
    const RingSpec* R = nullptr; // ambient, odd length 2l - 1
    RMat Mhat;                   // over the length-l ring
};

HeisInput heis_input(const std::string& file) {
    HeisInput in;
    in.Mhat = mat_from_file(file);
    int l = in.Mhat.R->r;
    if (l < 2) throw SpecError("the lift needs a matrix over a ring of length at least 2");
    in.R = RingSpec::get(in.Mhat.R->kind, in.Mhat.R->p, in.Mhat.R->m, 2 * l - 1);
    return in;
}

json fq_vectors_to_json(const std::vector<std::vector<fq_t>>& vs) {
    json a = json::array();
    for (const auto& v : vs) {
        json row = json::array();
        for (fq_t x : v) row.push_back((int)x);
        a.push_back(row);
    }
    return a;
}

void run_heis(const std::string& what, const std::string& file, long long budget) {
    HeisInput in = heis_input(file);
    const RingSpec* R = in.R;
    int n = in.Mhat.n;
    AlternatingForm B = gram(in.Mhat);

    if (what == "form" || what == "isotropic") {
        IsotropicData iso = radical_and_isotropic(B);
        json j;
        j["ring"] = ring_to_json(R);
        j["dimension"] = B.d;
        j["radicalDimension"] = (long long)iso.radical.size();
        j["rank"] = B.d - (long long)iso.radical.size();
        j["isotropicDimension"] = (long long)iso.isotropic.size(); // basis already contains the radical
        if (what == "form") {
            json rows = json::array();
            for (int a = 0; a < B.d; ++a) {
                json row = json::array();
                for (int b = 0; b < B.d; ++b) row.push_back((int)B.gram[size_t(a)][size_t(b)]);
                rows.push_back(row);
            }
            j["gram"] = rows;
        } else {
            j["radical"] = fq_vectors_to_json(iso.radical);
            j["isotropic"] = fq_vectors_to_json(iso.isotropic);
        }
        emit(j, [&] {
            std::cout << "commutator form on a space of dimension " << B.d << ": rank "
                      << B.d - (long long)iso.radical.size() << ", radical dimension "
                      << iso.radical.size() << ", maximal isotropic dimension "
                      << iso.isotropic.size() << "\n";
        });
        return;
    }

    long long b = resolve_budget(budget);
    LiftedCharacter psis = lifted_char(R, n, in.Mhat);
    GroupTable K = GroupTable::congruence_kernel(R, n, psis.level, b);

    if (what == "lift") {
        std::string ser;
        for (size_t i = 0; i < K.elems.size(); ++i) {
            Phase ph = psis.eval(K.elems[i]);
            ser += std::to_string(i) + ":" + std::to_string(ph.num) + "/" +
                   std::to_string(ph.den) + ";";
        }
        json j;
        j["ring"] = ring_to_json(R);
        j["level"] = psis.level;
        j["kernelOrder"] = K.order();
        j["half"] = entry_to_json(R, psis.half);
        j["digest"] = digest_string(ser);
        emit(j, [&] {
            std::cout << "lifted character on the level-" << psis.level << " kernel of order "
                      << K.order() << ", value digest " << digest_string(ser) << "\n";
        });
        return;
    }

    IsotropicData iso = radical_and_isotropic(B);
    Subgroup J = kernel_subgroup_from_span(K, psis.level, iso.isotropic);
    const CycDomain* D = CycDomain::get(AdditiveCharacter(R).order());
    InducedSigma sigma = induce_sigma(K, J, psis, D);

    if (what == "induce") {
        std::string ser;
        for (size_t i = 0; i < sigma.values.size(); ++i)
            ser += std::to_string(i) + ":" + cyc_serialize(sigma.values[i]) + ";";
        json j;
        j["ring"] = ring_to_json(R);
        j["kernelOrder"] = K.order();
        j["sourceOrder"] = J.order();
        j["degree"] = sigma.degree;
        j["digest"] = digest_string(ser);
        emit(j, [&] {
            std::cout << "induced lift has degree " << sigma.degree << " = [" << K.order() << " : "
                      << J.order() << "], value digest " << digest_string(ser) << "\n";
        });
        return;
    }

    // stabilizer
    const GroupTable& G = GroupTable::general_linear(R, n, b);
    Subgroup S = sigma_stabilizer(G, K, sigma);
    json j;
    j["ring"] = ring_to_json(R);
    j["groupOrder"] = G.order();
    j["stabilizerOrder"] = S.order();
    j["index"] = G.order() / S.order();
    emit(j, [&] {
        std::cout << "stabilizer of the induced lift has order " << S.order() << ", index "
                  << G.order() / S.order() << " in the group of order " << G.order() << "\n";
    });
}

long long gl_order_formula(const RingSpec* R, int n) {
    // |GL_n(O_r)| = q^((r-1) n^2) * prod_{i<n} (q^n - q^i)
    long long q = R->q, acc = 1;
    for (int i = 0; i < (R->r - 1) * n * n; ++i) acc *= q;
    std::vector<long long> qp(size_t(n) + 1, 1);
    for (int i = 1; i <= n; ++i) qp[size_t(i)] = qp[size_t(i) - 1] * q;
    for (int i = 0; i < n; ++i) acc *= qp[size_t(n)] - qp[size_t(i)];
    return acc;
}

void run_group(const std::string& what, const RingArgs& ra, int n, long long budget) {
    const RingSpec* R = ra.resolve();
    long long b = resolve_budget(budget);
    const GroupTable& G = GroupTable::general_linear(R, n, b);
    json j;
    j["ring"] = ring_to_json(R);
    j["n"] = n;
    j["order"] = G.order();
    if (what == "order") {
        j["orderFormula"] = gl_order_formula(R, n);
        if (G.order() != gl_order_formula(R, n)) g_exit = 1;
        emit(j, [&] {
            std::cout << "group order " << G.order() << " (formula "
                      << gl_order_formula(R, n) << ")\n";
        });
    } else if (what == "classes") {
        ConjClasses C = conjugacy_classes(G);
        std::vector<long long> sizes;
        for (const auto& mem : C.members) sizes.push_back((long long)mem.size());
        std::sort(sizes.begin(), sizes.end());
        j["count"] = (long long)C.reps.size();
        j["sizes"] = sizes;
        emit(j, [&] {
            std::cout << C.reps.size() << " conjugacy classes in the group of order " << G.order()
                      << "\n";
        });
    } else if (what == "commutator") {
        Subgroup C = commutator_subgroup(G);
        j["commutatorOrder"] = C.order();
        j["abelianizationOrder"] = G.order() / C.order();
        emit(j, [&] {
            std::cout << "commutator subgroup order " << C.order() << ", abelianization order "
                      << G.order() / C.order() << "\n";
        });
    } else { // sylow: the full preimage of the residue unitriangulars
        std::vector<int> gens;
        GroupTable K1 = GroupTable::congruence_kernel(R, n, 1, b);
        for (int gi : K1.genidx) {
            int id = G.id(K1.elems[size_t(gi)]);
            if (id < 0) throw SpecError("kernel generator missing from the group (internal)");
            gens.push_back(id);
        }
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k) {
                RMat E = RMat::identity(R, n);
                E.at(i, k) = R->one();
                int id = G.id(E);
                if (id < 0) throw SpecError("unitriangular generator missing (internal)");
                gens.push_back(id);
            }
        Subgroup P = subgroup_closure(G, gens);
        long long ppart = 1, rest = G.order();
        while (rest % R->p == 0) {
            ppart *= R->p;
            rest /= R->p;
        }
        j["sylowOrder"] = P.order();
        j["pPartOfOrder"] = ppart;
        if (P.order() != ppart) g_exit = 1;
        emit(j, [&] {
            std::cout << "Sylow " << R->p << "-subgroup order " << P.order()
                      << " (p-part of the group order: " << ppart << ")\n";
        });
    }
}

// verify dispatch: single-instance suites derive the ambient ring from the
// instance file when ring flags are absent (even length 2l for the fiber
// suite, odd length 2l - 1 for the extension suite)
const RingSpec* ambient_for(const RingArgs& ra, const RMat& M, bool odd) {
    int l = M.R->r;
    int rr = odd ? 2 * l - 1 : 2 * l;
    if (ra.given()) {
        const RingSpec* R = ra.resolve();
        if (R->kind != M.R->kind || R->p != M.R->p || R->m != M.R->m || R->r != rr)
            throw SpecError("instance matrix ring does not match the requested ambient ring");
        return R;
    }
    return RingSpec::get(M.R->kind, M.R->p, M.R->m, rr);
}

void run_verify(const std::string& suite, const RingArgs& ra, int n, const std::string& matfile,
                long long samples, long long budget) {
    long long b = resolve_budget(budget);
    VerificationReport rep;
    if (suite == "det-lemma") {
        rep = verify_det_lemma(ra.resolve(), n, samples, b);
    } else if (suite == "r2-complete") {
        rep = verify_all_stable_r2(ra.resolve(), n, b);
    } else if (suite == "hill") {
        rep = verify_hill_counterexample(ra.resolve(), n, b);
    } else if (suite == "theorem-a") {
        if (matfile.empty()) {
            rep = verify_theorem_A_sweep(ra.resolve(), n, b);
        } else {
            RMat M = mat_from_file(matfile);
            rep = verify_theorem_A(ambient_for(ra, M, false), M.n, M, b);
        }
    } else { // theorem-b
        if (matfile.empty()) {
            rep = verify_theorem_B_sweep(ra.resolve(), n, b);
        } else {
            RMat M = mat_from_file(matfile);
            rep = verify_theorem_B(ambient_for(ra, M, true), M.n, M, b);
        }
    }
    finish_report(rep);
}

void run_corpus(const std::string& what, const std::string& name) {
    if (what == "list") {
        json j = json::array();
        for (const CorpusEntry& e : kCorpus) {
            json ej;
            ej["name"] = e.name;
            ej["path"] = e.path;
            ej["summary"] = e.summary;
            j.push_back(ej);
        }
        emit(j, [&] {
            for (const CorpusEntry& e : kCorpus)
                std::cout << e.name << "  (" << e.path << ")\n    " << e.summary << "\n";
        });
        return;
    }
    for (const CorpusEntry& e : kCorpus)
        if (name == e.name) {
            json j = json::parse(e.body);
            std::cout << j.dump(2) << "\n";
            return;
        }
    throw SpecError("unknown corpus entry: " + name + " (see `chainrep corpus list`)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact matrix, character, and verification computations over finite chain rings"};
    app.require_subcommand(1);
    int threads = 1;
    bool seedless = false;
    app.add_flag("--json", g_json, "emit machine-readable JSON with stable key order");
    app.add_option("--threads", threads, "upper bound on worker threads (the exact suites run on one worker)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--seedless", seedless,
                 "assert that no randomness is involved; all output is already deterministic");

    // ring
    std::string ring_arg;
    auto* c_ring = app.add_subcommand("ring", "describe a finite chain ring");
    c_ring->add_option("spec", ring_arg, "shorthand (z4, f2t2) or descriptor JSON file")
        ->required();
    c_ring->callback([&] { run_ring(ring_arg); });

    // mat
    auto* c_mat = app.add_subcommand("mat", "matrix arithmetic over a chain ring");
    c_mat->require_subcommand(1);
    std::string mat_file, mat_by;
    int mat_to = 0;
    for (const char* op : {"det", "inv", "conj", "reduce", "section", "commutant"}) {
        auto* sc = c_mat->add_subcommand(op, std::string("matrix ") + op);
        sc->add_option("matrix", mat_file, "matrix JSON file")->required();
        if (std::string(op) == "conj")
            sc->add_option("--by", mat_by, "conjugating matrix JSON file")->required();
        if (std::string(op) == "reduce" || std::string(op) == "section")
            sc->add_option("--to", mat_to, "target nilpotency length")->required();
        std::string opname = op;
        sc->callback([&, opname] {
            if (opname == "det") run_mat_det(mat_file);
            else if (opname == "inv") run_mat_inv(mat_file);
            else if (opname == "conj") run_mat_conj(mat_file, mat_by);
            else if (opname == "reduce") run_mat_level_change(mat_file, mat_to, false);
            else if (opname == "section") run_mat_level_change(mat_file, mat_to, true);
            else run_mat_commutant(mat_file);
        });
    }

    // jcf
    std::string jcf_file;
    auto* c_jcf = app.add_subcommand("jcf", "residue Jordan form and its canonical lift");
    c_jcf->add_option("matrix", jcf_file, "matrix JSON file")->required();
    c_jcf->callback([&] { run_jcf(jcf_file); });

    // centralizer
    std::string cen_file;
    bool cen_units = false, cen_center = false;
    long long cen_budget = 0;
    auto* c_cen = app.add_subcommand("centralizer", "centralizer module of a matrix");
    c_cen->add_option("matrix", cen_file, "matrix JSON file")->required();
    c_cen->add_flag("--units", cen_units, "also count the invertible centralizer elements");
    c_cen->add_flag("--center", cen_center, "also measure the center of the centralizer");
    c_cen->add_option("--budget", cen_budget, "cap on enumerated elements");
    c_cen->callback([&] { run_centralizer(cen_file, cen_units, cen_center, cen_budget); });

    // stable
    std::string st_file;
    long long st_budget = 0;
    auto* c_st = app.add_subcommand("stable", "decide stability and print the certificate");
    c_st->add_option("matrix", st_file, "matrix JSON file")->required();
    c_st->add_option("--budget", st_budget, "cap on conjugates searched");
    c_st->callback([&] { run_stable(st_file, st_budget); });

    // char
    auto* c_char = app.add_subcommand("char", "congruence-kernel characters");
    c_char->require_subcommand(1);
    std::string char_file;
    long long char_budget = 0;
    for (const char* op : {"eval", "orbit", "stabilizer"}) {
        auto* sc = c_char->add_subcommand(op, std::string("character ") + op);
        sc->add_option("input", char_file, "character JSON file (ring, n, level, M[, element])")
            ->required();
        sc->add_option("--budget", char_budget, "cap on group enumeration");
        std::string opname = op;
        sc->callback([&, opname] { run_char(opname, char_file, char_budget); });
    }

    // heis
    auto* c_heis = app.add_subcommand("heis", "commutator form, isotropic data, and lifts");
    c_heis->require_subcommand(1);
    std::string heis_file;
    long long heis_budget = 0;
    for (const char* op : {"form", "isotropic", "lift", "induce", "stabilizer"}) {
        auto* sc = c_heis->add_subcommand(op, std::string("lift ") + op);
        sc->add_option("matrix", heis_file, "matrix JSON file over the half-length ring")
            ->required();
        sc->add_option("--budget", heis_budget, "cap on group enumeration");
        std::string opname = op;
        sc->callback([&, opname] { run_heis(opname, heis_file, heis_budget); });
    }

    // group
    auto* c_group = app.add_subcommand("group", "brute-force data for the full matrix group");
    c_group->require_subcommand(1);
    RingArgs group_ring;
    int group_n = 2;
    long long group_budget = 0;
    for (const char* op : {"order", "classes", "commutator", "sylow"}) {
        auto* sc = c_group->add_subcommand(op, std::string("group ") + op);
        group_ring.attach(sc);
        sc->add_option("--n", group_n, "matrix size (default 2)");
        sc->add_option("--budget", group_budget, "cap on group enumeration");
        std::string opname = op;
        sc->callback([&, opname] { run_group(opname, group_ring, group_n, group_budget); });
    }

    // verify
    auto* c_verify = app.add_subcommand("verify", "run a certified verification suite");
    c_verify->require_subcommand(1);
    RingArgs verify_ring;
    int verify_n = 2;
    std::string verify_mat;
    long long verify_samples = 10000, verify_budget = 0;
    for (const char* op : {"theorem-a", "theorem-b", "r2-complete", "hill", "det-lemma"}) {
        auto* sc = c_verify->add_subcommand(op, std::string("suite ") + op);
        verify_ring.attach(sc);
        sc->add_option("--n", verify_n, "matrix size (default 2)");
        if (std::string(op) == "theorem-a" || std::string(op) == "theorem-b")
            sc->add_option("--mat", verify_mat,
                           "single instance matrix JSON over the half-length ring; omit to sweep");
        if (std::string(op) == "det-lemma")
            sc->add_option("--samples", verify_samples, "sample count when not exhaustive");
        sc->add_option("--budget", verify_budget, "cap on enumerated elements");
        std::string opname = op;
        sc->callback([&, opname] {
            run_verify(opname, verify_ring, verify_n, verify_mat, verify_samples, verify_budget);
        });
    }

    // corpus
    auto* c_corpus = app.add_subcommand("corpus", "bundled instance files");
    c_corpus->require_subcommand(1);
    std::string corpus_name;
    auto* c_list = c_corpus->add_subcommand("list", "list the bundled instances");
    c_list->callback([&] { run_corpus("list", ""); });
    auto* c_show = c_corpus->add_subcommand("show", "print one bundled instance");
    c_show->add_option("name", corpus_name, "corpus entry name")->required();
    c_show->callback([&] { run_corpus("show", corpus_name); });

    // let the global --json/--threads/--seedless flags appear after a subcommand
    std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
        for (CLI::App* s : a->get_subcommands([](const CLI::App*) { return true; })) {
            s->fallthrough();
            fall(s);
        }
    };
    fall(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const NotInvertibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return g_exit;
}
