#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "chainrep/verify.hpp"

using namespace chainrep;
using json = nlohmann::json;

namespace {

const RingSpec* Z4() { return RingSpec::get(RingKind::mixed, 2, 1, 2); }
const RingSpec* Z9() { return RingSpec::get(RingKind::mixed, 3, 1, 2); }
const RingSpec* Z27() { return RingSpec::get(RingKind::mixed, 3, 1, 3); }
const RingSpec* E4() { return RingSpec::get(RingKind::equal, 2, 1, 2); }
const RingSpec* E27() { return RingSpec::get(RingKind::equal, 3, 1, 3); }

RMat mat2(const RingSpec* R, long long a, long long b, long long c, long long d) {
    RMat m(R, 2);
    m.at(0, 0) = R->from_int(a);
    m.at(0, 1) = R->from_int(b);
    m.at(1, 0) = R->from_int(c);
    m.at(1, 1) = R->from_int(d);
    return m;
}

bool row_passes(const VerificationReport& r, const std::string& name,
                const std::string& expected) {
    for (const CheckResult& c : r.checks)
        if (c.name == name) return c.pass && c.expected == expected;
    return false;
}

bool note_has(const VerificationReport& r, const std::string& s) {
    for (const std::string& n : r.notes)
        if (n.find(s) != std::string::npos) return true;
    return false;
}

std::string report_to_text(const VerificationReport& r) {
    std::string s = r.suite + " | " + r.instance + "\n";
    for (const CheckResult& c : r.checks)
        s += std::string(c.pass ? "ok " : "FAIL ") + c.name + ": expected " + c.expected +
             " observed " + c.observed + "\n";
    for (const std::string& n : r.notes) s += "note: " + n + "\n";
    return s;
}

// ---- command-line front end, exercised as a subprocess -------------------

std::string cli_path() {
    if (const char* p = std::getenv("CHAINREP_BIN")) return p;
    return "./chainrep";
}

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    namespace fs = std::filesystem;
    static int seq = 0;
    fs::path cap = fs::temp_directory_path() / ("chainrep_test_" + std::to_string(++seq) + ".out");
    std::string cmd = cli_path() + " " + args + " > " + cap.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(cap);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    fs::remove(cap);
    return r;
}

std::filesystem::path temp_json(const std::string& stem, const std::string& body) {
    namespace fs = std::filesystem;
    fs::path p = fs::temp_directory_path() / (stem + ".json");
    std::ofstream(p) << body;
    return p;
}

// materialize a bundled instance through the binary itself so the test does
// not depend on the source-tree location
std::filesystem::path corpus_file(const std::string& name) {
    CliRun r = run_cli("corpus show " + name);
    REQUIRE(r.code == 0);
    return temp_json("chainrep_corpus_" + name, r.out);
}

} // namespace

TEST_CASE("determinant congruence identities hold on small rings") {
    for (const RingSpec* R : {Z4(), E4()}) {
        VerificationReport rep = verify_det_lemma(R, 2);
        INFO(report_to_text(rep));
        REQUIRE(rep.ok());
        REQUIRE(note_has(rep, "exhaustive over all 256"));
        REQUIRE(row_passes(rep, "exact identity at r = 2l'", "256"));
    }
    VerificationReport rep = verify_det_lemma(Z27(), 2, 10000);
    INFO(report_to_text(rep));
    REQUIRE(rep.ok());
    REQUIRE(row_passes(rep, "congruence modulo pi^{2l'}", "531441"));
    REQUIRE(row_passes(rep, "exact quadratic identity for n = 2", "531441"));
}

TEST_CASE("blockwise centralizer products close under commutators") {
    std::vector<RMat> blocks;
    blocks.push_back(RMat::scalar(Z9(), 1, Z9()->from_int(0)));
    blocks.push_back(RMat::scalar(Z9(), 1, Z9()->from_int(1)));
    VerificationReport rep = verify_commutator_blocks(Z9(), blocks);
    INFO(report_to_text(rep));
    REQUIRE(rep.ok());
}

TEST_CASE("half-length extension verifies on single residue classes") {
    {
        EvenLevelContext C = even_level_context(Z4(), 2);
        InducedFamily fam = theorem_A_instance(C, mat2(C.Rres, 0, 1, 0, 0));
        INFO(report_to_text(fam.report));
        REQUIRE(fam.report.ok());
        REQUIRE(fam.induced.size() >= 1);
    }
    {
        EvenLevelContext C = even_level_context(Z9(), 2);
        InducedFamily fam = theorem_A_instance(C, mat2(C.Rres, 0, 1, 1, 1));
        INFO(report_to_text(fam.report));
        REQUIRE(fam.report.ok());
    }
}

TEST_CASE("half-length sweep covers every stable residue class") {
    VerificationReport rep = verify_theorem_A_sweep(Z4(), 2);
    INFO(report_to_text(rep));
    REQUIRE(rep.ok());
    REQUIRE(row_passes(rep, "stable residue classes verified", "6"));
}

TEST_CASE("length-two induction exhausts the irreducible characters") {
    VerificationReport a = verify_all_stable_r2(Z4(), 2);
    INFO(report_to_text(a));
    REQUIRE(a.ok());
    REQUIRE(row_passes(a, "degree-square sum equals the group order", "96"));

    VerificationReport b = verify_all_stable_r2(Z9(), 2);
    INFO(report_to_text(b));
    REQUIRE(b.ok());
    REQUIRE(row_passes(b, "degree-square sum equals the group order", "3888"));

    VerificationReport c = verify_all_stable_r2(E4(), 2);
    INFO(report_to_text(c));
    REQUIRE(c.ok());
    REQUIRE(row_passes(c, "degree-square sum equals the group order", "96"));
}

TEST_CASE("odd-level extension dispatches across residue types") {
    OddLevelContext C = odd_level_context(Z27(), 2);
    // scalar, nilpotent, split semisimple, and nonsplit semisimple residues
    // take the three different extension routes
    for (const RMat& M : {mat2(C.Rl, 1, 0, 0, 1), mat2(C.Rl, 0, 1, 0, 0),
                          mat2(C.Rl, 1, 0, 0, 0), mat2(C.Rl, 0, 1, 1, 1)}) {
        VerificationReport rep = theorem_B_instance(C, M);
        INFO(report_to_text(rep));
        REQUIRE(rep.ok());
    }
}

TEST_CASE("odd-level extension works in equal characteristic") {
    OddLevelContext C = odd_level_context(E27(), 2);
    for (const RMat& M : {mat2(C.Rl, 1, 0, 0, 1), mat2(C.Rl, 0, 1, 1, 1)}) {
        VerificationReport rep = theorem_B_instance(C, M);
        INFO(report_to_text(rep));
        REQUIRE(rep.ok());
    }
}

TEST_CASE("lift stabilizer is strictly smaller than the kernel stabilizer") {
    for (const RingSpec* R : {Z27(), E27()}) {
        VerificationReport rep = verify_hill_counterexample(R, 2);
        INFO(report_to_text(rep));
        REQUIRE(rep.ok());
        REQUIRE(row_passes(rep, "lift stabilizer equals the centralizer preimage", "26244"));
        REQUIRE(row_passes(rep, "containment is strict", "true"));
        REQUIRE(note_has(rep, "containment index: 12"));
    }
}

TEST_CASE("cli binary is present") {
    INFO("expected at " << cli_path() << " (override with CHAINREP_BIN)");
    REQUIRE(std::filesystem::exists(cli_path()));
}

TEST_CASE("cli classifies the bundled instances") {
    auto notstable = corpus_file("regular-not-stable");
    CliRun r = run_cli("stable " + notstable.string() + " --json");
    REQUIRE(r.code == 0);
    REQUIRE(json::parse(r.out).at("verdict") == "notStable");

    auto nonsplit = corpus_file("stable-z9-nonsplit");
    r = run_cli("stable " + nonsplit.string() + " --json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("verdict") == "stable");
    REQUIRE(j.at("splitDegree") == 2);
}

TEST_CASE("cli verification suites succeed and fail with the right codes") {
    CliRun ok = run_cli("verify r2-complete --ring z4");
    REQUIRE(ok.code == 0);
    REQUIRE(ok.out.find("PASS") != std::string::npos);

    CliRun hill = run_cli("verify hill --p 3 --n 2 --r 3 --json");
    REQUIRE(hill.code == 0);
    json hj = json::parse(hill.out);
    REQUIRE(hj.at("pass") == true);

    // a non-stable lift must make the odd-level suite report failure
    auto hillmat = corpus_file("hill-family");
    CliRun bad = run_cli("verify theorem-b --mat " + hillmat.string());
    REQUIRE(bad.code == 1);

    CliRun usage = run_cli("stable");
    REQUIRE(usage.code == 2);

    CliRun budget = run_cli("group order --ring z9 --n 2 --budget 5");
    REQUIRE(budget.code == 3);
}

TEST_CASE("cli output is deterministic and thread count does not change it") {
    CliRun a = run_cli("verify det-lemma --p 2 --n 2 --r 2 --json");
    CliRun b = run_cli("verify det-lemma --p 2 --n 2 --r 2 --json");
    CliRun c = run_cli("verify det-lemma --p 2 --n 2 --r 2 --json --threads 4");
    REQUIRE(a.code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(a.out == c.out);
}

TEST_CASE("cli matrix utilities agree with the library") {
    auto nonsplit = corpus_file("stable-z9-nonsplit");
    CliRun det = run_cli("mat det " + nonsplit.string() + " --json");
    REQUIRE(det.code == 0);
    REQUIRE(json::parse(det.out).at("unit") == true);

    CliRun jcf = run_cli("jcf " + nonsplit.string() + " --json");
    REQUIRE(jcf.code == 0);
    REQUIRE(json::parse(jcf.out).at("splitDegree") == 2);

    // the split instance has determinant zero, so inversion must fail cleanly
    auto split = corpus_file("stable-z9-split");
    CliRun inv = run_cli("mat inv " + split.string() + " --json");
    REQUIRE(inv.code == 1);
    REQUIRE(json::parse(inv.out).at("invertible") == false);
}

TEST_CASE("cli evaluates congruence-kernel characters") {
    auto in = temp_json("chainrep_char_eval",
                        R"({"ring":{"kind":"mixed","p":2,"m":1,"r":2},"n":2,"level":1,)"
                        R"("M":[[1,0],[0,0]],)"
                        R"("element":[[[1,1],[0,1]],[[0,0],[1,1]]]})");
    CliRun r = run_cli("char eval " + in.string() + " --json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("phase").at("num") == 1);
    REQUIRE(j.at("phase").at("den") == 2);
}

TEST_CASE("cli induces the lift with the pinned degree") {
    auto nil = corpus_file("stable-z9-nilpotent");
    CliRun r = run_cli("heis induce " + nil.string() + " --json");
    REQUIRE(r.code == 0);
    REQUIRE(json::parse(r.out).at("degree") == 3);
}

TEST_CASE("cli group order matches the closed formula") {
    CliRun r = run_cli("group order --ring z4 --n 2 --json");
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.at("order") == 96);
    REQUIRE(j.at("orderFormula") == 96);
}

TEST_CASE("cli bundles every instance file") {
    CliRun r = run_cli("corpus list");
    REQUIRE(r.code == 0);
    for (const char* name :
         {"regular-not-stable", "hill-family", "stable-z9-scalar", "stable-z9-nilpotent",
          "stable-z9-split", "stable-z9-nonsplit", "stable-reps-z4", "stable-reps-z9"})
        REQUIRE(r.out.find(name) != std::string::npos);
}
