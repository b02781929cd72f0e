#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "bao/verify.hpp"

#include <json.hpp>

using namespace bao;

namespace {

const AtomStructure& k2_structure() {
    static const AtomStructure s = build_eta(build_standard(StandardGraph::complete, 2), 3);
    return s;
}

const AtomStructure& ten_atoms() {
    static const AtomStructure s = build_eta(build_standard(StandardGraph::edgeless, 1), 3);
    return s;
}

std::size_t count_status(const std::vector<CheckReport>& rs, CheckReport::Status st) {
    std::size_t c = 0;
    for (const auto& r : rs)
        if (r.status == st) ++c;
    return c;
}

const CheckReport& find_report(const std::vector<CheckReport>& rs, const std::string& id) {
    for (const auto& r : rs)
        if (r.id == id) return r;
    FAIL("no report with id " + id);
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("lemma suite passes on healthy structures") {
    const auto reports = check_lemma_suite(k2_structure());
    CHECK(reports.size() == 7);
    CHECK(count_status(reports, CheckReport::Status::fail) == 0);
    CHECK(count_status(reports, CheckReport::Status::skip) == 0);
    CHECK(find_report(reports, "closure.permutations").items == 6 * 181);
    CHECK(find_report(reports, "swap.exchange").status == CheckReport::Status::pass);
}

TEST_CASE("lemma suite respects the quadratic-scan budget") {
    const auto reports = check_lemma_suite(k2_structure(), 100);
    CHECK(find_report(reports, "invariants.atoms").status == CheckReport::Status::pass);
    CHECK(find_report(reports, "closure.permutations").status == CheckReport::Status::pass);
    for (const char* id : {"swap.identity", "swap.symmetry", "swap.functional",
                           "swap.exchange", "swap.bijective"}) {
        const auto& r = find_report(reports, id);
        CHECK(r.status == CheckReport::Status::skip);
        CHECK(r.details.find("budget 100") != std::string::npos);
    }
}

TEST_CASE("a mutated atom structure fails the lemma suite with a reproducible witness") {
    std::string dump = structure_to_text(k2_structure());
    const std::string original = "atom 0 part 000 K - - -";
    const std::string mutated = "atom 0 part 011 K - - -";
    REQUIRE(dump.find(original) != std::string::npos);
    dump.replace(dump.find(original), original.size(), mutated);
    const AtomStructure damaged = load_structure(dump);

    const auto reports = check_lemma_suite(damaged);
    CHECK(find_report(reports, "invariants.atoms").status == CheckReport::Status::fail);
    CHECK(find_report(reports, "closure.permutations").status == CheckReport::Status::fail);
    const auto& bij = find_report(reports, "swap.bijective");
    REQUIRE(bij.status == CheckReport::Status::fail);
    CHECK(bij.counterexample.find("atom 0") != std::string::npos);

    // the witness re-verifies: atom 0 really has no swap partner under (0,1)
    bool has_partner = false;
    for (std::size_t b = 0; b < damaged.size(); ++b)
        if (equiv_swap(damaged.atom(0), damaged.atom(b), 0, 1)) has_partner = true;
    CHECK_FALSE(has_partner);

    // determinism of the whole report
    const auto again = check_lemma_suite(damaged);
    REQUIRE(again.size() == reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CHECK(report_line(again[i]) == report_line(reports[i]));
    }
}

TEST_CASE("axiom suite on a structure with total atoms") {
    const ComplexAlgebra a(k2_structure());
    const auto reports = check_axiom_suite(a, "qea", Strategy::random(500, 3));
    CHECK(reports.size() == 111);
    CHECK(count_status(reports, CheckReport::Status::fail) == 0);
    // the cylindric sub-suite alone
    const auto ca = check_axiom_suite(a, "ca", Strategy::random(500, 3));
    CHECK(ca.size() == 48);
    CHECK(count_status(ca, CheckReport::Status::fail) == 0);
}

// The degenerate one-node structure has no total-placement atoms under the
// transparent copy rule, and the commuting law for distinct cylindrifications
// fails there; everything else in the suite holds.
TEST_CASE("axiom suite pinpoints the commuting-law failure on the degenerate structure") {
    const ComplexAlgebra a(ten_atoms());
    const auto reports = check_axiom_suite(a, "qea", Strategy::exhaustive());
    CHECK(reports.size() == 111);
    std::size_t fails = 0;
    for (const auto& r : reports) {
        if (r.status == CheckReport::Status::fail) {
            ++fails;
            CHECK(r.anchor == "C4-commute");
            CHECK_FALSE(r.counterexample.empty());
        }
    }
    CHECK(fails == 6); // exactly the instances with two distinct indices
}

TEST_CASE("axiom suite under the clique copy rule passes on the one-node graph") {
    const ComplexAlgebra a(
        build_eta(build_standard(StandardGraph::edgeless, 1), 3, CopyRule::clique));
    const auto reports = check_axiom_suite(a, "qea", Strategy::random(800, 5));
    CHECK(count_status(reports, CheckReport::Status::fail) == 0);
}

TEST_CASE("full suites pass on K2 under the clique copy rule") {
    const AtomStructure s = build_eta(build_standard(StandardGraph::complete, 2), 3, CopyRule::clique);
    CHECK(s.size() == 229); // 210 total placements + 18 pair-block + 1 trivial
    const auto fr = full_report(s, Strategy::random(400, 6));
    CHECK(fr.status == 0);
}

TEST_CASE("structural checks pass on healthy structures") {
    for (const AtomStructure* s : {&ten_atoms(), &k2_structure()}) {
        const ComplexAlgebra a(*s);
        const auto reports = check_structural(a);
        CHECK(count_status(reports, CheckReport::Status::fail) == 0);
        CHECK(count_status(reports, CheckReport::Status::skip) == 0);
        // no atom of these structures has a free dimension, so the
        // conditional decomposition is exercised on zero tuples
        CHECK(find_report(reports, "structural.decomposition").items == 0);
        CHECK(find_report(reports, "structural.simplicity").status == CheckReport::Status::pass);
    }
}

TEST_CASE("structural checks skip pointwise comparisons over budget") {
    const ComplexAlgebra a(k2_structure());
    const auto reports = check_structural(a, 50);
    CHECK(find_report(reports, "structural.atcm").status == CheckReport::Status::skip);
    CHECK(find_report(reports, "structural.frame").status == CheckReport::Status::skip);
    CHECK(find_report(reports, "structural.simplicity").status == CheckReport::Status::pass);
}

TEST_CASE("structural checks catch a truncated structure") {
    std::vector<Atom> kept;
    for (const auto& at : k2_structure().atoms())
        if (at.part.block_count() != 2) kept.push_back(at);
    const ComplexAlgebra a(AtomStructure(3, CopyRule::transparent, Signature::qea, kept,
                                         k2_structure().source_graph()));
    const auto reports = check_structural(a);
    const auto& simple = find_report(reports, "structural.simplicity");
    REQUIRE(simple.status == CheckReport::Status::fail);
    CHECK(simple.counterexample.find("atom 0") != std::string::npos);
}

TEST_CASE("full report on a healthy graph is green and deterministic") {
    const Graph k2 = build_standard(StandardGraph::complete, 2);
    const auto fr1 = full_report(k2, 3, CopyRule::transparent, Strategy::random(300, 1));
    CHECK(fr1.status == 0);
    CHECK(count_status(fr1.reports, CheckReport::Status::fail) == 0);

    const auto fr2 = full_report(k2, 3, CopyRule::transparent, Strategy::random(300, 1));
    std::ostringstream t1, t2;
    write_reports(t1, fr1.reports);
    write_reports(t2, fr2.reports);
    CHECK(t1.str() == t2.str());

    // ids are emitted in sorted order
    for (std::size_t i = 0; i + 1 < fr1.reports.size(); ++i)
        CHECK(fr1.reports[i].id <= fr1.reports[i + 1].id);
}

TEST_CASE("full report on a damaged dump is red") {
    std::string dump = structure_to_text(k2_structure());
    const std::string original = "atom 0 part 000 K - - -";
    dump.replace(dump.find(original), original.size(), "atom 0 part 011 K - - -");
    const auto fr = full_report(load_structure(dump), Strategy::random(200, 1));
    CHECK(fr.status == 1);
    bool some_counterexample = false;
    for (const auto& r : fr.reports)
        if (r.status == CheckReport::Status::fail && !r.counterexample.empty())
            some_counterexample = true;
    CHECK(some_counterexample);
}

TEST_CASE("report serialization") {
    const auto reports = check_structural(ComplexAlgebra(ten_atoms()));
    std::ostringstream text;
    write_reports(text, reports);
    CHECK(text.str().find("CHECK structural.simplicity PASS") != std::string::npos);
    CHECK(text.str().find("SUMMARY pass=") != std::string::npos);

    const auto parsed = nlohmann::json::parse(reports_to_json(reports));
    REQUIRE(parsed.is_array());
    CHECK(parsed.size() == reports.size());
    CHECK(parsed[0].contains("id"));
    CHECK(parsed[0].contains("status"));
    CHECK(parsed[0].contains("counterexample"));
    // elapsed time is intentionally absent: reports must be byte-identical
    CHECK_FALSE(parsed[0].contains("seconds"));
}
