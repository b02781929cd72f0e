#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bao/complex_algebra.hpp"

using namespace bao;

// Canonical atom indices over eta(one-node edgeless graph, n=3):
//   0        alpha: single block, empty placement
//   1,2,3    pair block {0,1}, both slots at copy v = 0,1,2
//   4,5,6    pair block {0,2}
//   7,8,9    pair block {1,2}
namespace {

const AtomStructure& ten_atoms() {
    static const AtomStructure s = build_eta(build_standard(StandardGraph::edgeless, 1), 3);
    return s;
}

const AtomStructure& k2_structure() {
    static const AtomStructure s = build_eta(build_standard(StandardGraph::complete, 2), 3);
    return s;
}

Element random_element(const ComplexAlgebra& a, std::mt19937_64& rng) {
    std::vector<std::uint64_t> words((a.atom_count() + 63) / 64);
    for (auto& w : words) w = rng();
    return a.from_words(words);
}

} // namespace

TEST_CASE("boolean structure of elements") {
    const ComplexAlgebra a(ten_atoms());
    CHECK(a.bottom().none());
    CHECK(a.top().count() == 10);
    CHECK((~a.top()) == a.bottom());

    const Element x = a.from_atoms({0, 3, 7});
    const Element y = a.from_atoms({3, 4});
    CHECK((x | y) == a.from_atoms({0, 3, 4, 7}));
    CHECK((x & y) == a.from_atoms({3}));
    CHECK((x - y) == a.from_atoms({0, 7}));
    CHECK((~x).count() == 7);
    CHECK(x.leq(a.top()));
    CHECK_FALSE(x.leq(y));
    CHECK(x.to_string() == "{0, 3, 7}");
}

TEST_CASE("elements of different algebras never combine") {
    const ComplexAlgebra a(ten_atoms());
    const ComplexAlgebra b(k2_structure());
    CHECK_THROWS_AS(a.top() | b.top(), invalid_parameter);
    CHECK_THROWS_AS(a.cyl(0, b.top()), invalid_parameter);
}

TEST_CASE("diagonal elements") {
    const ComplexAlgebra a(ten_atoms());
    CHECK(a.diag(0, 1) == a.from_atoms({0, 1, 2, 3}));
    CHECK(a.diag(0, 2) == a.from_atoms({0, 4, 5, 6}));
    CHECK(a.diag(1, 2) == a.from_atoms({0, 7, 8, 9}));
    CHECK(a.diag(1, 0) == a.diag(0, 1));
    for (int i = 0; i < 3; ++i) CHECK(a.diag(i, i) == a.top());
    CHECK_THROWS_AS(a.diag(0, 3), invalid_parameter);
}

TEST_CASE("cylindrification") {
    const ComplexAlgebra a(ten_atoms());
    const Element alpha = a.singleton(0);

    CHECK(a.cyl(0, a.bottom()) == a.bottom());
    CHECK(a.cyl(2, alpha) == a.from_atoms({0, 1, 2, 3}));
    CHECK(a.cyl(1, alpha) == a.from_atoms({0, 4, 5, 6}));
    CHECK(a.cyl(0, alpha) == a.from_atoms({0, 7, 8, 9}));
    CHECK(a.cyl(2, a.cyl(2, alpha)) == a.cyl(2, alpha));

    std::mt19937_64 rng(17);
    for (int round = 0; round < 20; ++round) {
        const Element x = random_element(a, rng);
        for (int i = 0; i < 3; ++i) {
            const Element cx = a.cyl(i, x);
            CHECK(x.leq(cx));
            CHECK(a.cyl(i, cx) == cx);
        }
    }
}

TEST_CASE("replacement") {
    const ComplexAlgebra a(ten_atoms());
    const Element alpha = a.singleton(0);
    CHECK(a.subst_repl(0, 1, alpha) == a.from_atoms({0, 7, 8, 9}));
    CHECK(a.subst_repl(0, 1, a.bottom()) == a.bottom());
    std::mt19937_64 rng(18);
    for (int round = 0; round < 10; ++round) {
        const Element x = random_element(a, rng);
        for (int i = 0; i < 3; ++i) CHECK(a.subst_repl(i, i, x) == x);
    }
}

TEST_CASE("transposition") {
    const ComplexAlgebra a(ten_atoms());
    CHECK(a.subst_swap(0, 1, a.singleton(4)) == a.singleton(7)); // gamma -> delta
    CHECK(a.subst_swap(0, 1, a.singleton(7)) == a.singleton(4));
    CHECK(a.subst_swap(0, 1, a.singleton(1)) == a.singleton(1)); // block {0,1} fixed

    std::mt19937_64 rng(19);
    for (int round = 0; round < 20; ++round) {
        const Element x = random_element(a, rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                CHECK(a.subst_swap(i, j, a.subst_swap(i, j, x)) == x);
                CHECK(a.subst_swap(i, j, x) == a.subst_swap(j, i, x));
                // boolean endomorphism
                const Element y = random_element(a, rng);
                CHECK(a.subst_swap(i, j, x | y) == (a.subst_swap(i, j, x) | a.subst_swap(i, j, y)));
                CHECK(a.subst_swap(i, j, ~x) == ~a.subst_swap(i, j, x));
            }
    }
}

TEST_CASE("dimension sets") {
    const ComplexAlgebra a(ten_atoms());
    CHECK(a.dimension_set(a.top()).empty());
    CHECK(a.dimension_set(a.bottom()).empty());
    CHECK(a.dimension_set(a.singleton(0)) == std::vector<int>{0, 1, 2});
    // a cylindrified element never depends on the cylindrified coordinate
    std::mt19937_64 rng(20);
    for (int round = 0; round < 10; ++round) {
        const Element x = random_element(a, rng);
        for (int i = 0; i < 3; ++i) {
            const auto ds = a.dimension_set(a.cyl(i, x));
            CHECK(std::find(ds.begin(), ds.end(), i) == ds.end());
        }
    }
}

TEST_CASE("complete additivity of the operators", "[property]") {
    const AtomStructure& s = k2_structure();
    const ComplexAlgebra a(s);
    std::mt19937_64 rng(21);
    for (int round = 0; round < 8; ++round) {
        const Element x = random_element(a, rng);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Element cyl_join = a.bottom(), repl_join = a.bottom(), swap_join = a.bottom();
                x.for_each_member([&](std::size_t b) {
                    cyl_join = cyl_join | a.cyl(i, a.singleton(b));
                    repl_join = repl_join | a.subst_repl(i, j, a.singleton(b));
                    swap_join = swap_join | a.subst_swap(i, j, a.singleton(b));
                });
                CHECK(a.cyl(i, x) == cyl_join);
                CHECK(a.subst_repl(i, j, x) == repl_join);
                CHECK(a.subst_swap(i, j, x) == swap_join);
            }
    }
}

TEST_CASE("atom meet: the cylinders of an atom intersect to the atom alone") {
    for (const AtomStructure* s : {&ten_atoms(), &k2_structure()}) {
        const ComplexAlgebra a(*s);
        for (std::size_t b = 0; b < a.atom_count(); ++b) {
            Element meet = a.top();
            for (int i = 0; i < a.dim(); ++i) meet = meet & a.cyl(i, a.singleton(b));
            CHECK(meet == a.singleton(b));
        }
    }
}

TEST_CASE("generated subalgebra") {
    const ComplexAlgebra a(ten_atoms());

    SECTION("all singletons generate the full powerset") {
        std::vector<Element> gens;
        for (std::size_t b = 0; b < 10; ++b) gens.push_back(a.singleton(b));
        const auto closure = generated_subalgebra(a, gens, 2048);
        CHECK(closure.size() == 1024);
    }

    SECTION("the empty generator set yields the diagonal region algebra") {
        const auto closure = generated_subalgebra(a, {});
        CHECK(closure.size() == 16);
        CHECK(std::find(closure.begin(), closure.end(), a.diag(0, 1)) != closure.end());
        CHECK(std::find(closure.begin(), closure.end(), a.singleton(0)) != closure.end());

        const auto with_top = generated_subalgebra(a, {a.top()});
        CHECK(with_top == closure);
    }

    SECTION("closure is closed under the operations") {
        const auto closure = generated_subalgebra(a, {});
        auto contains = [&](const Element& e) {
            return std::find(closure.begin(), closure.end(), e) != closure.end();
        };
        for (const auto& x : closure) {
            CHECK(contains(~x));
            for (int i = 0; i < 3; ++i) CHECK(contains(a.cyl(i, x)));
            for (const auto& y : closure) CHECK(contains(x | y));
        }
    }

    SECTION("cap is enforced") {
        std::vector<Element> gens;
        for (std::size_t b = 0; b < 10; ++b) gens.push_back(a.singleton(b));
        CHECK_THROWS_AS(generated_subalgebra(a, gens, 100), resource_limit);
    }
}

TEST_CASE("simplicity witness") {
    CHECK_FALSE(is_simple_witness(ComplexAlgebra(ten_atoms())).has_value());
    CHECK_FALSE(is_simple_witness(ComplexAlgebra(k2_structure())).has_value());

    SECTION("negative control: deleting the pair-block atoms breaks the sweep") {
        std::vector<Atom> kept;
        for (const auto& at : k2_structure().atoms())
            if (at.part.block_count() != 2) kept.push_back(at);
        REQUIRE(kept.size() == k2_structure().size() - 18);
        const AtomStructure truncated(3, CopyRule::transparent, Signature::qea, kept,
                                      k2_structure().source_graph());
        const ComplexAlgebra a(truncated);
        const auto failing = is_simple_witness(a);
        REQUIRE(failing.has_value());
        CHECK(*failing == 0); // the single-block atom is stranded
    }
}

TEST_CASE("ultrafilter frame agrees with the structure") {
    for (const AtomStructure* s : {&ten_atoms(), &k2_structure()}) {
        const ComplexAlgebra a(*s);
        const auto frame = ultrafilter_frame(a);
        CHECK_FALSE(frame.agrees_with(*s).has_value());
    }
}

TEST_CASE("reconstructed relations agree with the structure predicates") {
    for (const AtomStructure* s : {&ten_atoms(), &k2_structure()}) {
        const ComplexAlgebra a(*s);
        CHECK_FALSE(atcm_agreement_failure(a).has_value());
    }
}

TEST_CASE("table diagnostics are empty for healthy structures") {
    CHECK(ComplexAlgebra(ten_atoms()).table_diagnostics().empty());
    CHECK(ComplexAlgebra(k2_structure()).table_diagnostics().empty());
}

TEST_CASE("operators honor the signature of a reduct") {
    const auto df = reduct(ten_atoms(), Signature::df);
    const ComplexAlgebra a(df);
    CHECK_NOTHROW(a.cyl(0, a.top()));
    CHECK_THROWS_AS(a.diag(0, 1), invalid_parameter);
    CHECK_THROWS_AS(a.subst_repl(0, 1, a.top()), invalid_parameter);
    CHECK_THROWS_AS(a.subst_swap(0, 1, a.top()), invalid_parameter);

    const auto qa = reduct(ten_atoms(), Signature::qa);
    const ComplexAlgebra b(qa);
    CHECK_NOTHROW(b.subst_repl(0, 1, b.top()));
    CHECK_NOTHROW(b.subst_swap(0, 1, b.top()));
    CHECK_THROWS_AS(b.diag(0, 1), invalid_parameter);
}
