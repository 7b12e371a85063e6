#include "doctest.h"

#include "mudw/testkit.hpp"

using namespace mudw;

namespace {

const std::vector<Letter> kAB{"a", "b"};

std::size_t bell(std::size_t n) {
    // Bell triangle.
    std::vector<std::size_t> row{1};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> next{row.back()};
        for (std::size_t x : row) next.push_back(next.back() + x);
        row = next;
    }
    return row.front();
}

}  // namespace

TEST_CASE("equivalence with itself visits every word") {
    Acceptor a = formulaAcceptor(parse("Fg (a & Xc b)"));
    for (std::size_t maxLen = 0; maxLen <= 5; ++maxLen) {
        auto r = equivalenceCheck(a, a, kAB, maxLen);
        CHECK(!r.counterexample);
        std::size_t expected = 0, pow = 1;
        for (std::size_t m = 0; m <= maxLen; ++m, pow *= 2) expected += pow * bell(m);
        CHECK(r.visited == expected);
    }
    CHECK(bell(7) == 877);
}

TEST_CASE("finite-word eventually as a greatest fixpoint") {
    auto r = equivalenceCheck(formulaAcceptor(parse("Fg a")), formulaAcceptor(parse("nu x. (a | Xg x)")), kAB, 5);
    CHECK(!r.counterexample);
}

TEST_CASE("a formula against its dual disagrees on every nonempty word") {
    Formula f = parse("mu x. (Xg Xc x | a)");
    Acceptor a = formulaAcceptor(f), b = formulaAcceptor(dualize(f));
    auto r = equivalenceCheck(a, b, kAB, 4);
    REQUIRE(r.counterexample);
    CHECK(r.counterexample->word.size() == 1);
    CHECK(r.counterexample->lhs != r.counterexample->rhs);
    forEachWordUpTo(kAB, 4, [&](const DataWord& w) {
        if (!w.empty()) CHECK(a.accepts(w) != b.accepts(w));
        return true;
    });
}

TEST_CASE("formula against its data automaton") {
    for (const char* t : {"Gg a", "nu x. (Xg Yc x)", "Fc b"}) {
        CAPTURE(t);
        Formula f = parse(t);
        Formula nf = isNuOnly(f) ? f : brToNu(f);
        auto r = equivalenceCheck(formulaAcceptor(f), automatonAcceptor(fromNuFormula(nf)), kAB, 4);
        CHECK(!r.counterexample);
    }
}

TEST_CASE("acceptor backends agree") {
    Dltl d = parseDltl("Fc (a & Xg b)");
    CHECK(!equivalenceCheck(dltlAcceptor(d), formulaAcceptor(dltlToMu(d)), kAB, 5).counterexample);
    Fo2 f = parseFo2("E y. (x~y & x<y & b(y))");
    CHECK(!equivalenceCheck(fo2Acceptor(f), dltlAcceptor(fo2ToUdltl(f)), kAB, 5).counterexample);
    Formula g = parse("Fg (a & Xc b)");
    CHECK(!equivalenceCheck(cascadeAcceptor(bmaToCascade(g)), formulaAcceptor(g), kAB, 4).counterexample);
}

TEST_CASE("shrink finds the first disagreement") {
    Acceptor a = formulaAcceptor(parse("Fg (b & Xg b)")), none = formulaAcceptor(mkFalse());
    Counterexample big{parseWord("a:1 a:2 b:1 b:3 a:1"), true, false};
    Counterexample s = shrink(big, a, none);
    CHECK(toText(s.word) == "b:1 b:1");
    CHECK(s.lhs != s.rhs);
    CHECK(s.word.size() <= big.word.size());
    Counterexample again = shrink(s, a, none);
    CHECK(again.word == s.word);
}

TEST_CASE("boundedSatisfy") {
    auto w = boundedSatisfy(formulaAcceptor(parse("a & Xc b")), kAB, 4);
    REQUIRE(w);
    CHECK(toText(*w) == "a:1 b:1");
    CHECK(!boundedSatisfy(formulaAcceptor(parse("a & b")), kAB, 4));
}

TEST_CASE("random formulas are deterministic and stay in their fragment") {
    const std::vector<std::string> specs{"any",         "nuOnly",    "muOnly",      "BR",
                                         "BMA",         "pure:future", "pure:past", "pure:global",
                                         "pure:class"};
    for (const auto& s : specs) {
        CAPTURE(s);
        FragmentSpec fs = parseFragment(s);
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            Formula f = randomFormula(fs, 4, seed);
            CHECK(isSentence(f));
            CHECK(inFragment(f, fs));
            CHECK(structurallyEqual(f, randomFormula(fs, 4, seed)));
        }
    }
    CHECK(!isNuOnly(parse("mu x. (a | Xg x)")));
    auto br = classify(randomFormula(parseFragment("BR"), 3, 9));
    CHECK(br.br.has_value());
    CHECK(isNuOnly(randomFormula(parseFragment("nuOnly"), 5, 1)));
    CHECK_THROWS_AS(parseFragment("pure:sideways"), InputError);
    // Different seeds eventually differ.
    bool differ = false;
    for (std::uint64_t seed = 1; seed < 10 && !differ; ++seed)
        differ = !structurallyEqual(randomFormula({}, 4, 0), randomFormula({}, 4, seed));
    CHECK(differ);
}
