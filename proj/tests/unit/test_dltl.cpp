#include "doctest.h"

#include <random>

#include "../common/named.hpp"
#include "../common/oracle.hpp"
#include "mudw/dltl.hpp"
#include "mudw/evaluator.hpp"
#include "mudw/fragments.hpp"

using namespace mudw;

namespace {

const std::vector<std::string> kAB{"a", "b"};

std::set<std::size_t> asSet(const PositionSet& p) {
    auto v = p.positions();
    return {v.begin(), v.end()};
}

// Seeded random DLTL over {a, b}.
Dltl randomDltl(std::mt19937& rng, int depth, bool unaryOnly) {
    using namespace dltl;
    int leaf = static_cast<int>(rng() % 5);
    if (depth == 0 || rng() % 4 == 0) {
        switch (leaf) {
            case 0: return dltl::prop("a");
            case 1: return dltl::prop("b");
            case 2: return S();
            case 3: return P();
            default: return rng() % 2 ? tt() : ff();
        }
    }
    switch (rng() % (unaryOnly ? 4 : 5)) {
        case 0: return neg(randomDltl(rng, depth - 1, unaryOnly));
        case 1: return conj(randomDltl(rng, depth - 1, unaryOnly), randomDltl(rng, depth - 1, unaryOnly));
        case 2: return disj(randomDltl(rng, depth - 1, unaryOnly), randomDltl(rng, depth - 1, unaryOnly));
        case 3: return unary(static_cast<DUnary>(rng() % 8), randomDltl(rng, depth - 1, unaryOnly));
        default:
            return binary(static_cast<DBinary>(rng() % 4), randomDltl(rng, depth - 1, unaryOnly),
                          randomDltl(rng, depth - 1, unaryOnly));
    }
}

// Direct definitions of the not-in-class modalities.
bool notInClassAt(const DataWord& w, const std::set<std::size_t>& phi, NotInClass k, std::size_t i) {
    for (std::size_t j = 1; j <= w.size(); ++j) {
        if (!phi.count(j) || w.value(j) == w.value(i)) continue;
        switch (k) {
            case NotInClass::FarFuture:
                if (j > i + 1) return true;
                break;
            case NotInClass::DeepPast:
                if (j + 1 < i) return true;
                break;
            case NotInClass::Future:
                if (j > i) return true;
                break;
            case NotInClass::Past:
                if (j < i) return true;
                break;
        }
    }
    return false;
}

void checkFo2Translation(const Fo2& f, std::size_t maxLen) {
    Dltl d = fo2ToUdltl(f);
    CHECK(isUnaryDltl(d));
    forEachWordUpTo(kAB, maxLen, [&](const DataWord& w) {
        auto got = evalDltl(w, d);
        for (std::size_t i = 1; i <= w.size(); ++i) CHECK(evalFo2(w, f, {i, std::nullopt}) == got.contains(i));
        return true;
    });
}

}  // namespace

TEST_CASE("DLTL parse and print") {
    for (const char* t : {"a Ug b", "Xg Yc (a | !S)", "a & b Sc P -> Fg a", "Pc (a Uc b)", "true | false"}) {
        CAPTURE(t);
        Dltl f = parseDltl(t);
        CHECK(print(parseDltl(print(f))) == print(f));
    }
    CHECK(print(parseDltl("a & b Ug c")) == "((a & b) Ug c)");
    CHECK(isUnaryDltl(parseDltl("Fg Xc a")));
    CHECK(!isUnaryDltl(parseDltl("a Ug b")));
    CHECK(modalDepth(parseDltl("Fg (a & Xc Yg b)")) == 3);
    CHECK_THROWS_AS(parseDltl("a &"), ParseError);
    CHECK_THROWS_AS(parseDltl("Ug b"), ParseError);
}

TEST_CASE("DLTL direct semantics on w0") {
    DataWord w = parseWord(named::kW0);
    CHECK(asSet(evalDltl(w, dltl::S())) == std::set<std::size_t>{2});
    CHECK(asSet(evalDltl(w, parseDltl("Fc a"))) == std::set<std::size_t>{1, 2, 3, 4, 6});
    CHECK(asSet(evalDltl(w, parseDltl("Yg S"))) == asSet(evalDltl(w, dltl::P())));
}

TEST_CASE("dltlToMu agrees with the direct semantics") {
    Formula u = dltlToMu(parseDltl("p Uc q"));
    CHECK(alphaEqual(u, parse("mu x. (q | (p & Xc x))")));
    std::mt19937 rng(7);
    std::vector<Dltl> suite;
    for (const char* t : {"a Ug b", "a Sg b", "a Uc b", "b Sc a", "!Fg a", "!(Pc (a & S))", "Xg Yc a | Fc P"})
        suite.push_back(parseDltl(t));
    for (int k = 0; k < 40; ++k) suite.push_back(randomDltl(rng, 3, false));
    // The reference oracle on the named formulas, the evaluator on the random ones.
    for (std::size_t k = 0; k < suite.size(); ++k) {
        const auto& f = suite[k];
        CAPTURE(print(f));
        Formula m = dltlToMu(f);
        CHECK(isSentence(m));
        Evaluator ev(m);
        forEachWordUpTo(kAB, 5, [&](const DataWord& w) {
            auto direct = asSet(evalDltl(w, f));
            CHECK(direct == asSet(ev.eval(w)));
            if (k < 7) CHECK(direct == oracle::eval(w, m));
            return true;
        });
    }
}

TEST_CASE("unary DLTL with one mode alternation lands in BMA height 2") {
    for (const char* t : {"Fg a", "Fg Fc a", "Pc (a & Xg b)", "Xg Yc S", "Gg a"}) {
        CAPTURE(t);
        Dltl f = parseDltl(std::string(t) == "Gg a" ? "!Fg !a" : t);
        auto h = compHeight(dltlToMu(f), Basis::BMA);
        REQUIRE(h.height);
        CHECK(*h.height <= 2);
    }
    // Each alternation between modes adds a layer.
    auto h = compHeight(dltlToMu(parseDltl("Fg Fc Fg a")), Basis::BMA);
    REQUIRE(h.height);
    CHECK(*h.height == 3);
}

TEST_CASE("not-in-class modalities match their definitions") {
    DataWord w = parseWord(named::kW0);
    CHECK(evalDltl(w, expandNotInClass(NotInClass::FarFuture, dltl::prop("a"))).contains(1));
    std::vector<Dltl> args{dltl::prop("a"), dltl::prop("b"), parseDltl("a & Xg b"), parseDltl("S | Yc a")};
    for (const auto& phi : args)
        for (NotInClass k : {NotInClass::FarFuture, NotInClass::DeepPast, NotInClass::Future, NotInClass::Past}) {
            CAPTURE(print(phi));
            CAPTURE(name(k));
            Dltl e = expandNotInClass(k, phi);
            CHECK(isUnaryDltl(e));
            forEachWordUpTo(kAB, 6, [&](const DataWord& w) {
                auto truth = asSet(evalDltl(w, phi));
                auto got = evalDltl(w, e);
                for (std::size_t i = 1; i <= w.size(); ++i) CHECK(got.contains(i) == notInClassAt(w, truth, k, i));
                return true;
            });
        }
    // F and fF differ exactly where the successor is an a outside the class.
    Dltl a = dltl::prop("a");
    Dltl ef = expandNotInClass(NotInClass::Future, a), eff = expandNotInClass(NotInClass::FarFuture, a);
    forEachWordUpTo(kAB, 5, [&](const DataWord& w) {
        auto f1 = evalDltl(w, ef), f2 = evalDltl(w, eff);
        for (std::size_t i = 1; i <= w.size(); ++i) {
            bool nextOther = i < w.size() && w.letter(i + 1) == "a" && w.value(i + 1) != w.value(i);
            if (f1.contains(i) != f2.contains(i)) CHECK(nextOther);
            if (!f2.contains(i) && nextOther) CHECK(f1.contains(i));
        }
        return true;
    });
    // One class: nothing outside it.
    for (std::size_t n = 0; n <= 6; ++n)
        forEachWord(kAB, n, [&](const DataWord& w) {
            for (std::size_t i = 1; i <= n; ++i)
                if (w.value(i) != w.value(1)) return true;
            CHECK(evalDltl(w, eff).empty());
            return true;
        });
}

TEST_CASE("FO2 parse, print and evaluation") {
    Fo2 f = parseFo2("E y. (x~+1=y)");
    CHECK(evalFo2(parseWord(named::kW0), f, {3, std::nullopt}));
    CHECK(!evalFo2(parseWord(named::kW0), f, {7, std::nullopt}));
    CHECK(freeVariables(f) == std::vector<int>{0});
    CHECK(quantifierDepth(parseFo2("E y. (a(y) & A x. (x<y -> b(x)))")) == 2);
    for (const char* t : {"E y. (a(y) & x+1=y & !x~y)", "A x. (a(x) -> E y. (x<~y & b(y)))", "x=x | y<x"}) {
        CAPTURE(t);
        Fo2 g = parseFo2(t);
        CHECK(print(parseFo2(print(g))) == print(g));
    }
    CHECK_THROWS_AS(evalFo2(parseWord("a:1"), parseFo2("a(y)"), {1, std::nullopt}), InputError);
    CHECK_THROWS_AS(parseFo2("E z. a(z)"), ParseError);
    // A letter named E.
    CHECK(evalFo2(parseWord("E:1"), parseFo2("E(x)"), {1, std::nullopt}));
}

TEST_CASE("fo2ToUdltl table rows") {
    CHECK(print(fo2ToUdltl(parseFo2("a(x)"))) == "a");
    checkFo2Translation(parseFo2("E y. (a(y) & x+1=y & !x~y)"), 5);
    checkFo2Translation(parseFo2("E y. (b(y) & x<y & !x+1=y & x~+1=y)"), 5);
    CHECK_THROWS_AS(fo2ToUdltl(parseFo2("x<y")), InputError);
}

TEST_CASE("fo2ToUdltl preserves semantics up to quantifier depth 2") {
    const std::vector<std::string> suite{
        "a(x)",
        "E y. (x<y & b(y))",
        "E y. (y<x & x~y & a(y))",
        "E y. (x~+1=y & a(y))",
        "E y. (y~+1=x)",
        "E y. (!x~y & a(y))",
        "A y. (x~y -> a(y))",
        "E y. (x<~y & !x~+1=y)",
        "E y. (y<x & !y+1=x & !x~y & b(y))",
        "E x. (a(x) & E y. (x~y & x<y & b(y)))",
        "A y. (x<y -> E x. (y~x & a(x)))",
        "E y. (x+1=y & E x. (y+1=x & !x~y))",
        "a(x) & E y. (!x~y & (E x. (y<x & x~y)) & b(y))",
        "E y. (x~y & !x=y & A x. (x~y -> a(x) | x=y))",
    };
    for (const auto& t : suite) {
        CAPTURE(t);
        Fo2 f = parseFo2(t);
        REQUIRE(quantifierDepth(f) <= 2);
        Dltl d = fo2ToUdltl(f);
        // Far modalities cost six nested modalities per quantifier.
        CHECK(modalDepth(d) <= 6 * std::max<std::size_t>(quantifierDepth(f), 1));
        checkFo2Translation(f, 5);
    }
}

TEST_CASE("udltlToFo2: standard translation") {
    CHECK(print(udltlToFo2(parseDltl("Xg a"))) == "(E y. (x+1=y & a(y)))");
    CHECK(print(udltlToFo2(parseDltl("Fc a"))) == "(E y. ((x=y | x<~y) & a(y)))");
    CHECK_THROWS_AS(udltlToFo2(parseDltl("a Ug b")), InputError);
    std::mt19937 rng(3);
    for (int k = 0; k < 30; ++k) {
        Dltl f = randomDltl(rng, 3, true);
        CAPTURE(print(f));
        Fo2 g = udltlToFo2(f);
        CHECK(freeVariables(g).size() <= 1);
        Dltl back = fo2ToUdltl(g);
        forEachWordUpTo(kAB, 4, [&](const DataWord& w) {
            auto truth = evalDltl(w, f), round = evalDltl(w, back);
            for (std::size_t i = 1; i <= w.size(); ++i) {
                CHECK(evalFo2(w, g, {i, std::nullopt}) == truth.contains(i));
                CHECK(round.contains(i) == truth.contains(i));
            }
            return true;
        });
    }
}

TEST_CASE("udltlToFo2 grows linearly") {
    // Alternating modalities over a; constant size increment per layer.
    std::vector<std::size_t> sizes;
    Dltl f = dltl::prop("a");
    for (int k = 0; k < 20; ++k) {
        f = dltl::conj(dltl::unary(static_cast<DUnary>(k % 8), f), dltl::prop(k % 2 ? "a" : "b"));
        sizes.push_back(size(udltlToFo2(f)));
    }
    std::set<std::size_t> slopes;
    for (std::size_t k = 8; k < sizes.size(); ++k) slopes.insert(sizes[k] - sizes[k - 8]);
    CHECK(slopes.size() == 1);
}
