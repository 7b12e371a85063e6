#include "doctest.h"

#include "mudw/evaluator.hpp"
#include "mudw/formula.hpp"
#include "../common/oracle.hpp"

using namespace mudw;

namespace {

const std::vector<std::string> kRegression = {
    "nu x. Xg Yc x",
    "mu x. (Xg Xc x | a)",
    "nu x. (~Xc x | Xg mu y. (a & ~Yc y))",
    "mu x. ((nu y. b | Xc y) | Xg x | Yg x)",
    "mu x. (Xc Xg x | a)",
    "Fg a & Gc b",
    "a Ug (b & S)",
    "Hg (a | P) Sc firstc",
    "nu x. (x | a)",
    "mu x. (x | a) & b",
    "mu x. (a & Xg x) | lastc",
    "nu x. mu y. ((a & Xg x) | (b & Xg y) | lastg)",
    "mu x. nu y. ((a & Xc x) | (y & Yg y))",
    "nu x. (Xg x & mu y. (x | Yc y | b))",
    "mu x. Xg a | nu y. (x | Yg y)",
    "nu x. (a & mu y. (x | Xc y)) | b & x",
};

std::vector<std::pair<DataWord, oracle::Set>> sample(const Formula& f, std::size_t maxLen) {
    std::vector<std::pair<DataWord, oracle::Set>> out;
    forEachWordUpTo({"a", "b"}, maxLen, [&](const DataWord& w) {
        out.emplace_back(w, oracle::eval(w, f));
        return true;
    });
    return out;
}

oracle::Set asSet(const PositionSet& p) {
    auto v = p.positions();
    return {v.begin(), v.end()};
}

}  // namespace

TEST_CASE("parse examples") {
    Formula f = parse("nu x. Xg Yc x");
    CHECK(structurallyEqual(f, nu("x", mod(Mod::Xg, mod(Mod::Yc, var("x"))))));
    Formula b = parse("mu x. (Xg Xc x | a)");
    CHECK(structurallyEqual(b, mu("x", disj(mod(Mod::Xg, mod(Mod::Xc, var("x"))), prop("a")))));
    CHECK(structurallyEqual(parse("!firstg"), zero(Zero::FirstG, true)));
    CHECK(structurallyEqual(parse("nS"), zero(Zero::S, true)));
    CHECK(structurallyEqual(parse("!nS"), zero(Zero::S)));
    CHECK(structurallyEqual(parse("a | b & c"), disj(prop("a"), conj(prop("b"), prop("c")))));
    CHECK(structurallyEqual(parse("a Ug b Ug c"), until(Until::Ug, prop("a"), until(Until::Ug, prop("b"), prop("c")))));
}

TEST_CASE("parse errors and renaming") {
    CHECK_THROWS_AS(parse("a &"), ParseError);
    CHECK_THROWS_AS(parse("mu x. !x"), ParseError);
    CHECK_THROWS_AS(parse("(a"), ParseError);
    CHECK_THROWS_AS(parse("a # b"), ParseError);
    CHECK_THROWS_AS(parse("!Xg a"), ParseError);
    Formula f = parse("mu x. (Xg x | nu x. Yg x)");
    auto bv = boundVars(f);
    CHECK(bv.size() == 2);
    CHECK(alphaEqual(f, parse("mu x. (Xg x | nu y. Yg y)")));
}

TEST_CASE("print reparses to an alpha-equivalent formula") {
    for (const auto& t : kRegression) {
        Formula f = parse(t);
        CAPTURE(t);
        CHECK(alphaEqual(parse(print(f)), f));
    }
    Formula g = conj(disj(prop("a"), prop("b")), conj(prop("c"), prop("d")));
    CHECK(structurallyEqual(parse(print(g)), g));
}

TEST_CASE("desugar expansions") {
    Formula u = desugar(parse("a Ug b"));
    REQUIRE(u->kind == Kind::Mu);
    const std::string& x = u->name;
    CHECK(structurallyEqual(u->kids[0], disj(prop("b"), conj(prop("a"), mod(Mod::Xg, var(x))))));
    CHECK(structurallyEqual(desugar(parse("~Xg a")), disj(zero(Zero::LastG), mod(Mod::Xg, prop("a")))));
    Formula g = desugar(parse("Gg a"));
    REQUIRE(g->kind == Kind::Nu);
    CHECK(structurallyEqual(
        g->kids[0], conj(prop("a"), disj(zero(Zero::LastG), mod(Mod::Xg, var(g->name))))));
    CHECK(isCore(desugar(parse("Hc (a Sg b) | ~Yc Pg Fc a"))));
}

TEST_CASE("desugar preserves semantics against the oracle") {
    const std::vector<std::string> sugared = {"Fg a", "Fc a", "Pg a", "Pc a", "Gg a", "Gc a", "Hg a", "Hc a",
                                              "a Ug b", "a Uc b", "a Sg b", "a Sc b", "~Xg a", "~Xc a",
                                              "~Yg a", "~Yc a", "Gg (a Uc Pg b)"};
    for (const auto& t : sugared) {
        CAPTURE(t);
        Formula f = parse(t), d = desugar(f);
        Evaluator ev(d);
        for (const auto& [w, expect] : sample(f, 4)) CHECK(asSet(ev.eval(w)) == expect);
    }
}

TEST_CASE("dualize") {
    CHECK(structurallyEqual(dualize(prop("p")), nprop("p")));
    Formula d = dualize(parse("mu x. (Xg Xc x | a)"));
    CHECK(alphaEqual(d, parse("nu x. ((lastg | Xg (lastc | Xc x)) & !a)")));
    CHECK_THROWS_AS(dualize(var("x")), InputError);
    for (const auto& t : kRegression) {
        CAPTURE(t);
        Formula f = parse(t), nf = dualize(f);
        Evaluator ev(nf), ev2(dualize(nf));
        forEachWordUpTo({"a", "b"}, 4, [&](const DataWord& w) {
            oracle::Set base = oracle::eval(w, f), comp;
            for (std::size_t i = 1; i <= w.size(); ++i)
                if (!base.count(i)) comp.insert(i);
            CHECK(asSet(ev.eval(w)) == comp);
            CHECK(asSet(ev2.eval(w)) == base);
            return true;
        });
    }
}

TEST_CASE("mirror reverses the word") {
    for (const auto& t : kRegression) {
        CAPTURE(t);
        Formula f = parse(t), m = mirror(f);
        Evaluator ev(f), em(m);
        forEachWordUpTo({"a", "b"}, 4, [&](const DataWord& w) {
            auto p = ev.eval(w).positions();
            oracle::Set expect;
            for (auto i : p) expect.insert(w.size() + 1 - i);
            CHECK(asSet(em.eval(reversed(w))) == expect);
            return true;
        });
    }
}

TEST_CASE("toGuarded examples") {
    CHECK(alphaEqual(toGuarded(parse("mu x. (x | a)")), parse("mu x. a")));
    CHECK(alphaEqual(toGuarded(parse("nu x. (x | a)")), parse("nu x. true")));
    Formula g = parse("mu x. (Xg x | a)");
    CHECK(toGuarded(g) == g);
    CHECK(!isGuarded(parse("mu x. (x | a)")));
    CHECK(isGuarded(parse("nu x. ~Xg x")));
    CHECK(!isGuarded(parse("mu x. Xg a | nu y. (x | Yg y)")));
    CHECK(isGuarded(parse("mu x. Xg nu y. (x | Yg y) | x")));
}

TEST_CASE("toGuarded preserves semantics") {
    for (const auto& t : kRegression) {
        CAPTURE(t);
        Formula f = parse(t), g = toGuarded(f);
        CHECK(isGuarded(g));
        Evaluator eg(g);
        for (const auto& [w, expect] : sample(f, 4)) CHECK(asSet(eg.eval(w)) == expect);
    }
}

TEST_CASE("bekic linearization") {
    VectorialFormula v;
    v.binder = Kind::Nu;
    v.vars = {"x", "y"};
    v.bodies = {parseWithVars("Xg y | p", {"x", "y"}), parseWithVars("x & q", {"x", "y"})};
    CHECK(alphaEqual(bekic(v, "x"), parseWithVars("nu x. (Xg (nu y. (x & q)) | p)", {})));
    VectorialFormula one{Kind::Nu, {"x"}, {parseWithVars("a & Xg x", {"x"})}};
    CHECK(structurallyEqual(bekic(one, "x"), nu("x", one.bodies[0])));
    CHECK_THROWS_AS(bekic(v, "z"), InputError);
}

namespace {

// Simultaneous Kleene iteration of a vectorial system, starting from empty or full.
std::vector<PositionSet> iterateSystem(const VectorialFormula& v, const DataWord& w) {
    std::size_t n = w.size();
    std::vector<PositionSet> cur(v.vars.size(), PositionSet(n, v.binder == Kind::Nu));
    for (;;) {
        Environment env;
        for (std::size_t i = 0; i < v.vars.size(); ++i) env[v.vars[i]] = cur[i];
        std::vector<PositionSet> next;
        for (const auto& b : v.bodies) next.push_back(eval(w, b, env));
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

}  // namespace

TEST_CASE("bekic agrees with simultaneous iteration, all component orders") {
    std::set<std::string> vs{"x", "y", "z"};
    for (Kind k : {Kind::Nu, Kind::Mu}) {
        VectorialFormula v;
        v.binder = k;
        v.vars = {"x", "y", "z"};
        v.bodies = {parseWithVars("(a & Xg y) | (b & Xc z) | lastg", vs), parseWithVars("Yg x | (b & Xg z)", vs),
                    parseWithVars("a & Xc x | S & Xg y", vs)};
        VectorialFormula perm = v;
        std::swap(perm.vars[0], perm.vars[2]);
        std::swap(perm.bodies[0], perm.bodies[2]);
        forEachWordUpTo({"a", "b"}, 5, [&](const DataWord& w) {
            auto sol = iterateSystem(v, w);
            for (std::size_t i = 0; i < 3; ++i) {
                CHECK(eval(w, bekic(v, v.vars[i])) == sol[i]);
                CHECK(eval(w, bekic(perm, v.vars[i])) == sol[i]);
            }
            return true;
        });
    }
}
