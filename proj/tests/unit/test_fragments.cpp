#include "doctest.h"

#include "../common/named.hpp"
#include "../common/oracle.hpp"
#include "mudw/evaluator.hpp"
#include "mudw/fragments.hpp"

using namespace mudw;

namespace {

std::optional<std::size_t> h(const std::string& t, Basis b) { return compHeight(parse(t), b).height; }

using named::bridgeK;
using named::kBridge;
using named::kPhi1;
using named::kPhi2;
using named::kPhi3;
using named::kPhi4;

}  // namespace

TEST_CASE("fragment table") {
    CHECK(h(kPhi1, Basis::BR) == 2u);
    CHECK(h(kPhi1, Basis::BMA) == 3u);
    CHECK(!h(kPhi2, Basis::BR));
    CHECK(!h(kPhi2, Basis::BMA));
    CHECK(h(kPhi3, Basis::BMA) == 2u);
    CHECK(!h(kPhi3, Basis::BR));
    CHECK(h(kPhi4, Basis::BR) == 1u);
    CHECK(!h(kPhi4, Basis::BMA));
    for (int k = 1; k <= 3; ++k) {
        CHECK(h(bridgeK(k), Basis::BR) == 1u);
        CHECK(h(bridgeK(k), Basis::BMA) == static_cast<std::size_t>(2 * k));
    }
    CHECK(h(kBridge, Basis::BR) == 1u);
    CHECK(!h(kBridge, Basis::BMA));
}

TEST_CASE("witnesses verify and have the claimed depth") {
    for (const char* t : {kPhi1, kPhi3, kPhi4, kBridge, "Xg Xc Xg a", "Fg a & Pc b", "a Ug (Yc b)"}) {
        for (Basis b : {Basis::BR, Basis::BMA}) {
            CAPTURE(t);
            auto r = compHeight(parse(t), b);
            if (!r.height) continue;
            REQUIRE(r.witness);
            CHECK(r.witness->depth() == *r.height);
            CHECK(verifyDecomposition(parse(t), *r.witness, b));
        }
    }
}

TEST_CASE("verifier rejects bad witnesses") {
    Formula f = parse("Xg Xc a");
    Layer mixed;
    mixed.kind = LayerKind::Global;
    mixed.skeleton = f;
    CHECK(!verifyDecomposition(f, mixed, Basis::BMA));
    mixed.kind = LayerKind::Future;
    CHECK(verifyDecomposition(f, mixed, Basis::BR));

    // Child mentions y, which the skeleton binds at the hole.
    Formula g = parse("nu y. Xg (Xc y)");
    Layer capt;
    capt.kind = LayerKind::Global;
    capt.skeleton = parseWithVars("nu y. Xg h", {"h"});
    capt.holes = {"h"};
    Layer child;
    child.kind = LayerKind::Class;
    child.skeleton = parseWithVars("Xc y", {"y"});
    capt.children = {child};
    CHECK(alphaEqual(capt.recompose(), g));
    CHECK(!verifyDecomposition(g, capt, Basis::BMA));

    // Wrong recomposition.
    Layer wrong;
    wrong.kind = LayerKind::Future;
    wrong.skeleton = parse("Xg b");
    CHECK(!verifyDecomposition(parse("Xg a"), wrong, Basis::BR));
}

TEST_CASE("mu-only and nu-only flags") {
    CHECK(isNuOnly(parse("nu x. Xg Yc x")));
    CHECK(!isNuOnly(parse("Fg a")));
    CHECK(isMuOnly(parse("Fg a")));
    CHECK(!isMuOnly(parse("Gg a")));
    CHECK(isNuOnly(parse("a & S")));
    CHECK(isMuOnly(parse("a & S")));
}

TEST_CASE("brToNu examples and equivalence") {
    CHECK(alphaEqual(brToNu(parse(kPhi4)), parse("nu x. (Xc Xg x | p)")));
    Formula g = parse("nu x. (a & Xg x)");
    CHECK(brToNu(g) == g);
    CHECK(alphaEqual(brToNu(parse("Fg a")), parse("nu x. (a | Xg x)")));
    CHECK_THROWS_AS(brToNu(parse(kPhi2)), InputError);
    for (const char* t : {kPhi1, kPhi4, kBridge, "Fg a", "a Uc b", "Pg (b & Fc a)", "mu x. (x | a) & Xg b",
                          "Gg (a | Fc b)"}) {
        CAPTURE(t);
        Formula f = parse(t), n = brToNu(f);
        CHECK(isNuOnly(n));
        CHECK(isGuarded(n));
        Evaluator ef(f), en(n);
        forEachWordUpTo({"a", "b"}, 5, [&](const DataWord& w) {
            CHECK(ef.eval(w) == en.eval(w));
            return true;
        });
    }
}

TEST_CASE("reversal lemma: deep x is invisible near the start") {
    // x sits under at least k = 2 past modalities.
    Formula f = parseWithVars("mu y. (Yg Yc x | (a & Yg y) | Yc Yg (x & b))", {"x"});
    std::size_t k = 2;
    forEachWordUpTo({"a", "b"}, 5, [&](const DataWord& w) {
        PositionSet none(w.size());
        PositionSet base = eval(w, f, {{"x", none}});
        for (std::size_t mask = 0; mask < (std::size_t{1} << w.size()); mask += 3) {
            PositionSet s(w.size());
            for (std::size_t i = 0; i < w.size(); ++i)
                if (mask >> i & 1) s.set(i);
            PositionSet r = eval(w, f, {{"x", s}});
            for (std::size_t i = 1; i < k && i <= w.size(); ++i) CHECK(r.contains(i) == base.contains(i));
        }
        return true;
    });
}

TEST_CASE("bmaToBr: equivalence and height bound") {
    struct Case {
        const char* text;
        std::size_t maxLen;
        std::vector<std::string> sigma{"a", "b"};
    };
    for (Case c : {Case{"Gg a", 5}, Case{"Gc a", 5}, Case{"Xg Xc a", 5}, Case{"Fg (a & lastc)", 5},
                   Case{kPhi3, 4, {"q", "a"}}, Case{kPhi1, 4, {"q", "a"}}, Case{"Fc (S & Xg b)", 4}}) {
        CAPTURE(c.text);
        Formula f = parse(c.text);
        auto k = compHeight(f, Basis::BMA).height;
        REQUIRE(k);
        Formula g = bmaToBr(f);
        auto hb = compHeight(g, Basis::BR).height;
        REQUIRE(hb);
        CHECK(*hb <= *k + 1);
        forEachWordUpTo(c.sigma, c.maxLen, [&](const DataWord& w) {
            if (w.empty()) return true;
            auto truth = oracle::eval(w, f);
            CHECK(eval(w, g).positions() == std::vector<std::size_t>(truth.begin(), truth.end()));
            return true;
        });
    }
    CHECK_THROWS_AS(bmaToBr(parse(kPhi4)), InputError);
}
