// One PASS/FAIL line per acceptance criterion. All comparisons are exact; the only
// tolerances are the pinned time limits and depth factors below.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../common/named.hpp"
#include "../common/oracle.hpp"
#include "mudw/cascades.hpp"
#include "mudw/data_automata.hpp"
#include "mudw/dltl.hpp"
#include "mudw/evaluator.hpp"
#include "mudw/fragments.hpp"
#include "mudw/reductions.hpp"
#include "mudw/testkit.hpp"

using namespace mudw;

namespace {

constexpr double kC1Seconds = 30;
constexpr double kC3Seconds = 120;
constexpr double kC11Seconds = 300;
constexpr double kTotalSeconds = 900;
constexpr std::size_t kFo2DepthFactor = 3;
constexpr std::size_t kBrHeightSlack = 1;
constexpr std::size_t kSequentialFactor = 2;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const std::vector<Letter> kAB{"a", "b"};

std::size_t bell(std::size_t n) {
    std::vector<std::size_t> row{1};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> next{row.back()};
        for (std::size_t x : row) next.push_back(next.back() + x);
        row = next;
    }
    return row.front();
}

// Closed-form count of canonical words of length minLen..maxLen.
std::size_t wordCount(std::size_t sigma, std::size_t minLen, std::size_t maxLen) {
    std::size_t total = 0;
    for (std::size_t m = minLen; m <= maxLen; ++m) {
        std::size_t p = 1;
        for (std::size_t i = 0; i < m; ++i) p *= sigma;
        total += p * bell(m);
    }
    return total;
}

// Every sweep goes through here; a sweep that visits fewer words than the closed form
// is not exhaustive and fails criterion 12.
bool gAllExhaustive = true;
std::size_t gSweeps = 0, gWords = 0;

void sweep(const std::vector<Letter>& sigma, std::size_t minLen, std::size_t maxLen,
           const std::function<void(const DataWord&)>& fn) {
    std::size_t seen = 0;
    for (std::size_t n = minLen; n <= maxLen; ++n)
        forEachWord(sigma, n, [&](const DataWord& w) {
            ++seen;
            fn(w);
            return true;
        });
    ++gSweeps;
    gWords += seen;
    if (seen != wordCount(sigma.size(), minLen, maxLen)) gAllExhaustive = false;
}

// Criterion result: failures are counted, the first few described.
struct Result {
    std::size_t checks = 0, failures = 0;
    std::vector<std::string> notes;
    std::string summary;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        if (failures++ < 3) notes.push_back(what);
    }
    bool ok() const { return failures == 0; }
};

std::vector<std::size_t> toVec(const oracle::Set& s) { return {s.begin(), s.end()}; }

std::vector<Letter> sigmaFor(const Formula& f) {
    std::set<Letter> s(kAB.begin(), kAB.end());
    for (const auto& p : propositions(f)) s.insert(p);
    return {s.begin(), s.end()};
}

// 1. S and P from the one-letter enumeration.
Result criterion1() {
    Result r;
    auto t0 = Clock::now();
    Evaluator nuS(parse("nu x. Xg Yc x")), s(parse("S")), ygS(parse("Yg S")), p(parse("P"));
    std::size_t atSeven = 0;
    sweep({"a"}, 0, 7, [&](const DataWord& w) {
        if (w.size() == 7) ++atSeven;
        std::vector<std::size_t> directS, directP;
        for (std::size_t i = 1; i <= w.size(); ++i) {
            if (i < w.size() && w.value(i) == w.value(i + 1)) directS.push_back(i);
            if (i > 1 && w.value(i) == w.value(i - 1)) directP.push_back(i);
        }
        auto a = nuS.eval(w).positions(), b = s.eval(w).positions();
        r.expect(a == b && b == directS, "nu x. Xg Yc x vs S on " + toText(w));
        auto c = ygS.eval(w).positions(), d = p.eval(w).positions();
        r.expect(c == d && d == directP, "Yg S vs P on " + toText(w));
    });
    r.expect(atSeven == 877, "877 words at n = 7");
    double secs = since(t0);
    r.expect(secs < kC1Seconds, "runtime");
    r.summary = std::to_string(atSeven) + " words at n=7, " + std::to_string(secs).substr(0, 5) + " s (limit " +
                std::to_string(static_cast<int>(kC1Seconds)) + " s)";
    return r;
}

// 2. Values on the running example word.
Result criterion2() {
    Result r;
    DataWord w = parseWord(named::kW0);
    r.expect(oneType(w, 1) == Marking{false, false}, "oneType(1)");
    r.expect(oneType(w, 2) == Marking{false, true}, "oneType(2)");
    struct Row {
        const char* f;
        std::vector<std::size_t> v;
    };
    for (const Row& row : {Row{"S", {2}}, Row{"firstc", {1, 2, 5}}, Row{"lastc", {5, 6, 7}},
                           Row{"Fc a", {1, 2, 3, 4, 6}}}) {
        Formula f = parse(row.f);
        r.expect(eval(w, f).positions() == row.v, std::string("library ") + row.f);
        r.expect(toVec(oracle::eval(w, f)) == row.v, std::string("oracle ") + row.f);
    }
    r.summary = "oneType(1), oneType(2), S, firstc, lastc, Fc a";
    return r;
}

// 3. Nu-suite through data automata.
Result criterion3() {
    Result r;
    auto t0 = Clock::now();
    const std::vector<Formula> suite{parse("nu x. Xg Yc x"),
                                     brToNu(parse("Gg a")),
                                     brToNu(parse("Fc b")),
                                     parse("firstg & a"),
                                     parse("nu x. a & Xg x | lastg"),
                                     parse("Gc (a | S)"),
                                     parse("nu x. (b | Yc x) & (firstc | Yg true)"),
                                     parse("Xc Xg b"),
                                     parse("nu x. Xc (a & x) | lastc"),
                                     brToNu(parse("mu x. (Xc Xg x | a)"))};
    std::size_t words = 0;
    for (const auto& f : suite) {
        r.expect(isNuOnly(f), "nu-only: " + print(f));
        DataAutomaton d = fromNuFormula(f);
        Evaluator ev(f);
        std::size_t before = gWords;
        // The empty word is rejected by both sides by convention.
        sweep(kAB, 0, 5, [&](const DataWord& w) {
            bool da = !w.empty() && membership(d, w).accepted;
            r.expect(da == ev.models(w), print(f) + " on " + toText(w));
        });
        words = gWords - before;
    }
    double secs = since(t0);
    r.expect(words == 1955, "1955 words per formula");
    r.expect(secs < kC3Seconds, "runtime");
    r.summary = std::to_string(suite.size()) + " formulas x " + std::to_string(words) + " words, " +
                std::to_string(secs).substr(0, 5) + " s (limit " + std::to_string(static_cast<int>(kC3Seconds)) + " s)";
    return r;
}

const std::vector<std::string> kSuite = {
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

// 4. Guarded form and the two rewrite identities.
Result criterion4() {
    Result r;
    std::vector<Formula> fs;
    for (const auto& t : kSuite) fs.push_back(parse(t));
    for (std::uint64_t seed = 0; seed < 200; ++seed) fs.push_back(randomFormula({}, 4, seed, kAB));
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const Formula& f = fs[k];
        Formula g = toGuarded(f);
        r.expect(isGuarded(g), "guarded: " + print(f));
        Evaluator ef(f), eg(g);
        bool useOracle = k < kSuite.size();
        sweep(kAB, 0, 4, [&](const DataWord& w) {
            auto got = eg.eval(w).positions();
            auto want = useOracle ? toVec(oracle::eval(w, f)) : ef.eval(w).positions();
            r.expect(got == want, print(f) + " on " + toText(w));
        });
    }
    // mu x.(x | alpha) & beta == mu x. alpha & beta;  nu x.(x | alpha) & beta == nu x. beta.
    const std::vector<std::string> alphas{"a", "Xg x", "Xc x & b", "S | Yg x"};
    const std::vector<std::string> betas{"true", "b | Yg x", "Xg x", "lastg | Xc x"};
    std::size_t identities = 0;
    for (const auto& al : alphas)
        for (const auto& be : betas) {
            Formula mu1 = parse("mu x. ((x | " + al + ") & (" + be + "))");
            Formula mu2 = parse("mu x. ((" + al + ") & (" + be + "))");
            Formula nu1 = parse("nu x. ((x | " + al + ") & (" + be + "))");
            Formula nu2 = parse("nu x. (" + be + ")");
            identities += 2;
            sweep(kAB, 0, 5, [&](const DataWord& w) {
                r.expect(oracle::eval(w, mu1) == oracle::eval(w, mu2), print(mu1) + " on " + toText(w));
                r.expect(oracle::eval(w, nu1) == oracle::eval(w, nu2), print(nu1) + " on " + toText(w));
            });
        }
    r.summary = std::to_string(kSuite.size()) + " suite + 200 random formulas at n<=4, " +
                std::to_string(identities) + " identity instances at n<=5";
    return r;
}

// 5. Fixpoint kind is irrelevant for guarded single-direction formulas.
Result criterion5() {
    Result r;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        FragmentSpec fs = parseFragment(seed % 2 ? "pure:past" : "pure:future");
        Formula g = toGuarded(randomFormula(fs, 4, seed, kAB));
        r.expect(isGuarded(g), "guarded: " + print(g));
        Evaluator e(g), toNu(swapFixpoints(g, Kind::Mu, Kind::Nu)), toMu(swapFixpoints(g, Kind::Nu, Kind::Mu));
        sweep(kAB, 0, 5, [&](const DataWord& w) {
            auto v = e.eval(w);
            r.expect(v == toNu.eval(w) && v == toMu.eval(w), print(g) + " on " + toText(w));
        });
    }
    r.summary = "100 formulas, n<=5";
    return r;
}

std::string opt(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "none"; }

// 6. Fragment table.
Result criterion6() {
    Result r;
    using O = std::optional<std::size_t>;
    struct Row {
        std::string f;
        O br, bma;
    };
    std::vector<Row> rows{{named::kPhi1, 2, 3},
                          {named::kPhi2, std::nullopt, std::nullopt},
                          {named::kPhi3, std::nullopt, 2},
                          {named::kPhi4, 1, std::nullopt},
                          {named::kBridge, 1, std::nullopt}};
    for (std::size_t k = 1; k <= 3; ++k) rows.push_back({named::bridgeK(static_cast<int>(k)), 1, 2 * k});
    for (const auto& row : rows) {
        auto c = classify(parse(row.f));
        r.expect(c.br == row.br && c.bma == row.bma,
                 row.f + ": BR " + opt(c.br) + " BMA " + opt(c.bma) + ", expected BR " + opt(row.br) + " BMA " +
                     opt(row.bma));
    }
    r.summary = std::to_string(rows.size()) + " rows";
    return r;
}

const std::vector<std::string> kBmaSuite{"Gg a",          "Gc a", "Xg Xc a", "Fg (a & lastc)", named::kPhi3,
                                         named::kPhi1,    "Fc (S & Xg b)", "Fg (a & Xc b)", named::bridgeK(2),
                                         "a Uc b"};

// 7. BMA to BR.
Result criterion7() {
    Result r;
    for (const auto& t : kBmaSuite) {
        Formula f = parse(t);
        auto k = compHeight(f, Basis::BMA).height;
        r.expect(k.has_value(), "BMA member: " + t);
        if (!k) continue;
        Formula g = bmaToBr(f);
        auto h = compHeight(g, Basis::BR).height;
        r.expect(h && *h <= *k + kBrHeightSlack, "BR height of bmaToBr(" + t + ") is " + opt(h));
        Evaluator ef(f), eg(g);
        sweep(sigmaFor(f), 0, 4, [&](const DataWord& w) {
            r.expect(ef.eval(w) == eg.eval(w), t + " on " + toText(w));
        });
    }
    r.summary = std::to_string(kBmaSuite.size()) + " formulas, n<=4, BR height <= BMA height + " +
                std::to_string(kBrHeightSlack);
    return r;
}

void checkMarking(Result& r, const Cascade& c, const Formula& f, const std::string& label) {
    Evaluator ev(f);
    sweep(sigmaFor(f), 0, 4, [&](const DataWord& w) {
        auto out = runCascade(c, w);
        if (!out) {
            r.expect(false, label + ": no run on " + toText(w));
            return;
        }
        auto truth = ev.eval(w);
        bool same = true;
        for (std::size_t i = 1; i <= w.size(); ++i) same = same && (out->letter(i) == "T") == truth.contains(i);
        r.expect(same, label + ": marking on " + toText(w));
        r.expect(accepts(c, w) == ev.models(w), label + ": acceptance on " + toText(w));
    });
}

void checkRoundtrip(Result& r, const Cascade& c, const Formula& f, const std::string& label) {
    Formula g = cascadeToFormula(c);
    Evaluator eg(g), ef(f);
    sweep(sigmaFor(f), 0, 4, [&](const DataWord& w) {
        r.expect(eg.models(w) == ef.models(w), label + ": roundtrip on " + toText(w));
    });
}

const std::vector<std::string> kBrSuite{"Pc q", named::kBridge, "Hg (a | firstc)", named::kPhi1, named::kPhi4};

// 8. Cascade compilations.
Result criterion8() {
    Result r;
    for (const auto& t : kBmaSuite) {
        Formula f = parse(t);
        auto w = compHeight(f, Basis::BMA, true).height;
        Cascade c = bmaToCascade(f), s = bmaToCascade(f, true);
        r.expect(w && c.height() == *w, t + ": cascade height " + std::to_string(c.height()) + " vs " + opt(w));
        r.expect(w && s.height() <= kSequentialFactor * *w, t + ": sequential height " + std::to_string(s.height()));
        checkMarking(r, c, f, "bma " + t);
        checkMarking(r, s, f, "sequential " + t);
        checkRoundtrip(r, c, f, "bma " + t);
    }
    for (const auto& t : kBrSuite) {
        Formula f = parse(t);
        auto w = compHeight(f, Basis::BR, true).height;
        Cascade c = brToCmtCascade(f);
        r.expect(w && c.height() == *w, t + ": CMT cascade height " + std::to_string(c.height()) + " vs " + opt(w));
        checkMarking(r, c, f, "cmt " + t);
        checkRoundtrip(r, c, f, "cmt " + t);
    }
    r.summary = std::to_string(kBmaSuite.size()) + " BMA + " + std::to_string(kBrSuite.size()) +
                " BR formulas, n<=4, sequential <= " + std::to_string(kSequentialFactor) + "k";
    return r;
}

// 9. Compiled cascades as data automata.
Result criterion9() {
    Result r;
    for (const auto& t : kBmaSuite) {
        Formula f = parse(t);
        Evaluator ev(f);
        for (bool seq : {false, true}) {
            DataAutomaton da = cascadeToDataAutomaton(bmaToCascade(f, seq));
            sweep(sigmaFor(f), 0, 4, [&](const DataWord& w) {
                bool acc = !w.empty() && membership(da, w).accepted;
                r.expect(acc == ev.models(w), t + (seq ? " (sequential)" : "") + " on " + toText(w));
            });
        }
    }
    r.summary = std::to_string(kBmaSuite.size()) + " formulas, both cascade plans, n<=4";
    return r;
}

Dltl randomDltl(std::mt19937& rng, int depth) {
    using namespace dltl;
    if (depth == 0 || rng() % 4 == 0) {
        switch (rng() % 5) {
            case 0: return dltl::prop("a");
            case 1: return dltl::prop("b");
            case 2: return S();
            case 3: return P();
            default: return rng() % 2 ? tt() : ff();
        }
    }
    switch (rng() % 5) {
        case 0: return neg(randomDltl(rng, depth - 1));
        case 1: return conj(randomDltl(rng, depth - 1), randomDltl(rng, depth - 1));
        case 2: return disj(randomDltl(rng, depth - 1), randomDltl(rng, depth - 1));
        case 3: return unary(static_cast<DUnary>(rng() % 8), randomDltl(rng, depth - 1));
        default:
            return binary(static_cast<DBinary>(rng() % 4), randomDltl(rng, depth - 1), randomDltl(rng, depth - 1));
    }
}

bool notInClassAt(const DataWord& w, const std::set<std::size_t>& phi, NotInClass k, std::size_t i) {
    for (std::size_t j = 1; j <= w.size(); ++j) {
        if (!phi.count(j) || w.value(j) == w.value(i)) continue;
        if (k == NotInClass::FarFuture && j > i + 1) return true;
        if (k == NotInClass::DeepPast && j + 1 < i) return true;
        if (k == NotInClass::Future && j > i) return true;
        if (k == NotInClass::Past && j < i) return true;
    }
    return false;
}

// 10. DLTL and FO2.
Result criterion10() {
    Result r;
    // dltlToMu
    std::vector<Dltl> ds;
    for (const char* t : {"Fc (a & Xg b)", "a Ug b", "!(a Sc S)", "!Fg !(a -> Fc b)", "Pg (b & Yc a) Uc P"})
        ds.push_back(parseDltl(t));
    std::mt19937 rng(11);
    for (int k = 0; k < 40; ++k) ds.push_back(randomDltl(rng, 3));
    for (const auto& d : ds) {
        Evaluator ev(dltlToMu(d));
        sweep(kAB, 0, 5, [&](const DataWord& w) {
            r.expect(ev.eval(w) == evalDltl(w, d), "dltlToMu " + print(d) + " on " + toText(w));
        });
    }
    // Not-in-class modalities.
    std::vector<Dltl> args{dltl::prop("a"), dltl::prop("b"), parseDltl("a & Xg b"), parseDltl("S | Yc a")};
    for (const auto& phi : args)
        for (NotInClass k : {NotInClass::FarFuture, NotInClass::DeepPast, NotInClass::Future, NotInClass::Past}) {
            Dltl e = expandNotInClass(k, phi);
            r.expect(isUnaryDltl(e), std::string("unary ") + name(k));
            sweep(kAB, 0, 6, [&](const DataWord& w) {
                auto truth = evalDltl(w, phi).positions();
                std::set<std::size_t> ts(truth.begin(), truth.end());
                auto got = evalDltl(w, e);
                bool same = true;
                for (std::size_t i = 1; i <= w.size(); ++i) same = same && got.contains(i) == notInClassAt(w, ts, k, i);
                r.expect(same, std::string(name(k)) + " " + print(phi) + " on " + toText(w));
            });
        }
    // fo2ToUdltl.
    const std::vector<std::string> fo2Suite{
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
    std::size_t over = 0;
    double worstRatio = 0;
    for (const auto& t : fo2Suite) {
        Fo2 f = parseFo2(t);
        r.expect(quantifierDepth(f) <= 2, "quantifier depth of " + t);
        Dltl d = fo2ToUdltl(f);
        std::size_t qd = quantifierDepth(f), md = modalDepth(d);
        if (qd > 0) worstRatio = std::max(worstRatio, static_cast<double>(md) / static_cast<double>(qd));
        bool within = md <= kFo2DepthFactor * qd;
        over += !within;
        r.expect(within, "modal depth " + std::to_string(md) + " > " + std::to_string(kFo2DepthFactor) + " x " +
                             std::to_string(qd) + " for " + t);
        sweep(kAB, 0, 5, [&](const DataWord& w) {
            auto got = evalDltl(w, d);
            bool same = true;
            for (std::size_t i = 1; i <= w.size(); ++i) same = same && evalFo2(w, f, {i, std::nullopt}) == got.contains(i);
            r.expect(same, "fo2ToUdltl " + t + " on " + toText(w));
        });
    }
    // udltlToFo2 size slope.
    std::vector<std::size_t> sizes;
    Dltl f = dltl::prop("a");
    for (int k = 0; k < 24; ++k) {
        f = dltl::conj(dltl::unary(static_cast<DUnary>(k % 8), f), dltl::prop(k % 2 ? "a" : "b"));
        sizes.push_back(size(udltlToFo2(f)));
    }
    std::set<std::size_t> slopes;
    for (std::size_t k = 8; k < sizes.size(); ++k) slopes.insert(sizes[k] - sizes[k - 8]);
    r.expect(slopes.size() == 1, "udltlToFo2 slope not constant");
    std::ostringstream s;
    s << ds.size() << " dltlToMu, 16 not-in-class, " << fo2Suite.size() << " fo2 formulas; " << over
      << " exceed modal depth " << kFo2DepthFactor << "x quantifier depth (worst ratio " << worstRatio
      << "); udltlToFo2 slope " << (slopes.size() == 1 ? std::to_string(*slopes.begin()) + " per 8 layers" : "varies");
    r.summary = s.str();
    return r;
}

bool monotoneBijection(const DataWord& w) {
    std::vector<std::size_t> as, bs;
    for (std::size_t i = 1; i <= w.size(); ++i) {
        if (w.letter(i) == "a") as.push_back(i);
        if (w.letter(i) == "b") bs.push_back(i);
    }
    if (as.size() != bs.size()) return false;
    std::vector<std::size_t> partner;
    for (std::size_t x : as) {
        std::vector<std::size_t> rel;
        for (std::size_t y : bs)
            if (w.value(x) == w.value(y)) rel.push_back(y);
        if (rel.size() != 1) return false;
        partner.push_back(rel[0]);
    }
    for (std::size_t y : bs) {
        std::size_t c = 0;
        for (std::size_t x : as) c += w.value(x) == w.value(y);
        if (c != 1) return false;
    }
    return std::is_sorted(partner.begin(), partner.end());
}

// 11. Reductions.
Result criterion11() {
    Result r;
    auto t0 = Clock::now();
    Evaluator mb(monotoneBijectionFormula("a", "b"));
    r.expect(isMuOnly(monotoneBijectionFormula("a", "b")), "mu-only");
    // Sentences hold at position 1; the empty word has none.
    sweep({"a", "b", "c"}, 1, 6, [&](const DataWord& w) {
        r.expect(mb.models(w) == monotoneBijection(w), "monotone bijection on " + toText(w));
    });
    PcpInstance I{{{"ab", "a"}, {"b", "bb"}}, "A", "B"};
    // 1 2: ab.b == a.bb
    r.expect(std::string("ab") + "b" == std::string("a") + "bb", "1 2 solves I");
    r.expect(isSolution(I, {1, 2}), "isSolution(1 2)");
    Formula f = pcpFormula(I);
    r.expect(isMuOnly(f), "pcpFormula mu-only");
    DataWord enc = encodeSolution(I, {1, 2});
    r.expect(models(enc, f), "pcpFormula on " + toText(enc));
    auto found = searchPcpWitness(I, 12);
    r.expect(found && models(*found, f), "bounded search up to 12");
    double secs = since(t0);
    r.expect(secs < kC11Seconds, "runtime");
    r.summary = "encoding " + toText(enc) + ", search found " + (found ? "length " + std::to_string(found->size()) : "none") +
                ", " + std::to_string(secs).substr(0, 5) + " s (limit " + std::to_string(static_cast<int>(kC11Seconds)) +
                " s)";
    return r;
}

}  // namespace

// Arguments: unit test executables, run and timed for criterion 12.
int main(int argc, char** argv) {
    auto t0 = Clock::now();
    const std::vector<std::pair<const char*, Result (*)()>> criteria{
        {"marking proposition", criterion1}, {"example word w0", criterion2},
        {"nu to data automaton", criterion3}, {"guardedness", criterion4},
        {"BR fixpoint collapse", criterion5}, {"fragment table", criterion6},
        {"BMA to BR", criterion7},           {"cascade compilations", criterion8},
        {"BMA inside DA", criterion9},        {"DLTL and FO2", criterion10},
        {"reductions", criterion11}};
    bool all = true;
    int n = 0;
    for (const auto& [title, fn] : criteria) {
        ++n;
        Result r;
        auto tc = Clock::now();
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.expect(false, std::string("exception: ") + e.what());
        }
        all = all && r.ok();
        std::cout << "criterion " << n << " " << (r.ok() ? "PASS" : "FAIL") << ": " << title << "; " << r.summary
                  << "; " << r.checks - r.failures << "/" << r.checks << " checks, "
                  << std::to_string(since(tc)).substr(0, 5) << " s\n";
        for (const auto& note : r.notes) std::cout << "    " << note << "\n";
        std::cout.flush();
    }

    Result r12;
    auto tu = Clock::now();
    for (int i = 1; i < argc; ++i) {
        std::string cmd = std::string("\"") + argv[i] + "\" > /dev/null 2>&1";
        r12.expect(std::system(cmd.c_str()) == 0, std::string("unit suite failed: ") + argv[i]);
    }
    double unitSecs = since(tu), total = since(t0);
    r12.expect(total < kTotalSeconds, "wall clock");
    r12.expect(gAllExhaustive, "a sweep missed words");
    all = all && r12.ok();
    std::cout << "criterion 12 " << (r12.ok() ? "PASS" : "FAIL") << ": wall clock; " << argc - 1
              << " unit suites in " << std::to_string(unitSecs).substr(0, 6) << " s, total "
              << std::to_string(total).substr(0, 6) << " s (limit " << static_cast<int>(kTotalSeconds) << " s); "
              << gSweeps << " sweeps, " << gWords << " words, all exhaustive: " << (gAllExhaustive ? "yes" : "no")
              << "\n";
    for (const auto& note : r12.notes) std::cout << "    " << note << "\n";
    return all ? 0 : 1;
}
