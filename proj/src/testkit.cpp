#include "mudw/testkit.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "mudw/evaluator.hpp"

namespace mudw {

Acceptor formulaAcceptor(const Formula& f) {
    auto ev = std::make_shared<Evaluator>(f);
    return {"formula", [ev](const DataWord& w) { return ev->models(w); }};
}

Acceptor automatonAcceptor(const DataAutomaton& a) {
    return {"automaton", [a](const DataWord& w) { return !w.empty() && membership(a, w).accepted; }};
}

Acceptor cascadeAcceptor(const Cascade& c) {
    return {"cascade", [c](const DataWord& w) { return accepts(c, w); }};
}

Acceptor dltlAcceptor(const Dltl& f) {
    return {"dltl", [f](const DataWord& w) { return !w.empty() && evalDltl(w, f).contains(1); }};
}

Acceptor fo2Acceptor(const Fo2& f) {
    return {"fo2", [f](const DataWord& w) { return !w.empty() && evalFo2(w, f, {1, std::nullopt}); }};
}

EquivalenceResult equivalenceCheck(const Acceptor& a, const Acceptor& b, const std::vector<Letter>& alphabet,
                                   std::size_t maxLen) {
    EquivalenceResult r;
    forEachWordUpTo(alphabet, maxLen, [&](const DataWord& w) {
        ++r.visited;
        bool x = a.accepts(w), y = b.accepts(w);
        if (x == y) return true;
        r.counterexample = Counterexample{w, x, y};
        return false;
    });
    return r;
}

Counterexample shrink(const Counterexample& c, const Acceptor& a, const Acceptor& b, std::vector<Letter> alphabet) {
    if (alphabet.empty()) {
        std::set<Letter> ls(c.word.letters().begin(), c.word.letters().end());
        alphabet.assign(ls.begin(), ls.end());
    }
    auto r = equivalenceCheck(a, b, alphabet, c.word.size());
    // The input itself disagrees, so a shorter or equal one is found unless the alphabet
    // misses some of its letters.
    if (r.counterexample && r.counterexample->word.size() <= c.word.size()) return *r.counterexample;
    return c;
}

std::optional<DataWord> boundedSatisfy(const Acceptor& a, const std::vector<Letter>& alphabet, std::size_t maxLen) {
    std::optional<DataWord> found;
    forEachWordUpTo(alphabet, maxLen, [&](const DataWord& w) {
        if (!a.accepts(w)) return true;
        found = w;
        return false;
    });
    return found;
}

const char* name(FragmentKind k) {
    switch (k) {
        case FragmentKind::Any: return "any";
        case FragmentKind::NuOnly: return "nuOnly";
        case FragmentKind::MuOnly: return "muOnly";
        case FragmentKind::BR: return "BR";
        case FragmentKind::BMA: return "BMA";
        case FragmentKind::Pure: return "pure";
    }
    return "?";
}

FragmentSpec parseFragment(const std::string& text) {
    for (FragmentKind k : {FragmentKind::Any, FragmentKind::NuOnly, FragmentKind::MuOnly, FragmentKind::BR,
                           FragmentKind::BMA})
        if (text == name(k)) return {k, LayerKind::Future};
    const std::string pre = "pure:";
    if (text.rfind(pre, 0) == 0)
        for (LayerKind l : {LayerKind::Future, LayerKind::Past, LayerKind::Global, LayerKind::Class})
            if (text.substr(pre.size()) == name(l)) return {FragmentKind::Pure, l};
    throw InputError("unknown fragment '" + text + "'");
}

bool inFragment(const Formula& f, const FragmentSpec& fragment) {
    if (!isSentence(f)) return false;
    switch (fragment.kind) {
        case FragmentKind::Any: return true;
        case FragmentKind::NuOnly: return isNuOnly(f);
        case FragmentKind::MuOnly: return isMuOnly(f);
        case FragmentKind::BR: return compHeight(f, Basis::BR).height.has_value();
        case FragmentKind::BMA: return compHeight(f, Basis::BMA).height.has_value();
        case FragmentKind::Pure: return isPure(f, fragment.pure);
    }
    return false;
}

namespace {

class Generator {
public:
    Generator(std::uint64_t seed, const std::vector<Letter>& letters) : rng_(seed), letters_(letters) {
        used_.insert(letters.begin(), letters.end());
    }

    // Modalities and binder kinds allowed in this layer; holes, if set, give closed
    // subformulas from other layers.
    struct Layer {
        std::vector<Mod> mods;
        std::vector<Kind> binders;
        std::function<Formula(std::size_t)> hole;
    };

    Formula gen(const Layer& l, std::size_t depth, std::vector<std::string>& scope) {
        if (depth == 0 || (depth == 1 && pick(2) == 0)) return leaf(scope);
        switch (pick(l.hole ? 7 : 6)) {
            case 0: return conj(gen(l, depth - 1, scope), gen(l, depth - 1, scope));
            case 1: return disj(gen(l, depth - 1, scope), gen(l, depth - 1, scope));
            case 2:
            case 3: {
                Mod m = l.mods[pick(l.mods.size())];
                Formula c = gen(l, depth - 1, scope);
                return pick(6) == 0 ? tilde(m, c) : mod(m, c);
            }
            case 4:
            case 5: {
                std::string x = freshName(used_, "x");
                used_.insert(x);
                scope.push_back(x);
                Formula body = gen(l, depth - 1, scope);
                scope.pop_back();
                return binder(l.binders[pick(l.binders.size())], x, body);
            }
            default: return l.hole(depth - 1);
        }
    }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

private:
    Formula leaf(const std::vector<std::string>& scope) {
        if (!scope.empty() && pick(2) == 0) return var(scope[pick(scope.size())]);
        switch (pick(12)) {
            case 0:
            case 1:
            case 2:
            case 3:
            case 4: return prop(letters_[pick(letters_.size())]);
            case 5:
            case 6: return nprop(letters_[pick(letters_.size())]);
            case 7:
            case 8: return zero(static_cast<Zero>(pick(6)));
            case 9:
            case 10: return zero(static_cast<Zero>(pick(6)), true);
            default: return pick(2) ? mkTrue() : mkFalse();
        }
    }

    std::mt19937_64 rng_;
    std::vector<Letter> letters_;
    std::set<std::string> used_;
};

std::vector<Mod> modsOf(LayerKind k) {
    std::vector<Mod> r;
    for (Mod m : {Mod::Xg, Mod::Xc, Mod::Yg, Mod::Yc})
        if (modInKind(m, k)) r.push_back(m);
    return r;
}

}  // namespace

Formula randomFormula(const FragmentSpec& fragment, std::size_t depth, std::uint64_t seed,
                      const std::vector<Letter>& letters) {
    if (letters.empty()) throw InputError("randomFormula: no letters");
    Generator g(seed, letters);
    const std::vector<Mod> all{Mod::Xg, Mod::Xc, Mod::Yg, Mod::Yc};
    const std::vector<Kind> both{Kind::Mu, Kind::Nu};
    // Layered generation for BR and BMA: each layer is pure in one kind of the basis and
    // holes are closed formulas of any kind.
    std::function<Formula(LayerKind, std::size_t)> layered;
    layered = [&](LayerKind k, std::size_t d) {
        auto kinds = kindsOf(fragment.kind == FragmentKind::BR ? Basis::BR : Basis::BMA);
        Generator::Layer l{modsOf(k), both, [&](std::size_t dd) { return layered(kinds[g.pick(2)], dd); }};
        std::vector<std::string> scope;
        return g.gen(l, d, scope);
    };
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::string> scope;
        Formula f;
        switch (fragment.kind) {
            case FragmentKind::Any: f = g.gen({all, both, nullptr}, depth, scope); break;
            case FragmentKind::NuOnly: f = g.gen({all, {Kind::Nu}, nullptr}, depth, scope); break;
            case FragmentKind::MuOnly: f = g.gen({all, {Kind::Mu}, nullptr}, depth, scope); break;
            case FragmentKind::Pure: f = g.gen({modsOf(fragment.pure), both, nullptr}, depth, scope); break;
            case FragmentKind::BR: f = layered(g.pick(2) ? LayerKind::Future : LayerKind::Past, depth); break;
            case FragmentKind::BMA: f = layered(g.pick(2) ? LayerKind::Global : LayerKind::Class, depth); break;
        }
        if (inFragment(f, fragment)) return f;
    }
    throw InputError("randomFormula: no formula found in the fragment");
}

}  // namespace mudw
