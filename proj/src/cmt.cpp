#include <functional>
#include <map>

#include "cascade_plan.hpp"
#include "mudw/cascades.hpp"
#include "mudw/data_automata.hpp"
#include "mudw/fragments.hpp"

namespace mudw {

std::optional<CmtRun> runCmt(const Cmt& t, const std::vector<int>& input, const WordStructure& ws) {
    if (input.size() != ws.n) throw InputError("runCmt: input length differs from the word");
    int n = static_cast<int>(input.size());
    CmtRun r;
    r.states.assign(n, -1);
    r.output.assign(n, -1);
    for (int k = 0; k < n; ++k) {
        int i = t.forward ? k : n - 1 - k;
        int prev = k == 0 ? t.initial : r.states[t.forward ? i - 1 : i + 1];
        int link = t.forward ? ws.cpred[i] : ws.csucc[i];
        int mem = link < 0 ? -1 : r.states[link];
        auto st = t.step(prev, mem, input[i]);
        if (!st) return std::nullopt;
        r.states[i] = st->first;
        r.output[i] = st->second;
        int end = t.forward ? ws.csucc[i] : ws.cpred[i];
        if (end < 0 && !t.classFinal[st->first]) return std::nullopt;
    }
    int last = n == 0 ? t.initial : r.states[t.forward ? n - 1 : 0];
    if (!t.globalFinal[last]) return std::nullopt;
    return r;
}

namespace {

// Atoms of one guarded nu-only layer, created on demand and kept only as far as later
// steps consult them: the children of modal members. Key -1 is the virtual state before
// the first position read, or the missing class neighbour.
class LayerMachine {
public:
    LayerMachine(const Layer& l, bool forward, const std::vector<std::string>& letters)
        : forward_(forward),
          g_(swapFixpoints(toGuarded(l.skeleton), Kind::Mu, Kind::Nu)),
          tab_(g_, false,
               forward ? std::vector<Zero>{Zero::S, Zero::P, Zero::FirstG, Zero::FirstC}
                       : std::vector<Zero>{Zero::S, Zero::P, Zero::LastG, Zero::LastC}) {
        root_ = tab_.indexOf(g_);
        for (const auto& f : tab_.features()) {
            auto it = std::find(l.holes.begin(), l.holes.end(), f);
            if (it == l.holes.end()) throw InputError("cmt: unexpected free variable '" + f + "'");
            holeOf_.push_back(static_cast<int>(it - l.holes.begin()));
        }
        const auto& tl = tab_.letters();
        for (std::size_t o = 0; o <= letters.size(); ++o) {
            int k = static_cast<int>(tl.size());
            if (o < letters.size()) {
                auto it = std::find(tl.begin(), tl.end(), letters[o]);
                if (it != tl.end()) k = static_cast<int>(it - tl.begin());
            }
            letterOf_.push_back(k);
        }
        for (int m : tab_.modal()) {
            if (isFuture(tab_.basis()[m]->mod) == forward_) throw InputError("cmt: layer reads the wrong direction");
            int c = tab_.childOf(m);
            auto it = std::find(keyed_.begin(), keyed_.end(), c);
            keyPos_.push_back(static_cast<int>(it - keyed_.begin()));
            if (it == keyed_.end()) keyed_.push_back(c);
        }
    }

    // Next key and the truth of the layer here.
    std::optional<std::pair<int, bool>> step(int prev, int mem, int orig, bool p, bool s, std::uint32_t holeBits) {
        std::vector<char> fb;
        for (Zero z : tab_.zeros()) {
            switch (z) {
                case Zero::S: fb.push_back(s); break;
                case Zero::P: fb.push_back(p); break;
                case Zero::FirstG:
                case Zero::LastG: fb.push_back(prev < 0); break;
                default: fb.push_back(mem < 0); break;
            }
        }
        for (std::size_t j = 0; j < tab_.modal().size(); ++j) {
            int src = isGlobal(tab_.basis()[tab_.modal()[j]]->mod) ? prev : mem;
            fb.push_back(src >= 0 && keys_[src][keyPos_[j]]);
        }
        std::uint32_t feats = 0;
        for (std::size_t j = 0; j < holeOf_.size(); ++j)
            if ((holeBits >> holeOf_[j]) & 1) feats |= 1u << j;
        auto a = tab_.complete(letterOf_[orig], feats, fb);
        if (!a) return std::nullopt;
        std::vector<char> key;
        for (int c : keyed_) key.push_back(a->in[c]);
        auto [it, fresh] = ids_.emplace(key, static_cast<int>(keys_.size()));
        if (fresh) keys_.push_back(key);
        return std::make_pair(it->second, a->in[root_] != 0);
    }

private:
    bool forward_;
    Formula g_;
    AtomTable tab_;
    int root_ = -1;
    std::vector<int> holeOf_;
    std::vector<int> letterOf_;
    std::vector<int> keyed_;   // basis indices kept in keys
    std::vector<int> keyPos_;  // per modal member, position of its child in the key
    std::map<std::vector<char>, int> ids_;
    std::vector<std::vector<char>> keys_;
};

}  // namespace

Cascade brToCmtCascade(const Formula& f) {
    if (!isSentence(f)) throw InputError("brToCmtCascade: formula must be a sentence");
    auto h = compHeight(f, Basis::BR, true);
    if (!h.height) throw InputError("brToCmtCascade: formula is not in BR");
    auto ps = propositions(f);
    std::vector<std::string> letters(ps.begin(), ps.end());
    detail::StagePlan plan(*h.witness, letters);
    Cascade c;
    c.letters = letters;
    c.other = true;
    for (int s = 0; s < plan.height(); ++s) {
        bool forward = plan.kindAt(s) == LayerKind::Past;
        CascadeStage st;
        st.kind = forward ? StageKind::ForwardCmt : StageKind::BackwardCmt;
        st.in = plan.inAlphabet(s);
        st.out = plan.outLetters(s);
        const auto& layers = plan.computed(s);
        std::vector<LayerMachine> ms;
        for (int v : layers) ms.emplace_back(*plan.nodes()[v].layer, forward, letters);
        std::size_t m = layers.size();

        Cmt& t = st.cmt;
        t.forward = forward;
        t.numIn = st.in.size();
        t.numOut = static_cast<int>(st.out.size());
        t.initial = 0;
        std::map<std::vector<int>, int> ids;
        std::vector<std::vector<int>> tuples{std::vector<int>(m, -1)};
        ids.emplace(tuples[0], 0);
        auto apply = [&](int q, int mem) {
            std::vector<int> pv = tuples[q];
            std::vector<int> none(m, -1);
            std::vector<int> mv = mem < 0 ? none : tuples[mem];
            for (int b = 0; b < t.numIn; ++b) {
                auto d = plan.decode(s, st.in.letterOf(b));
                std::vector<int> next(m);
                std::map<int, bool> values;
                bool ok = true;
                for (std::size_t j = 0; j < m && ok; ++j) {
                    auto a = ms[j].step(pv[j], mv[j], d.orig, st.in.pOf(b), st.in.sOf(b),
                                        plan.childBits(layers[j], d.bits));
                    if (!a) {
                        ok = false;
                        break;
                    }
                    next[j] = a->first;
                    values[layers[j]] = a->second;
                }
                if (!ok) continue;
                auto [it, fresh] = ids.emplace(next, static_cast<int>(tuples.size()));
                if (fresh) tuples.push_back(next);
                t.delta[{q, mem, b}] = {it->second, plan.outLetter(s, d, values)};
            }
        };
        // Each (prev, memory) pair is handled when its larger member is processed. The
        // initial state never serves as memory.
        for (int x = 0; x < static_cast<int>(tuples.size()); ++x) {
            apply(x, -1);
            for (int y = 1; y <= x; ++y) apply(x, y);
            if (x >= 1)
                for (int y = 0; y < x; ++y) apply(y, x);
        }
        t.numStates = static_cast<int>(tuples.size());
        t.classFinal.assign(t.numStates, 1);
        t.globalFinal.assign(t.numStates, 1);
        c.stages.push_back(std::move(st));
    }
    c.accepting = std::set<int>{1};
    return c;
}

namespace detail {

std::vector<Formula> cmtToFormulas(const Cmt& t, const std::vector<Formula>& tests, std::vector<Formula>& conds) {
    std::set<std::string> used;
    for (const auto& f : tests) {
        auto a = allNames(f);
        used.insert(a.begin(), a.end());
    }
    std::vector<std::string> xv(t.numStates);
    for (int q = 0; q < t.numStates; ++q) {
        xv[q] = freshName(used, "q" + std::to_string(q));
        used.insert(xv[q]);
    }
    Mod gm = t.forward ? Mod::Yg : Mod::Xg, cm = t.forward ? Mod::Yc : Mod::Xc;
    Zero gStart = t.forward ? Zero::FirstG : Zero::LastG, cStart = t.forward ? Zero::FirstC : Zero::LastC;
    Zero gEnd = t.forward ? Zero::LastG : Zero::FirstG, cEnd = t.forward ? Zero::LastC : Zero::FirstC;
    // Holds where a transition from (p, mem) on one of the grouped inputs can fire, given
    // formulas for "the state here is q".
    auto edge = [&](int p, int mem, const std::set<int>& ins, const std::function<Formula(int)>& x) {
        Formula prev = mod(gm, x(p));
        if (p == t.initial) prev = orS(zero(gStart), prev);
        Formula m = mem < 0 ? zero(cStart) : mod(cm, x(mem));
        std::vector<Formula> ts;
        for (int b : ins) ts.push_back(tests[b]);
        return andAll({prev, m, orAll(ts)});
    };
    std::map<std::tuple<int, int, int>, std::set<int>> byTarget, byOut;  // (q or o, p, mem) -> inputs
    for (const auto& [k, v] : t.delta) {
        auto [p, mem, b] = k;
        byTarget[{v.first, p, mem}].insert(b);
        byOut[{v.second, p, mem}].insert(b);
    }
    VectorialFormula sys{Kind::Nu, xv, std::vector<Formula>(t.numStates, mkFalse())};
    for (const auto& [k, ins] : byTarget) {
        auto [q, p, mem] = k;
        sys.bodies[q] = orS(sys.bodies[q], edge(p, mem, ins, [&](int y) { return var(xv[y]); }));
    }
    std::vector<Formula> xf(t.numStates);
    for (int q = 0; q < t.numStates; ++q) xf[q] = bekic(sys, xv[q]);
    std::vector<Formula> r(t.numOut, mkFalse());
    for (const auto& [k, ins] : byOut) {
        auto [o, p, mem] = k;
        r[o] = orS(r[o], edge(p, mem, ins, [&](int y) { return xf[y]; }));
    }
    auto finality = [&](const std::vector<char>& fin, Zero end) {
        std::vector<Formula> ok;
        bool all = true;
        for (int q = 0; q < t.numStates; ++q) {
            if (fin[q]) ok.push_back(xf[q]);
            else if (q != t.initial) all = false;
        }
        if (!all) conds.push_back(sugar(Sugar::Gg, orS(zero(end, true), orAll(ok))));
    };
    finality(t.globalFinal, gEnd);
    finality(t.classFinal, cEnd);
    return r;
}

}  // namespace detail

}  // namespace mudw
