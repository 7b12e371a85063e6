#include "mudw/cascades.hpp"

#include <algorithm>
#include <functional>

#include "cascade_plan.hpp"
#include "mudw/fragments.hpp"

namespace mudw {

const char* name(StageKind k) {
    switch (k) {
        case StageKind::Global: return "global";
        case StageKind::Class: return "class";
        case StageKind::ForwardCmt: return "forward-cmt";
        case StageKind::BackwardCmt: return "backward-cmt";
    }
    return "?";
}

std::optional<std::pair<int, int>> Cmt::step(int q, int mem, int in) const {
    auto it = delta.find({q, mem, in});
    if (it == delta.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------- plan

namespace detail {

StagePlan::StagePlan(const Layer& root, std::vector<std::string> letters) : letters_(std::move(letters)) {
    k_ = static_cast<int>(root.depth());
    computed_.assign(k_, {});
    carryOut_.assign(k_, {});
    add(root, -1, 1);
    for (int v = 0; v < static_cast<int>(nodes_.size()); ++v) {
        computed_[nodes_[v].stage].push_back(v);
        int p = nodes_[v].parent;
        if (p < 0) continue;
        for (int s = nodes_[v].stage; s < nodes_[p].stage; ++s) carryOut_[s].push_back(v);
    }
    for (int s = 0; s < k_; ++s)
        for (int v : computed_[s])
            if (nodes_[v].layer->kind != kindAt(s)) throw InputError("cascade: mixed layer kinds at one depth");
    if (k_ > 0 && carryOut_[k_ - 1].size()) throw InputError("cascade: bad stage plan");
}

void StagePlan::add(const Layer& l, int parent, int depth) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{&l, parent, k_ - depth, {}});
    for (const auto& c : l.children) {
        int cid = static_cast<int>(nodes_.size());
        nodes_[id].children.push_back(cid);
        add(c, id, depth + 1);
    }
}

WordAlphabet StagePlan::inAlphabet(int s) const {
    if (s == 0) return WordAlphabet{letters_, true, true, {}};
    return WordAlphabet{outLetters(s - 1), false, true, {}};
}

std::vector<std::string> StagePlan::outLetters(int s) const {
    if (s == k_ - 1) return {"F", "T"};
    std::size_t c = carryOut_[s].size();
    std::vector<std::string> r;
    for (std::size_t o = 0; o <= letters_.size(); ++o) {
        std::string base = o < letters_.size() ? letters_[o] : "other";
        for (std::uint32_t b = 0; b < (1u << c); ++b) {
            std::string n = base;
            if (c) {
                n += "_";
                for (std::size_t j = 0; j < c; ++j) n += ((b >> j) & 1) ? '1' : '0';
            }
            r.push_back(n);
        }
    }
    return r;
}

StagePlan::Decoded StagePlan::decode(int s, int inLetter) const {
    if (s == 0) return {inLetter, 0};
    std::size_t c = carryOut_[s - 1].size();
    return {inLetter >> c, static_cast<std::uint32_t>(inLetter) & ((1u << c) - 1)};
}

std::uint32_t StagePlan::childBits(int node, std::uint32_t inBits) const {
    const auto& in = carryOut_[nodes_[node].stage - (nodes_[node].stage > 0 ? 1 : 0)];
    std::uint32_t r = 0;
    const auto& ch = nodes_[node].children;
    for (std::size_t j = 0; j < ch.size(); ++j) {
        auto it = std::find(in.begin(), in.end(), ch[j]);
        if (it == in.end()) throw InputError("cascade: child not carried");
        if ((inBits >> (it - in.begin())) & 1) r |= 1u << j;
    }
    return r;
}

int StagePlan::outLetter(int s, const Decoded& d, const std::map<int, bool>& values) const {
    if (s == k_ - 1) return values.at(computed_[s][0]) ? 1 : 0;
    const auto& out = carryOut_[s];
    const std::vector<int> empty;
    const auto& in = s > 0 ? carryOut_[s - 1] : empty;
    std::uint32_t bits = 0;
    for (std::size_t j = 0; j < out.size(); ++j) {
        bool v;
        auto it = values.find(out[j]);
        if (it != values.end()) {
            v = it->second;
        } else {
            auto p = std::find(in.begin(), in.end(), out[j]);
            v = (d.bits >> (p - in.begin())) & 1;
        }
        if (v) bits |= 1u << j;
    }
    return (d.orig << out.size()) | static_cast<int>(bits);
}

}  // namespace detail

// ---------------------------------------------------------------- runs

const std::vector<std::string>& Cascade::outputLetters() const {
    return stages.empty() ? letters : stages.back().out;
}

void validate(const Cascade& c) {
    for (std::size_t s = 0; s < c.stages.size(); ++s) {
        const auto& st = c.stages[s];
        bool ok = s == 0 ? st.in.letters == c.letters && st.in.other == c.other
                         : st.in.letters == c.stages[s - 1].out && !st.in.other;
        if (!ok || !st.in.marked || !st.in.features.empty())
            throw InputError("cascade: stage " + std::to_string(s) + " input alphabet mismatch");
        int ni = st.in.size(), no = static_cast<int>(st.out.size());
        if (st.kind == StageKind::Global || st.kind == StageKind::Class) {
            if (st.t.numIn != ni || st.t.numOut != no || st.t.nfa.numSymbols != ni * no)
                throw InputError("cascade: stage " + std::to_string(s) + " transducer shape mismatch");
        } else {
            const Cmt& m = st.cmt;
            if (m.numIn != ni || m.numOut != no || m.initial < 0 || m.initial >= m.numStates ||
                static_cast<int>(m.classFinal.size()) != m.numStates ||
                static_cast<int>(m.globalFinal.size()) != m.numStates ||
                m.forward != (st.kind == StageKind::ForwardCmt))
                throw InputError("cascade: stage " + std::to_string(s) + " CMT shape mismatch");
            for (const auto& [k, v] : m.delta) {
                auto [q, mem, in] = k;
                if (q < 0 || q >= m.numStates || mem < -1 || mem >= m.numStates || in < 0 || in >= ni ||
                    v.first < 0 || v.first >= m.numStates || v.second < 0 || v.second >= no)
                    throw InputError("cascade: stage " + std::to_string(s) + " CMT transition out of range");
            }
        }
    }
    if (c.accepting) {
        int n = c.stages.empty() ? c.inputAlphabet().letterCount() : static_cast<int>(c.stages.back().out.size());
        for (int a : *c.accepting)
            if (a < 0 || a >= n) throw InputError("cascade: accepting letter out of range");
    }
}

namespace {

std::optional<std::vector<int>> runStage(const CascadeStage& st, const std::vector<int>& letters,
                                         const WordStructure& ws) {
    std::size_t n = letters.size();
    std::vector<int> syms(n);
    for (std::size_t i = 0; i < n; ++i) syms[i] = st.in.encode(letters[i], ws.types[i].pred, ws.types[i].succ, 0);
    switch (st.kind) {
        case StageKind::Global: return runFunctional(st.t, syms);
        case StageKind::Class: {
            std::vector<std::vector<int>> members(ws.numClasses);
            for (std::size_t i = 0; i < n; ++i) members[ws.classId[i]].push_back(static_cast<int>(i));
            std::vector<int> out(n);
            for (const auto& m : members) {
                std::vector<int> in;
                for (int i : m) in.push_back(syms[i]);
                auto o = runFunctional(st.t, in);
                if (!o) return std::nullopt;
                for (std::size_t j = 0; j < m.size(); ++j) out[m[j]] = (*o)[j];
            }
            return out;
        }
        default: {
            auto r = runCmt(st.cmt, syms, ws);
            if (!r) return std::nullopt;
            return r->output;
        }
    }
}

// Letter indices after each stage, the input first.
std::optional<std::vector<std::vector<int>>> runIndices(const Cascade& c, const DataWord& w, const WordStructure& ws) {
    validate(c);
    WordAlphabet in = c.inputAlphabet();
    std::vector<std::vector<int>> r(1);
    for (const auto& l : w.letters()) {
        int k = in.letterIndex(l);
        if (k < 0) throw InputError("cascade: letter '" + l + "' outside the input alphabet");
        r[0].push_back(k);
    }
    for (const auto& st : c.stages) {
        auto o = runStage(st, r.back(), ws);
        if (!o) return std::nullopt;
        r.push_back(std::move(*o));
    }
    return r;
}

}  // namespace

std::optional<std::vector<DataWord>> traceCascade(const Cascade& c, const DataWord& w) {
    WordStructure ws(w);
    auto r = runIndices(c, w, ws);
    if (!r) return std::nullopt;
    std::vector<DataWord> words{w};
    for (std::size_t s = 0; s < c.stages.size(); ++s) {
        std::vector<Letter> ls;
        for (int o : (*r)[s + 1]) ls.push_back(c.stages[s].out[o]);
        words.emplace_back(std::move(ls), w.values());
    }
    return words;
}

std::optional<DataWord> runCascade(const Cascade& c, const DataWord& w) {
    auto t = traceCascade(c, w);
    if (!t) return std::nullopt;
    return t->back();
}

bool accepts(const Cascade& c, const DataWord& w) {
    WordStructure ws(w);
    auto r = runIndices(c, w, ws);
    if (!r || w.empty()) return false;
    return !c.accepting || c.accepting->count(r->back()[0]);
}

Transducer productTransducer(const Transducer& a, const Transducer& b) {
    if (a.numIn != b.numIn) throw InputError("productTransducer: input alphabets differ");
    int na = a.numOut, nb = b.numOut, no = na * nb;
    Transducer t;
    t.numIn = a.numIn;
    t.numOut = no;
    t.inNames = a.inNames;
    t.nfa = combine(a.nfa, b.nfa, a.numIn * no, [&](int sym) {
        int in = sym / no, o = sym % no;
        return std::vector<std::pair<int, int>>{{a.sym(in, o / nb), b.sym(in, o % nb)}};
    });
    if (static_cast<int>(a.outNames.size()) == na && static_cast<int>(b.outNames.size()) == nb)
        for (int o = 0; o < no; ++o) t.outNames.push_back(a.outNames[o / nb] + "_" + b.outNames[o % nb]);
    return t;
}

Cascade compose(const Cascade& a, const Cascade& b) {
    validate(a);
    validate(b);
    if (a.stages.empty() || b.letters != a.outputLetters() || b.other)
        throw InputError("compose: second cascade must read the first one's output letters");
    if (a.accepting) throw InputError("compose: first cascade has an acceptance condition");
    Cascade c = a;
    c.stages.insert(c.stages.end(), b.stages.begin(), b.stages.end());
    c.accepting = b.accepting;
    return c;
}

// ---------------------------------------------------------------- from BMA

namespace {

void nameSymbols(Transducer& t, const WordAlphabet& in, const std::vector<std::string>& out) {
    t.inNames.clear();
    for (int b = 0; b < in.size(); ++b) t.inNames.push_back(in.symbolName(b));
    t.outNames = out;
}

// Left pass then the right pass, both in the stage's mode.
std::vector<CascadeStage> splitSequential(const CascadeStage& st) {
    if (isInputDeterministic(st.t)) return {st};
    Bimachine bm = sequentialize(st.t);
    CascadeStage l = st, r = st;
    l.out.clear();
    for (int m = 0; m < bm.left.numOut; ++m) l.out.push_back("m" + std::to_string(m));
    l.t = bm.left;
    nameSymbols(l.t, l.in, l.out);
    r.in = WordAlphabet{l.out, false, true, {}};
    Transducer fwd = rightAsForward(bm);
    int no = static_cast<int>(st.out.size());
    r.t.numIn = r.in.size();
    r.t.numOut = no;
    r.t.nfa = relabel(fwd.nfa, r.t.numIn * no, [&](int sym) {
        int b = sym / no, o = sym % no;
        return std::vector<int>{r.in.letterOf(b) * no + o};
    });
    nameSymbols(r.t, r.in, r.out);
    return {l, r};
}

}  // namespace

Cascade bmaToCascade(const Formula& f, bool sequential) {
    if (!isSentence(f)) throw InputError("bmaToCascade: formula must be a sentence");
    auto h = compHeight(f, Basis::BMA, true);
    if (!h.height) throw InputError("bmaToCascade: formula is not in BMA");
    auto ps = propositions(f);
    std::vector<std::string> letters(ps.begin(), ps.end());
    detail::StagePlan plan(*h.witness, letters);
    Cascade c;
    c.letters = letters;
    c.other = true;
    for (int s = 0; s < plan.height(); ++s) {
        CascadeStage st;
        bool global = plan.kindAt(s) == LayerKind::Global;
        st.kind = global ? StageKind::Global : StageKind::Class;
        st.in = plan.inAlphabet(s);
        st.out = plan.outLetters(s);
        int ni = st.in.size(), no = static_cast<int>(st.out.size());
        const auto& layers = plan.computed(s);
        Transducer acc;
        for (std::size_t j = 0; j < layers.size(); ++j) {
            int v = layers[j];
            const Layer& l = *plan.nodes()[v].layer;
            WordAlphabet al{letters, true, true, {}};
            for (const auto& hole : l.holes) al.features.push_back(Feature{hole, var(hole), mkFalse()});
            Transducer lt = markingTransducer(l.skeleton, global ? WordKind::Global : WordKind::Class, al);
            Transducer r;
            r.numIn = ni;
            r.numOut = 2;
            r.nfa = normalize(relabel(lt.nfa, ni * 2, [&](int sym) {
                int b = sym / 2, o = sym % 2;
                auto d = plan.decode(s, st.in.letterOf(b));
                int lb = al.encode(d.orig, st.in.pOf(b), st.in.sOf(b), plan.childBits(v, d.bits));
                return std::vector<int>{lb * 2 + o};
            }));
            acc = j == 0 ? r : productTransducer(acc, r);
        }
        int m = static_cast<int>(layers.size());
        st.t.numIn = ni;
        st.t.numOut = no;
        st.t.nfa = normalize(project(acc.nfa, ni * no, [&](int sym) {
            int b = sym / acc.numOut, mask = sym % acc.numOut;
            std::map<int, bool> values;
            for (int j = 0; j < m; ++j) values[layers[j]] = (mask >> (m - 1 - j)) & 1;
            return b * no + plan.outLetter(s, plan.decode(s, st.in.letterOf(b)), values);
        }));
        nameSymbols(st.t, st.in, st.out);
        if (sequential) {
            auto parts = splitSequential(st);
            c.stages.insert(c.stages.end(), parts.begin(), parts.end());
        } else {
            c.stages.push_back(std::move(st));
        }
    }
    c.accepting = std::set<int>{1};
    return c;
}

// ---------------------------------------------------------------- back to a formula

Formula cascadeToFormula(const Cascade& c) {
    validate(c);
    WordAlphabet in0 = c.inputAlphabet();
    std::vector<Formula> letterF;
    for (int l = 0; l < in0.letterCount(); ++l) {
        if (l < static_cast<int>(c.letters.size())) {
            letterF.push_back(prop(c.letters[l]));
        } else {
            std::vector<Formula> ns;
            for (const auto& p : c.letters) ns.push_back(nprop(p));
            letterF.push_back(andAll(ns));
        }
    }
    std::vector<Formula> conds;
    for (const auto& st : c.stages) {
        std::vector<Formula> tests(st.in.size());
        for (int b = 0; b < st.in.size(); ++b)
            tests[b] = andAll({letterF[st.in.letterOf(b)], zero(Zero::P, !st.in.pOf(b)), zero(Zero::S, !st.in.sOf(b))});
        std::vector<Formula> outs;
        if (st.kind == StageKind::Global || st.kind == StageKind::Class)
            outs = transducerToFormulas(st.t, tests, st.kind == StageKind::Global ? WordKind::Global : WordKind::Class);
        else
            outs = detail::cmtToFormulas(st.cmt, tests, conds);
        // Some output everywhere iff every run exists.
        conds.push_back(sugar(Sugar::Gg, orAll(outs)));
        letterF = std::move(outs);
    }
    if (c.accepting) {
        std::vector<Formula> acc;
        for (int a : *c.accepting) acc.push_back(letterF[a]);
        conds.push_back(orAll(acc));
    }
    return andAll(conds);
}

// ---------------------------------------------------------------- as a data automaton

DataAutomaton cascadeToDataAutomaton(const Cascade& c) {
    validate(c);
    std::vector<int> globals, classes;
    for (int s = 0; s < static_cast<int>(c.stages.size()); ++s) {
        auto k = c.stages[s].kind;
        if (k == StageKind::Global) globals.push_back(s);
        else if (k == StageKind::Class) classes.push_back(s);
        else throw InputError("cascadeToDataAutomaton: CMT stages are not supported");
    }
    std::size_t k = c.stages.size();
    WordAlphabet in = c.inputAlphabet();

    // Output letter of b: (letters after each stage, input first; P; S).
    std::map<std::vector<int>, int> tupleId;
    std::vector<std::vector<int>> tuples;
    auto intern = [&](const std::vector<int>& t) {
        auto [it, fresh] = tupleId.emplace(t, static_cast<int>(tuples.size()));
        if (fresh) tuples.push_back(t);
        return it->second;
    };

    // b: states are (global stage states, at-first flag).
    std::map<std::vector<int>, int> stateId;
    std::vector<std::vector<int>> states;
    std::vector<std::tuple<int, int, int, int>> edges;  // (src, in, tuple, dst)
    auto state = [&](const std::vector<int>& v) {
        auto [it, fresh] = stateId.emplace(v, static_cast<int>(states.size()));
        if (fresh) states.push_back(v);
        return it->second;
    };
    std::vector<std::vector<int>> inits{{}};
    for (int s : globals) {
        std::vector<std::vector<int>> next;
        for (const auto& v : inits)
            for (int q : c.stages[s].t.nfa.initial) {
                auto w = v;
                w.push_back(q);
                next.push_back(w);
            }
        inits = std::move(next);
    }
    std::vector<int> initIds;
    for (auto v : inits) {
        v.push_back(1);
        initIds.push_back(state(v));
    }
    for (std::size_t done = 0; done < states.size(); ++done) {
        std::vector<int> cur = states[done];
        bool atFirst = cur.back();
        for (int x = 0; x < in.size(); ++x) {
            bool p = in.pOf(x), sb = in.sOf(x);
            std::vector<int> lettersSoFar{in.letterOf(x)};
            std::vector<int> nextStates;
            std::function<void(std::size_t, std::size_t)> go = [&](std::size_t s, std::size_t gi) {
                if (s == k) {
                    if (atFirst && c.accepting && !c.accepting->count(lettersSoFar.back())) return;
                    auto t = lettersSoFar;
                    t.push_back(p);
                    t.push_back(sb);
                    auto ns = nextStates;
                    ns.push_back(0);
                    edges.emplace_back(static_cast<int>(done), x, intern(t), state(ns));
                    return;
                }
                const auto& st = c.stages[s];
                int sym = st.in.encode(lettersSoFar.back(), p, sb, 0);
                int no = static_cast<int>(st.out.size());
                if (st.kind == StageKind::Global) {
                    for (auto [y, q2] : st.t.nfa.delta[cur[gi]]) {
                        if (y / no != sym) continue;
                        lettersSoFar.push_back(y % no);
                        nextStates.push_back(q2);
                        go(s + 1, gi + 1);
                        nextStates.pop_back();
                        lettersSoFar.pop_back();
                    }
                } else {
                    for (int o = 0; o < no; ++o) {
                        lettersSoFar.push_back(o);
                        go(s + 1, gi);
                        lettersSoFar.pop_back();
                    }
                }
            };
            go(0, 0);
        }
    }
    DataAutomaton da;
    da.input = in;
    da.b.numIn = in.size();
    da.b.numOut = static_cast<int>(tuples.size());
    da.b.nfa = Nfa(da.b.numIn * da.b.numOut);
    for (std::size_t q = 0; q < states.size(); ++q) {
        bool fin = !states[q].back();
        for (std::size_t j = 0; j < globals.size(); ++j)
            fin = fin && c.stages[globals[j]].t.nfa.final[states[q][j]];
        da.b.nfa.addState(fin);
    }
    da.b.nfa.initial = initIds;
    for (auto [src, x, t, dst] : edges) da.b.nfa.addTransition(src, da.b.sym(x, t), dst);
    da.b.nfa = trim(da.b.nfa);
    for (int x = 0; x < da.b.numIn; ++x) da.b.inNames.push_back(in.symbolName(x));
    for (const auto& t : tuples) {
        std::string n;
        for (std::size_t j = 0; j + 2 < t.size(); ++j) {
            const auto& names = j == 0 ? in.letters : c.stages[j - 1].out;
            n += (j ? "," : "") + (t[j] < static_cast<int>(names.size()) ? names[t[j]] : std::string("other"));
        }
        da.b.outNames.push_back(n + "/" + toText(Marking{t[t.size() - 2] != 0, t.back() != 0}));
    }

    // c: class stage states in parallel.
    Nfa cn(da.b.numOut);
    std::map<std::vector<int>, int> cid;
    std::vector<std::vector<int>> cstates;
    auto cstate = [&](const std::vector<int>& v) {
        auto [it, fresh] = cid.emplace(v, static_cast<int>(cstates.size()));
        if (fresh) {
            cstates.push_back(v);
            bool fin = true;
            for (std::size_t j = 0; j < classes.size(); ++j) fin = fin && c.stages[classes[j]].t.nfa.final[v[j]];
            cn.addState(fin);
        }
        return it->second;
    };
    std::vector<std::vector<int>> cinits{{}};
    for (int s : classes) {
        std::vector<std::vector<int>> next;
        for (const auto& v : cinits)
            for (int q : c.stages[s].t.nfa.initial) {
                auto w = v;
                w.push_back(q);
                next.push_back(w);
            }
        cinits = std::move(next);
    }
    for (const auto& v : cinits) cn.initial.push_back(cstate(v));
    for (std::size_t done = 0; done < cstates.size(); ++done) {
        for (int t = 0; t < da.b.numOut; ++t) {
            const auto& tup = tuples[t];
            bool p = tup[tup.size() - 2], sb = tup.back();
            std::vector<std::vector<int>> nexts{{}};
            for (std::size_t j = 0; j < classes.size() && !nexts.empty(); ++j) {
                const auto& st = c.stages[classes[j]];
                int want = st.t.sym(st.in.encode(tup[classes[j]], p, sb, 0), tup[classes[j] + 1]);
                std::vector<std::vector<int>> grown;
                for (auto [y, q2] : st.t.nfa.delta[cstates[done][j]]) {
                    if (y != want) continue;
                    for (const auto& v : nexts) {
                        auto w = v;
                        w.push_back(q2);
                        grown.push_back(w);
                    }
                }
                nexts = std::move(grown);
            }
            for (const auto& v : nexts) {
                int dst = cstate(v);
                cn.addTransition(static_cast<int>(done), t, dst);
            }
        }
    }
    da.c = cn;
    validate(da);
    return da;
}

}  // namespace mudw
