#include "mudw/serialize.hpp"

#include <map>
#include <set>

namespace mudw {

namespace {

// Wraps json access errors as input errors.
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::string> namesOr(const std::vector<std::string>& names, int n) {
    std::set<std::string> distinct(names.begin(), names.end());
    if (static_cast<int>(names.size()) == n && static_cast<int>(distinct.size()) == n) return names;
    std::vector<std::string> r;
    for (int i = 0; i < n; ++i) r.push_back(std::to_string(i));
    return r;
}

// Symbol by name or by index.
int symbolOf(const Json& j, const std::map<std::string, int>& byName, int n) {
    if (j.is_number_integer()) {
        int s = j.get<int>();
        if (s < 0 || s >= n) throw InputError("symbol index out of range");
        return s;
    }
    auto it = byName.find(j.get<std::string>());
    if (it == byName.end()) throw InputError("unknown symbol '" + j.get<std::string>() + "'");
    return it->second;
}

std::map<std::string, int> indexOf(const std::vector<std::string>& names) {
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < names.size(); ++i) m.emplace(names[i], static_cast<int>(i));
    return m;
}

int stateOf(const Json& j, int n) {
    int q = j.is_string() ? std::stoi(j.get<std::string>()) : j.get<int>();
    if (q < 0 || q >= n) throw InputError("state out of range");
    return q;
}

}  // namespace

Json wordToJson(const DataWord& w) { return Json{{"letters", w.letters()}, {"values", w.values()}}; }

DataWord wordFromJson(const Json& j) {
    return guarded("word", [&] {
        auto ls = j.at("letters").get<std::vector<std::string>>();
        auto vs = j.at("values").get<std::vector<Value>>();
        if (ls.size() != vs.size()) throw InputError("word: letters and values differ in length");
        for (const auto& l : ls)
            if (!isLetterName(l)) throw InputError("word: bad letter '" + l + "'");
        return DataWord(ls, vs);
    });
}

Json nfaToJson(const Nfa& a, const std::vector<std::string>& alphabet) {
    auto names = namesOr(alphabet, a.numSymbols);
    Json states = Json::array(), trans = Json::array(), fin = Json::array(), init = Json::array();
    for (int q = 0; q < a.size(); ++q) {
        states.push_back(std::to_string(q));
        if (a.final[q]) fin.push_back(std::to_string(q));
        for (auto [s, d] : a.delta[q]) trans.push_back(Json::array({std::to_string(q), names[s], std::to_string(d)}));
    }
    for (int q : a.initial) init.push_back(std::to_string(q));
    return Json{{"states", states}, {"alphabet", names}, {"transitions", trans}, {"initial", init}, {"final", fin}};
}

Nfa nfaFromJson(const Json& j) {
    return guarded("automaton", [&] {
        auto names = j.at("alphabet").get<std::vector<std::string>>();
        auto byName = indexOf(names);
        Nfa a(static_cast<int>(names.size()));
        int n = static_cast<int>(j.at("states").size());
        for (int q = 0; q < n; ++q) a.addState(false);
        for (const auto& q : j.at("final")) a.final[stateOf(q, n)] = 1;
        for (const auto& q : j.at("initial")) a.initial.push_back(stateOf(q, n));
        for (const auto& t : j.at("transitions")) {
            if (t.size() != 3) throw InputError("automaton: transitions are [src, letter, dst]");
            a.addTransition(stateOf(t[0], n), symbolOf(t[1], byName, a.numSymbols), stateOf(t[2], n));
        }
        return a;
    });
}

Json transducerToJson(const Transducer& t) {
    auto ins = namesOr(t.inNames, t.numIn), outs = namesOr(t.outNames, t.numOut);
    const Nfa& a = t.nfa;
    Json states = Json::array(), trans = Json::array(), fin = Json::array(), init = Json::array();
    for (int q = 0; q < a.size(); ++q) {
        states.push_back(std::to_string(q));
        if (a.final[q]) fin.push_back(std::to_string(q));
        for (auto [s, d] : a.delta[q])
            trans.push_back(
                Json::array({std::to_string(q), ins[s / t.numOut], outs[s % t.numOut], std::to_string(d)}));
    }
    for (int q : a.initial) init.push_back(std::to_string(q));
    return Json{{"states", states}, {"inputs", ins},  {"outputs", outs},
                {"transitions", trans}, {"initial", init}, {"final", fin}};
}

Transducer transducerFromJson(const Json& j) {
    return guarded("transducer", [&] {
        Transducer t;
        t.inNames = j.at("inputs").get<std::vector<std::string>>();
        t.outNames = j.at("outputs").get<std::vector<std::string>>();
        t.numIn = static_cast<int>(t.inNames.size());
        t.numOut = static_cast<int>(t.outNames.size());
        auto inIdx = indexOf(t.inNames), outIdx = indexOf(t.outNames);
        t.nfa = Nfa(t.numIn * t.numOut);
        int n = static_cast<int>(j.at("states").size());
        for (int q = 0; q < n; ++q) t.nfa.addState(false);
        for (const auto& q : j.at("final")) t.nfa.final[stateOf(q, n)] = 1;
        for (const auto& q : j.at("initial")) t.nfa.initial.push_back(stateOf(q, n));
        for (const auto& tr : j.at("transitions")) {
            if (tr.size() != 4) throw InputError("transducer: transitions are [src, in, out, dst]");
            int in = symbolOf(tr[1], inIdx, t.numIn), out = symbolOf(tr[2], outIdx, t.numOut);
            t.nfa.addTransition(stateOf(tr[0], n), t.sym(in, out), stateOf(tr[3], n));
        }
        return t;
    });
}

Json alphabetToJson(const WordAlphabet& al) {
    if (!al.features.empty()) throw InputError("alphabet with features cannot be serialized");
    return Json{{"letters", al.letters}, {"other", al.other}, {"marked", al.marked}};
}

WordAlphabet alphabetFromJson(const Json& j) {
    return guarded("alphabet", [&] {
        return WordAlphabet{j.at("letters").get<std::vector<std::string>>(), j.at("other").get<bool>(),
                            j.at("marked").get<bool>(), {}};
    });
}

Json automatonToJson(const DataAutomaton& a) {
    return Json{{"input", alphabetToJson(a.input)},
                {"transducer", transducerToJson(a.b)},
                {"classAutomaton", nfaToJson(a.c, namesOr(a.b.outNames, a.b.numOut))}};
}

DataAutomaton automatonFromJson(const Json& j) {
    return guarded("data automaton", [&] {
        DataAutomaton a;
        a.input = alphabetFromJson(j.at("input"));
        a.b = transducerFromJson(j.at("transducer"));
        a.c = nfaFromJson(j.at("classAutomaton"));
        validate(a);
        return a;
    });
}

Json cmtToJson(const Cmt& t) {
    Json trans = Json::array();
    for (const auto& [k, v] : t.delta) {
        auto [q, mem, in] = k;
        trans.push_back(Json::array({q, mem < 0 ? Json(nullptr) : Json(mem), in, v.first, v.second}));
    }
    std::vector<int> cf(t.classFinal.begin(), t.classFinal.end()), gf(t.globalFinal.begin(), t.globalFinal.end());
    return Json{{"forward", t.forward},   {"states", t.numStates}, {"initial", t.initial},
                {"inputs", t.numIn},      {"outputs", t.numOut},   {"classFinal", cf},
                {"globalFinal", gf},      {"transitions", trans}};
}

Cmt cmtFromJson(const Json& j) {
    return guarded("cmt", [&] {
        Cmt t;
        t.forward = j.at("forward").get<bool>();
        t.numStates = j.at("states").get<int>();
        t.initial = j.at("initial").get<int>();
        t.numIn = j.at("inputs").get<int>();
        t.numOut = j.at("outputs").get<int>();
        for (int x : j.at("classFinal").get<std::vector<int>>()) t.classFinal.push_back(x != 0);
        for (int x : j.at("globalFinal").get<std::vector<int>>()) t.globalFinal.push_back(x != 0);
        if (static_cast<int>(t.classFinal.size()) != t.numStates || static_cast<int>(t.globalFinal.size()) != t.numStates)
            throw InputError("cmt: finality vectors must cover every state");
        if (t.initial < 0 || t.initial >= t.numStates) throw InputError("cmt: initial state out of range");
        for (const auto& tr : j.at("transitions")) {
            if (tr.size() != 5) throw InputError("cmt: transitions are [q, mem, in, q', out]");
            int q = tr[0].get<int>(), mem = tr[1].is_null() ? -1 : tr[1].get<int>(), in = tr[2].get<int>();
            int q2 = tr[3].get<int>(), out = tr[4].get<int>();
            if (q < 0 || q >= t.numStates || q2 < 0 || q2 >= t.numStates || mem >= t.numStates || in < 0 ||
                in >= t.numIn || out < 0 || out >= t.numOut)
                throw InputError("cmt: transition out of range");
            t.delta[{q, mem, in}] = {q2, out};
        }
        return t;
    });
}

Json cascadeToJson(const Cascade& c) {
    Json stages = Json::array();
    for (const auto& st : c.stages) {
        Json s{{"kind", name(st.kind)}, {"in", alphabetToJson(st.in)}, {"out", st.out}};
        if (st.kind == StageKind::Global || st.kind == StageKind::Class) s["transducer"] = transducerToJson(st.t);
        else s["cmt"] = cmtToJson(st.cmt);
        stages.push_back(s);
    }
    Json acc = nullptr;
    if (c.accepting) acc = std::vector<int>(c.accepting->begin(), c.accepting->end());
    return Json{{"letters", c.letters}, {"other", c.other}, {"accepting", acc}, {"stages", stages}};
}

Cascade cascadeFromJson(const Json& j) {
    return guarded("cascade", [&] {
        Cascade c;
        c.letters = j.at("letters").get<std::vector<std::string>>();
        c.other = j.at("other").get<bool>();
        if (j.contains("accepting") && !j.at("accepting").is_null()) {
            auto v = j.at("accepting").get<std::vector<int>>();
            c.accepting = std::set<int>(v.begin(), v.end());
        }
        for (const auto& s : j.at("stages")) {
            CascadeStage st;
            std::string k = s.at("kind").get<std::string>();
            bool found = false;
            for (StageKind sk : {StageKind::Global, StageKind::Class, StageKind::ForwardCmt, StageKind::BackwardCmt})
                if (k == name(sk)) {
                    st.kind = sk;
                    found = true;
                }
            if (!found) throw InputError("cascade: unknown stage kind '" + k + "'");
            st.in = alphabetFromJson(s.at("in"));
            st.out = s.at("out").get<std::vector<std::string>>();
            if (st.kind == StageKind::Global || st.kind == StageKind::Class) st.t = transducerFromJson(s.at("transducer"));
            else st.cmt = cmtFromJson(s.at("cmt"));
            c.stages.push_back(std::move(st));
        }
        validate(c);
        return c;
    });
}

}  // namespace mudw
