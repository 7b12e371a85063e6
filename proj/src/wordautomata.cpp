#include "mudw/wordautomata.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

namespace mudw {

int Nfa::addState(bool isFinal) {
    delta.emplace_back();
    final.push_back(isFinal ? 1 : 0);
    return size() - 1;
}

void Nfa::addTransition(int src, int sym, int dst) {
    if (src < 0 || src >= size() || dst < 0 || dst >= size()) throw InputError("transition references unknown state");
    if (sym < 0 || sym >= numSymbols) throw InputError("transition references unknown symbol");
    delta[src].emplace_back(sym, dst);
}

bool Nfa::accepts(const std::vector<int>& word) const {
    std::vector<char> cur(size(), 0);
    for (int q : initial) cur[q] = 1;
    for (int s : word) {
        std::vector<char> nxt(size(), 0);
        for (int q = 0; q < size(); ++q)
            if (cur[q])
                for (auto [a, d] : delta[q])
                    if (a == s) nxt[d] = 1;
        cur.swap(nxt);
    }
    for (int q = 0; q < size(); ++q)
        if (cur[q] && final[q]) return true;
    return false;
}

bool Nfa::isDeterministic() const {
    if (initial.size() > 1) return false;
    for (const auto& ts : delta) {
        std::set<int> seen;
        for (auto [a, d] : ts)
            if (!seen.insert(a).second) return false;
    }
    return true;
}

std::size_t Nfa::transitionCount() const {
    std::size_t c = 0;
    for (const auto& ts : delta) c += ts.size();
    return c;
}

namespace {

void sortDelta(Nfa& a) {
    for (auto& ts : a.delta) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    }
}

// Successors of q on symbol s in a sorted automaton.
template <class F>
void forSucc(const Nfa& a, int q, int s, F&& f) {
    const auto& ts = a.delta[q];
    auto it = std::lower_bound(ts.begin(), ts.end(), std::make_pair(s, -1));
    for (; it != ts.end() && it->first == s; ++it) f(it->second);
}

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = v.size();
        for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x);
        return h;
    }
};

}  // namespace

Nfa determinize(const Nfa& a) {
    Nfa d(a.numSymbols);
    std::unordered_map<std::vector<int>, int, VecHash> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        bool fin = false;
        for (int q : s)
            if (a.final[q]) fin = true;
        int id = d.addState(fin);
        ids.emplace(s, id);
        sets.push_back(std::move(s));
        return id;
    };
    d.initial = {intern(a.initial)};
    std::vector<std::vector<int>> bucket(a.numSymbols);
    std::vector<int> touched;
    for (std::size_t k = 0; k < sets.size(); ++k) {
        touched.clear();
        for (int q : sets[k])
            for (auto [s, t] : a.delta[q]) {
                if (bucket[s].empty()) touched.push_back(s);
                bucket[s].push_back(t);
            }
        std::sort(touched.begin(), touched.end());
        for (int s : touched) {
            int id = intern(std::move(bucket[s]));
            bucket[s].clear();
            d.delta[k].emplace_back(s, id);
        }
    }
    return d;
}

Nfa complete(const Nfa& a) {
    Nfa c = a;
    if (c.initial.empty()) c.initial = {c.addState(false)};
    int sink = -1;
    int n = c.size();
    for (int q = 0; q < n; ++q) {
        std::vector<char> has(c.numSymbols, 0);
        for (auto [s, t] : c.delta[q]) has[s] = 1;
        for (int s = 0; s < c.numSymbols; ++s)
            if (!has[s]) {
                if (sink < 0) {
                    sink = c.addState(false);
                    for (int x = 0; x < c.numSymbols; ++x) c.delta[sink].emplace_back(x, sink);
                }
                c.delta[q].emplace_back(s, sink);
            }
    }
    sortDelta(c);
    return c;
}

Nfa complement(const Nfa& a) {
    Nfa c = complete(determinize(a));
    for (auto& f : c.final) f = !f;
    return c;
}

Nfa trim(const Nfa& a) {
    int n = a.size();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::deque<int> work;
    for (int q : a.initial)
        if (!fwd[q]) {
            fwd[q] = 1;
            work.push_back(q);
        }
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (auto [s, t] : a.delta[q])
            if (!fwd[t]) {
                fwd[t] = 1;
                work.push_back(t);
            }
    }
    std::vector<std::vector<int>> rev(n);
    for (int q = 0; q < n; ++q)
        for (auto [s, t] : a.delta[q]) rev[t].push_back(q);
    for (int q = 0; q < n; ++q)
        if (a.final[q]) {
            bwd[q] = 1;
            work.push_back(q);
        }
    while (!work.empty()) {
        int q = work.front();
        work.pop_front();
        for (int p : rev[q])
            if (!bwd[p]) {
                bwd[p] = 1;
                work.push_back(p);
            }
    }
    Nfa r(a.numSymbols);
    std::vector<int> map(n, -1);
    for (int q = 0; q < n; ++q)
        if (fwd[q] && bwd[q]) map[q] = r.addState(a.final[q]);
    for (int q = 0; q < n; ++q) {
        if (map[q] < 0) continue;
        for (auto [s, t] : a.delta[q])
            if (map[t] >= 0) r.delta[map[q]].emplace_back(s, map[t]);
    }
    for (int q : a.initial)
        if (map[q] >= 0) r.initial.push_back(map[q]);
    std::sort(r.initial.begin(), r.initial.end());
    r.initial.erase(std::unique(r.initial.begin(), r.initial.end()), r.initial.end());
    sortDelta(r);
    return r;
}

Nfa minimize(const Nfa& in) {
    Nfa a = complete(in.isDeterministic() ? in : determinize(in));
    int n = a.size();
    // Dense transition table.
    std::vector<int> tab(static_cast<std::size_t>(n) * a.numSymbols, -1);
    for (int q = 0; q < n; ++q)
        for (auto [s, t] : a.delta[q]) tab[static_cast<std::size_t>(q) * a.numSymbols + s] = t;
    std::vector<int> cls(n);
    for (int q = 0; q < n; ++q) cls[q] = a.final[q] ? 1 : 0;
    int classes = 0;
    for (;;) {
        std::map<std::vector<int>, int> sig;
        std::vector<int> next(n);
        for (int q = 0; q < n; ++q) {
            std::vector<int> key;
            key.reserve(a.numSymbols + 1);
            key.push_back(cls[q]);
            for (int s = 0; s < a.numSymbols; ++s) key.push_back(cls[tab[static_cast<std::size_t>(q) * a.numSymbols + s]]);
            auto it = sig.emplace(std::move(key), static_cast<int>(sig.size())).first;
            next[q] = it->second;
        }
        int nc = static_cast<int>(sig.size());
        cls.swap(next);
        if (nc == classes) break;
        classes = nc;
    }
    Nfa m(a.numSymbols);
    for (int c = 0; c < classes; ++c) m.addState(false);
    std::vector<char> done(classes, 0);
    for (int q = 0; q < n; ++q) {
        int c = cls[q];
        if (a.final[q]) m.final[c] = 1;
        if (done[c]) continue;
        done[c] = 1;
        for (int s = 0; s < a.numSymbols; ++s) m.delta[c].emplace_back(s, cls[tab[static_cast<std::size_t>(q) * a.numSymbols + s]]);
    }
    m.initial = {cls[a.initial[0]]};
    return trim(m);
}

Nfa normalize(const Nfa& a) { return minimize(determinize(trim(a))); }

Nfa reverse(const Nfa& a) {
    Nfa r(a.numSymbols);
    for (int q = 0; q < a.size(); ++q) r.addState(false);
    for (int q : a.initial) r.final[q] = 1;
    for (int q = 0; q < a.size(); ++q) {
        if (a.final[q]) r.initial.push_back(q);
        for (auto [s, t] : a.delta[q]) r.delta[t].emplace_back(s, q);
    }
    sortDelta(r);
    return r;
}

Nfa combine(const Nfa& a0, const Nfa& b0, int newSymbols,
            const std::function<std::vector<std::pair<int, int>>(int)>& pairs) {
    Nfa a = a0, b = b0;
    sortDelta(a);
    sortDelta(b);
    std::vector<std::vector<std::pair<int, int>>> table(newSymbols);
    for (int t = 0; t < newSymbols; ++t) table[t] = pairs(t);
    Nfa r(newSymbols);
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> states;
    auto intern = [&](int p, int q) {
        auto [it, fresh] = ids.emplace(std::make_pair(p, q), r.size());
        if (fresh) {
            r.addState(a.final[p] && b.final[q]);
            states.emplace_back(p, q);
        }
        return it->second;
    };
    for (int p : a.initial)
        for (int q : b.initial) r.initial.push_back(intern(p, q));
    for (std::size_t k = 0; k < states.size(); ++k) {
        auto [p, q] = states[k];
        for (int t = 0; t < newSymbols; ++t)
            for (auto [sa, sb] : table[t])
                forSucc(a, p, sa, [&](int p2) {
                    forSucc(b, q, sb, [&](int q2) {
                        int id = intern(p2, q2);
                        r.delta[k].emplace_back(t, id);
                    });
                });
    }
    sortDelta(r);
    return r;
}

Nfa product(const Nfa& a, const Nfa& b) {
    if (a.numSymbols != b.numSymbols) throw InputError("product: alphabet mismatch");
    return combine(a, b, a.numSymbols, [](int t) { return std::vector<std::pair<int, int>>{{t, t}}; });
}

Nfa unionOf(const Nfa& a, const Nfa& b) {
    if (a.numSymbols != b.numSymbols) throw InputError("union: alphabet mismatch");
    Nfa r = a;
    int off = r.size();
    for (int q = 0; q < b.size(); ++q) r.addState(b.final[q]);
    for (int q = 0; q < b.size(); ++q)
        for (auto [s, t] : b.delta[q]) r.delta[off + q].emplace_back(s, off + t);
    for (int q : b.initial) r.initial.push_back(off + q);
    return r;
}

Nfa project(const Nfa& a, int newSymbols, const std::function<int(int)>& map) {
    Nfa r(newSymbols);
    r.delta.resize(a.size());
    r.final = a.final;
    r.initial = a.initial;
    for (int q = 0; q < a.size(); ++q)
        for (auto [s, t] : a.delta[q]) r.delta[q].emplace_back(map(s), t);
    sortDelta(r);
    return r;
}

Nfa relabel(const Nfa& a0, int newSymbols, const std::function<std::vector<int>(int)>& pre) {
    Nfa a = a0;
    sortDelta(a);
    Nfa r(newSymbols);
    r.delta.resize(a.size());
    r.final = a.final;
    r.initial = a.initial;
    std::vector<std::vector<int>> table(newSymbols);
    for (int t = 0; t < newSymbols; ++t) table[t] = pre(t);
    for (int q = 0; q < a.size(); ++q)
        for (int t = 0; t < newSymbols; ++t)
            for (int s : table[t]) forSucc(a, q, s, [&](int d) { r.delta[q].emplace_back(t, d); });
    sortDelta(r);
    return r;
}

bool isEmpty(const Nfa& a) { return trim(a).initial.empty(); }

bool equivalent(const Nfa& a, const Nfa& b) {
    return isEmpty(product(a, complement(b))) && isEmpty(product(b, complement(a)));
}

// ---------------------------------------------------------------- transducers

std::vector<std::vector<int>> outputs(const Transducer& t, const std::vector<int>& input, std::size_t limit) {
    std::set<std::vector<int>> found;
    std::vector<int> out;
    std::function<void(int, std::size_t)> dfs = [&](int q, std::size_t i) {
        if (found.size() >= limit) return;
        if (i == input.size()) {
            if (t.nfa.final[q]) found.insert(out);
            return;
        }
        for (auto [s, d] : t.nfa.delta[q]) {
            if (s / t.numOut != input[i]) continue;
            out.push_back(s % t.numOut);
            dfs(d, i + 1);
            out.pop_back();
        }
    };
    for (int q : t.nfa.initial) dfs(q, 0);
    return {found.begin(), found.end()};
}

std::optional<std::vector<int>> runFunctional(const Transducer& t, const std::vector<int>& input) {
    const Nfa& a = t.nfa;
    std::size_t n = input.size();
    int m = a.size();
    // back[i][q]: suffix from position i accepted from q.
    std::vector<std::vector<char>> back(n + 1, std::vector<char>(m, 0));
    for (int q = 0; q < m; ++q) back[n][q] = a.final[q];
    for (std::size_t i = n; i-- > 0;)
        for (int q = 0; q < m; ++q)
            for (auto [s, d] : a.delta[q])
                if (s / t.numOut == input[i] && back[i + 1][d]) back[i][q] = 1;
    std::vector<char> cur(m, 0);
    bool any = false;
    for (int q : a.initial)
        if (back[0][q]) cur[q] = 1, any = true;
    if (!any) return std::nullopt;
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        int best = -1;
        for (int q = 0; q < m && best < 0; ++q)
            if (cur[q])
                for (auto [s, d] : a.delta[q])
                    if (s / t.numOut == input[i] && back[i + 1][d]) {
                        best = s % t.numOut;
                        break;
                    }
        out[i] = best;
        std::vector<char> nxt(m, 0);
        for (int q = 0; q < m; ++q)
            if (cur[q])
                for (auto [s, d] : a.delta[q])
                    if (s == t.sym(input[i], best) && back[i + 1][d]) nxt[d] = 1;
        cur.swap(nxt);
    }
    return out;
}

bool isFunctional(const Transducer& t) {
    const Nfa& a = t.nfa;
    // States (p, q, differed); reachable and co-reachable with differed = 1 is a witness.
    std::map<std::tuple<int, int, int>, int> ids;
    std::vector<std::tuple<int, int, int>> st;
    std::vector<std::vector<int>> succ;
    auto intern = [&](int p, int q, int f) {
        auto [it, fresh] = ids.emplace(std::make_tuple(p, q, f), static_cast<int>(st.size()));
        if (fresh) {
            st.emplace_back(p, q, f);
            succ.emplace_back();
        }
        return it->second;
    };
    for (int p : a.initial)
        for (int q : a.initial) intern(p, q, 0);
    for (std::size_t k = 0; k < st.size(); ++k) {
        auto [p, q, f] = st[k];
        for (auto [s1, d1] : a.delta[p])
            for (auto [s2, d2] : a.delta[q])
                if (s1 / t.numOut == s2 / t.numOut) {
                    int id = intern(d1, d2, f | (s1 != s2 ? 1 : 0));
                    succ[k].push_back(id);
                }
    }
    for (std::size_t k = 0; k < st.size(); ++k) {
        auto [p, q, f] = st[k];
        if (f && a.final[p] && a.final[q]) return false;
    }
    return true;
}

bool isInputDeterministic(const Transducer& t) {
    if (t.nfa.initial.size() > 1) return false;
    for (const auto& ts : t.nfa.delta) {
        std::set<int> ins;
        for (auto [s, d] : ts)
            if (!ins.insert(s / t.numOut).second) return false;
    }
    return true;
}

Transducer identityTransducer(const std::vector<std::string>& names) {
    Transducer t;
    t.numIn = t.numOut = static_cast<int>(names.size());
    t.inNames = t.outNames = names;
    t.nfa = Nfa(t.numIn * t.numOut);
    int q = t.nfa.addState(true);
    t.nfa.initial = {q};
    for (int i = 0; i < t.numIn; ++i) t.nfa.addTransition(q, t.sym(i, i), q);
    return t;
}

// ---------------------------------------------------------------- word alphabets

int WordAlphabet::size() const {
    return letterCount() * (marked ? 4 : 1) * (1 << features.size());
}

int WordAlphabet::encode(int letter, bool p, bool s, std::uint32_t feats) const {
    int mark = marked ? (p ? 2 : 0) + (s ? 1 : 0) : 0;
    return ((letter * (marked ? 4 : 1) + mark) << features.size()) | static_cast<int>(feats);
}

int WordAlphabet::letterOf(int b) const { return (b >> features.size()) / (marked ? 4 : 1); }
bool WordAlphabet::pOf(int b) const { return marked && (((b >> features.size()) & 3) >> 1); }
bool WordAlphabet::sOf(int b) const { return marked && ((b >> features.size()) & 1); }
std::uint32_t WordAlphabet::featsOf(int b) const {
    return static_cast<std::uint32_t>(b) & ((1u << features.size()) - 1);
}

std::string WordAlphabet::symbolName(int b) const {
    int l = letterOf(b);
    std::string s = l < static_cast<int>(letters.size()) ? letters[l] : "_";
    if (marked) s += std::string(pOf(b) ? "/P" : "/nP") + (sOf(b) ? ",S" : ",nS");
    if (!features.empty()) {
        s += "/";
        for (std::size_t i = 0; i < features.size(); ++i) s += (featsOf(b) >> i & 1) ? '1' : '0';
    }
    return s;
}

int WordAlphabet::letterIndex(const std::string& l) const {
    for (std::size_t i = 0; i < letters.size(); ++i)
        if (letters[i] == l) return static_cast<int>(i);
    return other ? static_cast<int>(letters.size()) : -1;
}

// ---------------------------------------------------------------- marking transducer

namespace {

struct Words {
    Mod next, prev;
    Zero first, last;
};

Words wordsOf(WordKind k) {
    if (k == WordKind::Global) return {Mod::Xg, Mod::Yg, Zero::FirstG, Zero::LastG};
    return {Mod::Xc, Mod::Yc, Zero::FirstC, Zero::LastC};
}

// Automata over base x 2^V x {out}; symbol = ((b << V) | v) * 2 + out. Accepts iff the
// out track equals the truth set of the formula under the valuation on the v tracks.
class MarkingCompiler {
public:
    MarkingCompiler(WordKind kind, const WordAlphabet& al) : w_(wordsOf(kind)), al_(al), base_(al.size()) {}

    Nfa compile(const Formula& f) {
        std::size_t v = scope_.size();
        int syms = base_ * (1 << v) * 2;
        auto dec = [v](int s) {
            int o = s & 1, rest = s >> 1;
            return std::array<int, 3>{rest >> static_cast<int>(v), rest & ((1 << v) - 1), o};
        };
        auto enc = [v](int b, int vb, int o) { return ((b << static_cast<int>(v)) | vb) * 2 + o; };
        switch (f->kind) {
            case Kind::True: return local(syms, [&](int s) { return (s & 1) == 1; });
            case Kind::False: return local(syms, [&](int s) { return (s & 1) == 0; });
            case Kind::Prop:
            case Kind::NProp: {
                int idx = -1;
                for (std::size_t i = 0; i < al_.letters.size(); ++i)
                    if (al_.letters[i] == f->name) idx = static_cast<int>(i);
                bool pos = f->kind == Kind::Prop;
                return local(syms, [&](int s) {
                    auto d = dec(s);
                    bool holds = al_.letterOf(d[0]) == idx;
                    return d[2] == ((holds == pos) ? 1 : 0);
                });
            }
            case Kind::Zero:
            case Kind::NZero: {
                bool neg = f->kind == Kind::NZero;
                if (f->zero == Zero::S || f->zero == Zero::P) {
                    if (!al_.marked) throw InputError("marking atoms need a marked alphabet");
                    bool isP = f->zero == Zero::P;
                    return local(syms, [&](int s) {
                        auto d = dec(s);
                        bool holds = isP ? al_.pOf(d[0]) : al_.sOf(d[0]);
                        return d[2] == ((holds != neg) ? 1 : 0);
                    });
                }
                if (f->zero == w_.first) return boundary(syms, true, neg);
                if (f->zero == w_.last) return boundary(syms, false, neg);
                throw InputError(std::string("zeroary atom ") + zeroName(f->zero) + " is not observable in this layer");
            }
            case Kind::Var: {
                for (std::size_t k = 0; k < scope_.size(); ++k)
                    if (scope_[k] == f->name)
                        return local(syms, [&](int s) {
                            auto d = dec(s);
                            return d[2] == ((d[1] >> k) & 1);
                        });
                for (std::size_t k = 0; k < al_.features.size(); ++k)
                    if (al_.features[k].name == f->name)
                        return local(syms, [&](int s) {
                            auto d = dec(s);
                            return d[2] == static_cast<int>((al_.featsOf(d[0]) >> k) & 1);
                        });
                throw InputError("free variable '" + f->name + "' is neither bound nor a feature");
            }
            case Kind::And:
            case Kind::Or: {
                bool isAnd = f->kind == Kind::And;
                Nfa a = compile(f->kids[0]), b = compile(f->kids[1]);
                return normalize(combine(a, b, syms, [&](int s) {
                    auto d = dec(s);
                    std::vector<std::pair<int, int>> out;
                    for (int o1 = 0; o1 < 2; ++o1)
                        for (int o2 = 0; o2 < 2; ++o2)
                            if ((isAnd ? (o1 & o2) : (o1 | o2)) == d[2])
                                out.emplace_back(enc(d[0], d[1], o1), enc(d[0], d[1], o2));
                    return out;
                }));
            }
            case Kind::Mod: {
                bool next;
                if (f->mod == w_.next) next = true;
                else if (f->mod == w_.prev) next = false;
                else throw InputError(std::string("modality ") + modName(f->mod) + " does not belong to this layer");
                Nfa a = compile(f->kids[0]);
                Nfa c = next ? nextChecker() : prevChecker();
                return normalize(combine(a, c, syms, [&](int s) {
                    auto d = dec(s);
                    std::vector<std::pair<int, int>> out;
                    for (int o1 = 0; o1 < 2; ++o1) out.emplace_back(enc(d[0], d[1], o1), o1 * 2 + d[2]);
                    return out;
                }));
            }
            case Kind::Mu:
            case Kind::Nu: return fixpoint(f, syms);
            default: throw InputError("markingTransducer: unexpected node");
        }
    }

private:
    Nfa local(int syms, const std::function<bool(int)>& ok) {
        Nfa a(syms);
        int q = a.addState(true);
        a.initial = {q};
        for (int s = 0; s < syms; ++s)
            if (ok(s)) a.delta[q].emplace_back(s, q);
        return a;
    }

    // out = 1 exactly at the first (or last) position, complemented when neg.
    Nfa boundary(int syms, bool first, bool neg) {
        Nfa a(syms);
        int i0 = a.addState(true), mid = a.addState(false), done = a.addState(true);
        a.initial = {i0};
        for (int s = 0; s < syms; ++s) {
            int o = (s & 1) ^ (neg ? 1 : 0);
            if (first) {
                if (o == 1) a.delta[i0].emplace_back(s, done);
                else a.delta[done].emplace_back(s, done);
            } else {
                if (o == 0) {
                    a.delta[i0].emplace_back(s, mid);
                    a.delta[mid].emplace_back(s, mid);
                } else {
                    a.delta[i0].emplace_back(s, done);
                    a.delta[mid].emplace_back(s, done);
                }
            }
        }
        return trim(a);
    }

    // Symbols o1 * 2 + o: out(i) = o1(i+1), out(n) = 0.
    static Nfa nextChecker() {
        Nfa c(4);
        int any = c.addState(true), e0 = c.addState(true), e1 = c.addState(false);
        c.initial = {any};
        int es[2] = {e0, e1};
        for (int s = 0; s < 4; ++s) {
            int o1 = s >> 1, o = s & 1;
            c.delta[any].emplace_back(s, es[o]);
            c.delta[es[o1]].emplace_back(s, es[o]);
        }
        return c;
    }

    // out(i) = o1(i-1), out(1) = 0.
    static Nfa prevChecker() {
        Nfa c(4);
        int p0 = c.addState(true), p1 = c.addState(true);
        c.initial = {p0};
        int ps[2] = {p0, p1};
        for (int s = 0; s < 4; ++s) {
            int o1 = s >> 1, o = s & 1;
            c.delta[ps[o]].emplace_back(s, ps[o1]);
        }
        return c;
    }

    Nfa fixpoint(const Formula& f, int syms) {
        bool isMu = f->kind == Kind::Mu;
        int v = static_cast<int>(scope_.size());
        scope_.push_back(f->name);
        Nfa body = compile(f->kids[0]);
        scope_.pop_back();
        // Symbols here read the last bit as the candidate set x.
        auto split = [v](int s) {
            int x = s & 1, rest = s >> 1;
            return std::array<int, 3>{rest >> v, rest & ((1 << v) - 1), x};
        };
        auto bodySym = [v](int b, int vb, int x, int o) { return ((b << (v + 1)) | vb | (x << v)) * 2 + o; };
        // Pre-fixpoints (mu) or post-fixpoints (nu) of the body.
        Nfa cand = normalize(relabel(body, syms, [&](int s) {
            auto d = split(s);
            std::vector<int> pre;
            for (int o = 0; o < 2; ++o) {
                bool ok = isMu ? (o <= d[2]) : (d[2] <= o);
                if (ok) pre.push_back(bodySym(d[0], d[1], d[2], o));
            }
            return pre;
        }));
        // Some candidate x with t not below x (mu) or x not below t (nu).
        Nfa wit(4);
        int w0 = wit.addState(false), w1 = wit.addState(true);
        wit.initial = {w0};
        for (int s = 0; s < 4; ++s) {
            int t = s >> 1, x = s & 1;
            wit.delta[w0].emplace_back(s, w0);
            wit.delta[w1].emplace_back(s, w1);
            if (isMu ? (t == 1 && x == 0) : (t == 0 && x == 1)) wit.delta[w0].emplace_back(s, w1);
        }
        Nfa beaten = combine(cand, wit, syms, [&](int s) {
            auto d = split(s);
            std::vector<std::pair<int, int>> out;
            for (int x = 0; x < 2; ++x) out.emplace_back(((d[0] << v | d[1]) * 2) + x, d[2] * 2 + x);
            return out;
        });
        Nfa extremal = complement(normalize(beaten));
        return normalize(product(cand, extremal));
    }

    Words w_;
    const WordAlphabet& al_;
    int base_;
    std::vector<std::string> scope_;
};

}  // namespace

Transducer markingTransducer(const Formula& f, WordKind kind, const WordAlphabet& alphabet) {
    if (alphabet.features.size() > 12) throw InputError("too many features");
    Formula core = desugar(f);
    MarkingCompiler mc(kind, alphabet);
    Transducer t;
    t.numIn = alphabet.size();
    t.numOut = 2;
    t.nfa = mc.compile(core);
    for (int b = 0; b < t.numIn; ++b) t.inNames.push_back(alphabet.symbolName(b));
    t.outNames = {"0", "1"};
    return t;
}

// ---------------------------------------------------------------- back to formulas

namespace {

Formula letterTest(const WordAlphabet& al, int b) {
    std::vector<Formula> parts;
    int l = al.letterOf(b);
    if (l < static_cast<int>(al.letters.size())) {
        parts.push_back(prop(al.letters[l]));
    } else {
        for (const auto& p : al.letters) parts.push_back(nprop(p));
    }
    if (al.marked) {
        parts.push_back(zero(Zero::P, !al.pOf(b)));
        parts.push_back(zero(Zero::S, !al.sOf(b)));
    }
    auto fb = al.featsOf(b);
    for (std::size_t k = 0; k < al.features.size(); ++k)
        parts.push_back((fb >> k & 1) ? al.features[k].pos : al.features[k].neg);
    return andAll(parts);
}

}  // namespace

std::vector<Formula> transducerToFormulas(const Transducer& t0, const WordAlphabet& al, WordKind kind) {
    if (t0.numIn != al.size()) throw InputError("transducerToFormulas: alphabet mismatch");
    std::vector<Formula> tests(t0.numIn);
    for (int b = 0; b < t0.numIn; ++b) tests[b] = letterTest(al, b);
    return transducerToFormulas(t0, tests, kind);
}

std::vector<Formula> transducerToFormulas(const Transducer& t0, const std::vector<Formula>& tests, WordKind kind) {
    if (static_cast<int>(tests.size()) != t0.numIn) throw InputError("transducerToFormulas: one test per input symbol");
    if (!isFunctional(t0)) throw InputError("transducerToFormulas: transducer is not functional");
    Transducer t = t0;
    t.nfa = trim(t.nfa);
    Words wk = wordsOf(kind);
    int n = t.nfa.size();
    std::set<std::string> used;
    for (const auto& f : tests) {
        auto a = allNames(f);
        used.insert(a.begin(), a.end());
    }
    std::vector<std::string> rv(n), cv(n);
    for (int q = 0; q < n; ++q) {
        rv[q] = freshName(used, "r" + std::to_string(q));
        used.insert(rv[q]);
        cv[q] = freshName(used, "c" + std::to_string(q));
        used.insert(cv[q]);
    }
    // Input-level edges, outputs forgotten.
    std::set<std::tuple<int, int, int>> edges;
    for (int p = 0; p < n; ++p)
        for (auto [s, q] : t.nfa.delta[p]) edges.emplace(p, s / t.numOut, q);

    VectorialFormula reach{Kind::Mu, rv, {}}, coreach{Kind::Mu, cv, {}};
    std::vector<std::vector<Formula>> into(n), out(n);
    for (auto [p, b, q] : edges) {
        into[q].push_back(andS(tests[b], var(rv[p])));
        out[p].push_back(andS(tests[b], var(cv[q])));
    }
    std::set<int> init(t.nfa.initial.begin(), t.nfa.initial.end());
    for (int q = 0; q < n; ++q) {
        Formula start = init.count(q) ? zero(wk.first) : mkFalse();
        reach.bodies.push_back(orS(start, into[q].empty() ? mkFalse() : mod(wk.prev, orAll(into[q]))));
        Formula stop = t.nfa.final[q] ? zero(wk.last) : mkFalse();
        coreach.bodies.push_back(orS(stop, out[q].empty() ? mkFalse() : mod(wk.next, orAll(out[q]))));
    }
    std::vector<Formula> reachF(n), coreachF(n);
    for (int q = 0; q < n; ++q) {
        reachF[q] = bekic(reach, rv[q]);
        coreachF[q] = bekic(coreach, cv[q]);
    }
    std::vector<Formula> result(t.numOut, mkFalse());
    std::map<std::tuple<int, int, int>, std::set<int>> byOut;  // (o, p, q) -> inputs
    for (int p = 0; p < n; ++p)
        for (auto [s, q] : t.nfa.delta[p]) byOut[{s % t.numOut, p, q}].insert(s / t.numOut);
    for (const auto& [k, ins] : byOut) {
        auto [o, p, q] = k;
        std::vector<Formula> ts;
        for (int b : ins) ts.push_back(tests[b]);
        result[o] = orS(result[o], andS(reachF[p], andS(orAll(ts), coreachF[q])));
    }
    return result;
}

// ---------------------------------------------------------------- bimachines

Bimachine sequentialize(const Transducer& t) {
    if (!isFunctional(t)) throw InputError("sequentialize: transducer is not functional");
    Bimachine bm;
    if (isInputDeterministic(t)) {
        bm.left = t;
        bm.right = identityTransducer(t.outNames);
        return bm;
    }
    const Nfa& a = t.nfa;
    // Left pass: subsets of states reachable on the prefix before each position.
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto [it, fresh] = ids.emplace(s, static_cast<int>(sets.size()));
        if (fresh) sets.push_back(s);
        return it->second;
    };
    intern(a.initial);
    std::vector<std::vector<int>> step;  // step[L][b] = next subset id or -1
    for (std::size_t k = 0; k < sets.size(); ++k) {
        std::vector<int> row(t.numIn, -1);
        for (int b = 0; b < t.numIn; ++b) {
            std::vector<int> nxt;
            for (int p : sets[k])
                for (auto [s, q] : a.delta[p])
                    if (s / t.numOut == b) nxt.push_back(q);
            if (!nxt.empty()) row[b] = intern(nxt);
        }
        step.push_back(row);
    }
    int numL = static_cast<int>(sets.size());
    int numMid = t.numIn * numL;
    auto midOf = [&](int b, int l) { return b * numL + l; };
    std::vector<std::string> midNames(numMid);
    for (int b = 0; b < t.numIn; ++b)
        for (int l = 0; l < numL; ++l)
            midNames[midOf(b, l)] = (b < static_cast<int>(t.inNames.size()) ? t.inNames[b] : std::to_string(b)) +
                                    "|L" + std::to_string(l);

    bm.left.numIn = t.numIn;
    bm.left.numOut = numMid;
    bm.left.inNames = t.inNames;
    bm.left.outNames = midNames;
    bm.left.nfa = Nfa(t.numIn * numMid);
    for (int l = 0; l < numL; ++l) bm.left.nfa.addState(true);
    bm.left.nfa.initial = {0};
    for (int l = 0; l < numL; ++l)
        for (int b = 0; b < t.numIn; ++b)
            if (step[l][b] >= 0) bm.left.nfa.addTransition(l, bm.left.sym(b, midOf(b, l)), step[l][b]);

    // Right pass, read right to left: subsets co-reachable from the suffix after each position.
    std::vector<int> fin;
    for (int q = 0; q < a.size(); ++q)
        if (a.final[q]) fin.push_back(q);
    std::map<std::vector<int>, int> rids;
    std::vector<std::vector<int>> rsets;
    auto rintern = [&](std::vector<int> s) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        auto [it, fresh] = rids.emplace(s, static_cast<int>(rsets.size()));
        if (fresh) rsets.push_back(s);
        return it->second;
    };
    rintern(fin);
    bm.right.numIn = numMid;
    bm.right.numOut = t.numOut;
    bm.right.inNames = midNames;
    bm.right.outNames = t.outNames;
    bm.right.nfa = Nfa(numMid * t.numOut);
    std::vector<std::tuple<int, int, int>> rtrans;  // (from R, symbol, to R)
    for (std::size_t k = 0; k < rsets.size(); ++k) {
        std::set<int> R(rsets[k].begin(), rsets[k].end());
        for (int b = 0; b < t.numIn; ++b) {
            std::vector<int> prev;
            for (int p = 0; p < a.size(); ++p)
                for (auto [s, q] : a.delta[p])
                    if (s / t.numOut == b && R.count(q)) prev.push_back(p);
            if (prev.empty()) continue;
            int to = rintern(prev);
            for (int l = 0; l < numL; ++l) {
                std::set<int> L(sets[l].begin(), sets[l].end());
                std::set<int> outs;
                for (int p : sets[l])
                    for (auto [s, q] : a.delta[p])
                        if (s / t.numOut == b && R.count(q)) outs.insert(s % t.numOut);
                if (outs.empty()) continue;
                if (outs.size() > 1) throw InputError("sequentialize: transducer is not functional");
                rtrans.emplace_back(static_cast<int>(k), bm.right.sym(midOf(b, l), *outs.begin()), to);
            }
        }
    }
    std::set<int> init(a.initial.begin(), a.initial.end());
    for (const auto& r : rsets) {
        bool ok = false;
        for (int q : r)
            if (init.count(q)) ok = true;
        bm.right.nfa.addState(ok);
    }
    bm.right.nfa.initial = {0};
    for (auto [f, s, to] : rtrans) bm.right.nfa.addTransition(f, s, to);
    return bm;
}

namespace {

// Deterministic run; reverse reads the input right to left.
std::optional<std::vector<int>> runDet(const Transducer& t, const std::vector<int>& input, bool reverse) {
    std::vector<int> out(input.size());
    if (t.nfa.initial.empty()) return std::nullopt;
    int q = t.nfa.initial[0];
    for (std::size_t k = 0; k < input.size(); ++k) {
        std::size_t i = reverse ? input.size() - 1 - k : k;
        int next = -1;
        for (auto [s, d] : t.nfa.delta[q])
            if (s / t.numOut == input[i]) {
                next = d;
                out[i] = s % t.numOut;
                break;
            }
        if (next < 0) return std::nullopt;
        q = next;
    }
    if (!t.nfa.final[q]) return std::nullopt;
    return out;
}

}  // namespace

std::optional<std::vector<int>> runBimachine(const Bimachine& b, const std::vector<int>& input) {
    auto mid = runDet(b.left, input, false);
    if (!mid) return std::nullopt;
    return runDet(b.right, *mid, true);
}

Transducer rightAsForward(const Bimachine& b) {
    Transducer t = b.right;
    t.nfa = reverse(b.right.nfa);
    return t;
}

}  // namespace mudw
