#include "mudw/data_automata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "mudw/fragments.hpp"

namespace mudw {

namespace {

Formula unfold(const Formula& f) { return substitute(f->kids[0], {{f->name, f}}); }

}  // namespace

int AtomTable::add(const Formula& f) {
    if (auto it = index_.find(f); it != index_.end()) return it->second;
    int id = static_cast<int>(basis_.size());
    index_.emplace(f, id);
    basis_.push_back(f);
    child_.push_back(-1);
    child2_.push_back(-1);
    switch (f->kind) {
        case Kind::And:
        case Kind::Or: {
            int a = add(f->kids[0]);
            int b = add(f->kids[1]);
            child_[id] = a;
            child2_[id] = b;
            break;
        }
        case Kind::Mod: {
            int a = add(f->kids[0]);
            child_[id] = a;
            modal_.push_back(id);
            break;
        }
        case Kind::Nu: {
            int a = add(unfold(f));
            child_[id] = a;
            break;
        }
        case Kind::NProp: child_[id] = add(prop(f->name)); break;
        case Kind::NZero: child_[id] = add(zero(f->zero)); break;
        case Kind::Var:
            if (std::find(features_.begin(), features_.end(), f->name) == features_.end())
                throw InputError("closure: unexpected variable '" + f->name + "'");
            break;
        case Kind::Mu: throw InputError("closure: least fixpoint in a nu-only formula");
        default: break;
    }
    return id;
}

const std::vector<Zero>& AtomTable::allZeros() {
    static const std::vector<Zero> z{Zero::S, Zero::P, Zero::FirstG, Zero::FirstC, Zero::LastG, Zero::LastC};
    return z;
}

AtomTable::AtomTable(const Formula& g, bool enumerate, const std::vector<Zero>& zeros) : root_(g), zeros_(zeros) {
    features_.assign(g->free.begin(), g->free.end());
    if (features_.size() > 16) throw InputError("closure: too many free variables");
    auto ps = propositions(g);
    letters_.assign(ps.begin(), ps.end());
    for (const auto& p : letters_) add(prop(p));
    zeroIdx_.assign(6, -1);
    for (Zero z : zeros_) zeroIdx_[static_cast<int>(z)] = add(zero(z));
    add(g);
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        auto k = basis_[i]->kind;
        if ((k == Kind::Zero || k == Kind::NZero) && zeroIdx_[static_cast<int>(basis_[i]->zero)] < 0)
            throw InputError(std::string("closure: untracked zeroary atom ") + zeroName(basis_[i]->zero));
    }
    if (!enumerate) return;
    std::size_t k = freeCount() + features_.size();
    if (k > 22) throw InputError("closure too large to enumerate atoms");
    for (int l = 0; l <= static_cast<int>(letters_.size()); ++l)
        for (std::uint32_t fs = 0; fs < (1u << features_.size()); ++fs)
            for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << freeCount()); ++bits) {
                std::vector<char> fb(freeCount());
                for (std::size_t i = 0; i < fb.size(); ++i) fb[i] = (bits >> i) & 1;
                if (auto a = complete(l, fs, fb)) atoms_.push_back(std::move(*a));
            }
}

std::optional<Atom> AtomTable::complete(int letter, std::uint32_t feats, const std::vector<char>& fb) const {
    std::size_t nz = zeros_.size();
    auto get = [&](Zero z) {
        for (std::size_t i = 0; i < nz; ++i)
            if (zeros_[i] == z) return fb[i] != 0;
        return false;
    };
    bool S = get(Zero::S), P = get(Zero::P), fg = get(Zero::FirstG), fc = get(Zero::FirstC),
         lg = get(Zero::LastG), lc = get(Zero::LastC);
    bool hasFc = zeroIdx_[static_cast<int>(Zero::FirstC)] >= 0, hasLc = zeroIdx_[static_cast<int>(Zero::LastC)] >= 0;
    // Markings and boundaries that no position can have.
    if (P && (fg || fc)) return std::nullopt;
    if (S && (lg || lc)) return std::nullopt;
    if (fg && hasFc && !fc) return std::nullopt;
    if (lg && hasLc && !lc) return std::nullopt;
    Atom a;
    a.letter = letter;
    a.feats = feats;
    a.in.assign(basis_.size(), 0);
    std::vector<char> state(basis_.size(), 0);  // 0 open, 1 done
    for (std::size_t i = 0; i < nz; ++i) {
        int idx = zeroIdx_[static_cast<int>(zeros_[i])];
        a.in[idx] = fb[i];
        state[idx] = 1;
    }
    for (std::size_t j = 0; j < modal_.size(); ++j) {
        int idx = modal_[j];
        bool v = fb[nz + j];
        Mod m = basis_[idx]->mod;
        if (v) {
            if ((m == Mod::Xg && lg) || (m == Mod::Xc && lc) || (m == Mod::Yg && fg) || (m == Mod::Yc && fc))
                return std::nullopt;
        }
        a.in[idx] = v;
        state[idx] = 1;
    }
    std::function<bool(int)> val = [&](int i) -> bool {
        if (state[i]) return a.in[i];
        const Formula& f = basis_[i];
        bool r = false;
        switch (f->kind) {
            case Kind::True: r = true; break;
            case Kind::False: r = false; break;
            case Kind::Prop: r = letter < static_cast<int>(letters_.size()) && letters_[letter] == f->name; break;
            case Kind::NProp:
            case Kind::NZero: r = !val(child_[i]); break;
            case Kind::And: r = val(child_[i]) && val(child2_[i]); break;
            case Kind::Or: r = val(child_[i]) || val(child2_[i]); break;
            case Kind::Nu: r = val(child_[i]); break;
            case Kind::Var: {
                auto it = std::find(features_.begin(), features_.end(), f->name);
                r = (feats >> (it - features_.begin())) & 1;
                break;
            }
            default: throw InputError("closure: unexpected member " + print(f));
        }
        a.in[i] = r;
        state[i] = 1;
        return r;
    };
    for (std::size_t i = 0; i < basis_.size(); ++i) val(static_cast<int>(i));
    return a;
}

int AtomTable::indexOf(const Formula& f) const {
    auto it = index_.find(f);
    return it == index_.end() ? -1 : it->second;
}

bool AtomTable::holds(const Atom& a, const Formula& f) const {
    int i = indexOf(f);
    if (i < 0) throw InputError("not in closure: " + print(f));
    return a.in[i];
}

std::string AtomTable::atomName(std::size_t i) const {
    const Atom& a = atoms_.at(i);
    std::string s = "{";
    bool firstItem = true;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
        auto kind = basis_[k]->kind;
        if (!a.in[k] || kind == Kind::NProp || kind == Kind::NZero || kind == Kind::True) continue;
        if (!firstItem) s += ", ";
        s += print(basis_[k]);
        firstItem = false;
    }
    return s + "}";
}

void validate(const DataAutomaton& a) {
    if (a.b.numIn != a.input.size()) throw InputError("data automaton: transducer input alphabet mismatch");
    if (a.b.nfa.numSymbols != a.b.numIn * a.b.numOut) throw InputError("data automaton: transducer symbol count");
    if (a.c.numSymbols != a.b.numOut) throw InputError("data automaton: class automaton alphabet mismatch");
    if (!a.input.features.empty() || !a.input.marked) throw InputError("data automaton: input must be marked letters");
}

std::vector<int> mspSymbols(const WordAlphabet& al, const DataWord& w) {
    std::vector<int> out;
    out.reserve(w.size());
    for (std::size_t i = 1; i <= w.size(); ++i) {
        int l = al.letterIndex(w.letter(i));
        if (l < 0) throw InputError("letter '" + w.letter(i) + "' outside the automaton alphabet");
        auto t = oneType(w, i);
        out.push_back(al.encode(l, t.pred, t.succ, 0));
    }
    return out;
}

MembershipResult membership(const DataAutomaton& a, const DataWord& w) {
    validate(a);
    MembershipResult res;
    auto in = mspSymbols(a.input, w);
    WordStructure st(w);
    std::size_t n = w.size();
    const Nfa& bn = a.b.nfa;
    const Nfa& cn = a.c;
    // Per class, the set of class-automaton states after the positions read so far.
    std::vector<std::vector<int>> cls(st.numClasses);
    std::vector<int> out(n);
    std::set<std::vector<int>> failed;
    std::function<bool(std::size_t, int)> dfs = [&](std::size_t i, int q) -> bool {
        if (i == n) {
            if (!bn.final[q]) return false;
            for (const auto& s : cls) {
                bool ok = std::any_of(s.begin(), s.end(), [&](int c) { return cn.final[c] != 0; });
                if (!ok) return false;
            }
            return true;
        }
        std::vector<int> key{static_cast<int>(i), q};
        for (const auto& s : cls) {
            key.push_back(-1);
            key.insert(key.end(), s.begin(), s.end());
        }
        if (failed.count(key)) return false;
        int c = st.classId[i];
        bool firstInClass = st.cpred[i] < 0;
        for (auto [sym, dst] : bn.delta[q]) {
            if (sym / a.b.numOut != in[i]) continue;
            int o = sym % a.b.numOut;
            std::vector<int> prev = firstInClass ? cn.initial : cls[c];
            std::vector<int> next;
            for (int p : prev)
                for (auto [s2, d2] : cn.delta[p])
                    if (s2 == o) next.push_back(d2);
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            if (next.empty()) continue;
            auto saved = cls[c];
            cls[c] = next;
            out[i] = o;
            if (dfs(i + 1, dst)) return true;
            cls[c] = saved;
        }
        failed.insert(key);
        return false;
    };
    for (int q0 : bn.initial) {
        for (auto& s : cls) s.clear();
        if (dfs(0, q0)) {
            res.accepted = true;
            res.run = out;
            return res;
        }
    }
    return res;
}

DataAutomaton universalAutomaton(const std::vector<std::string>& letters) {
    DataAutomaton d;
    d.input = WordAlphabet{letters, true, true, {}};
    int k = d.input.size();
    std::vector<std::string> names;
    for (int b = 0; b < k; ++b) names.push_back(d.input.symbolName(b));
    d.b = identityTransducer(names);
    d.c = Nfa(k);
    int q = d.c.addState(true);
    d.c.initial = {q};
    for (int s = 0; s < k; ++s) d.c.addTransition(q, s, q);
    return d;
}

namespace {

// Packs the neighbour-relevant part of an atom: bits of modal members of modality `next`,
// bits of the children of modal members of modality `prev`, and the boundary flag.
struct Interface {
    std::vector<int> nextMods, prevMods;
    int boundaryIdx;
};

std::vector<char> exitKey(const AtomTable& t, const Atom& a, const Interface& in) {
    std::vector<char> k;
    for (int m : in.nextMods) k.push_back(a.in[m]);
    for (int m : in.prevMods) k.push_back(a.in[t.childOf(m)]);
    k.push_back(a.in[in.boundaryIdx]);
    return k;
}

// What an atom must match given the previous exit key: children of next-modal members,
// prev-modal members themselves.
std::vector<char> entryKey(const AtomTable& t, const Atom& a, const Interface& in) {
    std::vector<char> k;
    for (int m : in.nextMods) k.push_back(a.in[t.childOf(m)]);
    for (int m : in.prevMods) k.push_back(a.in[m]);
    return k;
}

// Builds a deterministic checker over atom indices. The first atom must satisfy `start`
// and have the first flag; later ones must match the predecessor's exit key.
Nfa chainAutomaton(const AtomTable& t, const std::vector<int>& atomIdx, Mod next, Mod prev, Zero firstZ,
                   Zero lastZ, int numOut, const std::function<int(int)>& outOf,
                   const std::function<bool(const Atom&)>& start) {
    Interface in;
    for (int m : t.modal()) {
        if (t.basis()[m]->mod == next) in.nextMods.push_back(m);
        if (t.basis()[m]->mod == prev) in.prevMods.push_back(m);
    }
    int fIdx = t.zeroIndex(firstZ);
    in.boundaryIdx = t.zeroIndex(lastZ);
    const auto& atoms = t.atoms();
    std::map<std::vector<char>, std::vector<int>> byEntry;
    for (int ai : atomIdx) {
        const Atom& a = atoms[ai];
        if (a.in[fIdx]) continue;
        byEntry[entryKey(t, a, in)].push_back(ai);
    }
    Nfa r(numOut);
    std::map<std::vector<char>, int> ids;
    std::vector<std::vector<char>> keys;
    int init = r.addState(false);
    r.initial = {init};
    keys.emplace_back();
    auto intern = [&](const std::vector<char>& k) {
        auto [it, fresh] = ids.emplace(k, r.size());
        if (fresh) {
            r.addState(k.back() != 0);
            keys.push_back(k);
        }
        return it->second;
    };
    for (int ai : atomIdx) {
        const Atom& a = atoms[ai];
        if (!a.in[fIdx] || !start(a)) continue;
        int d = intern(exitKey(t, a, in));
        r.delta[init].emplace_back(outOf(ai), d);
    }
    for (std::size_t s = 1; s < keys.size(); ++s) {
        const auto& k = keys[s];
        if (k.back()) continue;  // boundary reached, no continuation
        std::vector<char> need;
        for (std::size_t i = 0; i < in.nextMods.size() + in.prevMods.size(); ++i) need.push_back(k[i]);
        auto it = byEntry.find(need);
        if (it == byEntry.end()) continue;
        for (int ai : it->second) {
            int d = intern(exitKey(t, atoms[ai], in));
            r.delta[s].emplace_back(outOf(ai), d);
        }
    }
    return r;
}

}  // namespace

DataAutomaton fromNuFormula(const Formula& f) {
    if (!f->free.empty()) throw InputError("fromNuFormula: formula must be a sentence");
    if (!isNuOnly(f)) throw InputError("fromNuFormula: least fixpoint present");
    Formula g = toGuarded(f);
    if (!isNuOnly(g)) throw InputError("fromNuFormula: guarded form is not nu-only");
    AtomTable t(g);
    DataAutomaton d;
    d.input = WordAlphabet{t.letters(), true, true, {}};
    int numAtoms = static_cast<int>(t.atoms().size());
    std::vector<int> all(numAtoms);
    for (int i = 0; i < numAtoms; ++i) all[i] = i;
    int rootIdx = t.indexOf(g);
    int sIdx = t.zeroIndex(Zero::S), pIdx = t.zeroIndex(Zero::P);
    d.b.numIn = d.input.size();
    d.b.numOut = numAtoms;
    d.b.inNames.clear();
    for (int b = 0; b < d.b.numIn; ++b) d.b.inNames.push_back(d.input.symbolName(b));
    for (int i = 0; i < numAtoms; ++i) d.b.outNames.push_back(t.atomName(i));
    auto symOf = [&](int ai) {
        const Atom& a = t.atoms()[ai];
        int in = d.input.encode(a.letter, a.in[pIdx], a.in[sIdx], 0);
        return in * numAtoms + ai;
    };
    d.b.nfa = chainAutomaton(t, all, Mod::Xg, Mod::Yg, Zero::FirstG, Zero::LastG, d.b.numIn * numAtoms, symOf,
                             [&](const Atom& a) { return a.in[rootIdx] != 0; });
    d.c = chainAutomaton(t, all, Mod::Xc, Mod::Yc, Zero::FirstC, Zero::LastC, numAtoms,
                         [](int ai) { return ai; }, [](const Atom&) { return true; });
    return d;
}

std::optional<DataWord> boundedEmptiness(const DataAutomaton& a, const std::vector<std::string>& letters,
                                         std::size_t maxLen) {
    std::optional<DataWord> found;
    forEachWordUpTo(letters, maxLen, [&](const DataWord& w) {
        if (membership(a, w).accepted) {
            found = w;
            return false;
        }
        return true;
    });
    return found;
}

}  // namespace mudw
