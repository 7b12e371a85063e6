#include "mudw/formula.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace mudw {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Formula make(Node n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u;
    h = mix(h, std::hash<std::string>{}(n.name));
    h = mix(h, static_cast<std::size_t>(n.mod) + 8 * static_cast<std::size_t>(n.zero) +
                   64 * static_cast<std::size_t>(n.sugar) + 512 * static_cast<std::size_t>(n.until));
    n.size = 1;
    std::vector<std::string> fv;
    for (const auto& k : n.kids) {
        h = mix(h, k->hash);
        n.size += k->size;
        fv.insert(fv.end(), k->free.begin(), k->free.end());
    }
    if (n.kind == Kind::Var) fv.push_back(n.name);
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    if (n.kind == Kind::Mu || n.kind == Kind::Nu)
        fv.erase(std::remove(fv.begin(), fv.end(), n.name), fv.end());
    n.free = std::move(fv);
    n.hash = h;
    return std::make_shared<const Node>(std::move(n));
}

Node leaf(Kind k, std::string name = {}) {
    Node n;
    n.kind = k;
    n.name = std::move(name);
    return n;
}

}  // namespace

Formula mkTrue() {
    static const Formula t = make(leaf(Kind::True));
    return t;
}
Formula mkFalse() {
    static const Formula f = make(leaf(Kind::False));
    return f;
}
Formula prop(const std::string& p) { return make(leaf(Kind::Prop, p)); }
Formula nprop(const std::string& p) { return make(leaf(Kind::NProp, p)); }
Formula zero(Zero z, bool negated) {
    Node n = leaf(negated ? Kind::NZero : Kind::Zero);
    n.zero = z;
    return make(std::move(n));
}
Formula var(const std::string& x) { return make(leaf(Kind::Var, x)); }

Formula conj(Formula a, Formula b) {
    Node n = leaf(Kind::And);
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}
Formula disj(Formula a, Formula b) {
    Node n = leaf(Kind::Or);
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}
Formula andS(Formula a, Formula b) {
    if (a->kind == Kind::False || b->kind == Kind::False) return mkFalse();
    if (a->kind == Kind::True) return b;
    if (b->kind == Kind::True) return a;
    return conj(std::move(a), std::move(b));
}
Formula orS(Formula a, Formula b) {
    if (a->kind == Kind::True || b->kind == Kind::True) return mkTrue();
    if (a->kind == Kind::False) return b;
    if (b->kind == Kind::False) return a;
    return disj(std::move(a), std::move(b));
}
Formula andAll(const std::vector<Formula>& fs) {
    Formula r = mkTrue();
    for (const auto& f : fs) r = andS(r, f);
    return r;
}
Formula orAll(const std::vector<Formula>& fs) {
    Formula r = mkFalse();
    for (const auto& f : fs) r = orS(r, f);
    return r;
}
Formula mod(Mod m, Formula f) {
    Node n = leaf(Kind::Mod);
    n.mod = m;
    n.kids = {std::move(f)};
    return make(std::move(n));
}
Formula tilde(Mod m, Formula f) {
    Node n = leaf(Kind::Tilde);
    n.mod = m;
    n.kids = {std::move(f)};
    return make(std::move(n));
}
Formula binder(Kind k, const std::string& x, Formula body) {
    Node n = leaf(k, x);
    n.kids = {std::move(body)};
    return make(std::move(n));
}
Formula mu(const std::string& x, Formula body) { return binder(Kind::Mu, x, std::move(body)); }
Formula nu(const std::string& x, Formula body) { return binder(Kind::Nu, x, std::move(body)); }
Formula sugar(Sugar s, Formula f) {
    Node n = leaf(Kind::Unary);
    n.sugar = s;
    n.kids = {std::move(f)};
    return make(std::move(n));
}
Formula until(Until u, Formula a, Formula b) {
    Node n = leaf(Kind::Binary);
    n.until = u;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

bool isGlobal(Mod m) { return m == Mod::Xg || m == Mod::Yg; }
bool isFuture(Mod m) { return m == Mod::Xg || m == Mod::Xc; }
Mod mirror(Mod m) {
    switch (m) {
        case Mod::Xg: return Mod::Yg;
        case Mod::Yg: return Mod::Xg;
        case Mod::Xc: return Mod::Yc;
        case Mod::Yc: return Mod::Xc;
    }
    return m;
}
Zero mirror(Zero z) {
    switch (z) {
        case Zero::S: return Zero::P;
        case Zero::P: return Zero::S;
        case Zero::FirstG: return Zero::LastG;
        case Zero::LastG: return Zero::FirstG;
        case Zero::FirstC: return Zero::LastC;
        case Zero::LastC: return Zero::FirstC;
    }
    return z;
}
const char* modName(Mod m) {
    switch (m) {
        case Mod::Xg: return "Xg";
        case Mod::Xc: return "Xc";
        case Mod::Yg: return "Yg";
        case Mod::Yc: return "Yc";
    }
    return "?";
}
const char* zeroName(Zero z) {
    switch (z) {
        case Zero::S: return "S";
        case Zero::P: return "P";
        case Zero::FirstG: return "firstg";
        case Zero::FirstC: return "firstc";
        case Zero::LastG: return "lastg";
        case Zero::LastC: return "lastc";
    }
    return "?";
}

const std::vector<std::string>& freeVars(const Formula& f) { return f->free; }
bool isSentence(const Formula& f) { return f->free.empty(); }

bool isCore(const Formula& f) {
    if (f->kind == Kind::Tilde || f->kind == Kind::Unary || f->kind == Kind::Binary) return false;
    for (const auto& k : f->kids)
        if (!isCore(k)) return false;
    return true;
}

static bool hasSugarRec(const Formula& f, std::unordered_set<const Node*>& seen) {
    if (f->kind == Kind::Unary || f->kind == Kind::Binary) return true;
    if (!seen.insert(f.get()).second) return false;
    for (const auto& k : f->kids)
        if (hasSugarRec(k, seen)) return true;
    return false;
}

bool hasSugar(const Formula& f) {
    std::unordered_set<const Node*> seen;
    return hasSugarRec(f, seen);
}

static void namesRec(const Formula& f, std::set<std::string>& out, int which,
                     std::unordered_set<const Node*>& seen) {
    // which: 0 all, 1 props, 2 bound
    if (!seen.insert(f.get()).second) return;
    switch (f->kind) {
        case Kind::Prop:
        case Kind::NProp:
            if (which != 2) out.insert(f->name);
            break;
        case Kind::Var:
            if (which == 0) out.insert(f->name);
            break;
        case Kind::Mu:
        case Kind::Nu:
            if (which != 1) out.insert(f->name);
            break;
        default:
            break;
    }
    for (const auto& k : f->kids) namesRec(k, out, which, seen);
}

std::set<std::string> allNames(const Formula& f) {
    std::set<std::string> s;
    std::unordered_set<const Node*> seen;
    namesRec(f, s, 0, seen);
    return s;
}
std::set<std::string> propositions(const Formula& f) {
    std::set<std::string> s;
    std::unordered_set<const Node*> seen;
    namesRec(f, s, 1, seen);
    return s;
}
std::set<std::string> boundVars(const Formula& f) {
    std::set<std::string> s;
    std::unordered_set<const Node*> seen;
    namesRec(f, s, 2, seen);
    return s;
}

std::string freshName(const std::set<std::string>& used, const std::string& base) {
    if (!used.count(base)) return base;
    for (std::size_t i = 1;; ++i) {
        std::string c = base + "_" + std::to_string(i);
        if (!used.count(c)) return c;
    }
}

bool structurallyEqual(const Formula& a, const Formula& b) {
    if (a == b) return true;
    if (a->hash != b->hash || a->kind != b->kind || a->name != b->name || a->kids.size() != b->kids.size())
        return false;
    if (a->mod != b->mod || a->zero != b->zero || a->sugar != b->sugar || a->until != b->until) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!structurallyEqual(a->kids[i], b->kids[i])) return false;
    return true;
}

static bool alphaRec(const Formula& a, const Formula& b, std::vector<std::pair<std::string, std::string>>& env) {
    if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
    switch (a->kind) {
        case Kind::Var: {
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                bool l = it->first == a->name, r = it->second == b->name;
                if (l || r) return l && r;
            }
            return a->name == b->name;
        }
        case Kind::Prop:
        case Kind::NProp:
            return a->name == b->name;
        case Kind::Zero:
        case Kind::NZero:
            return a->zero == b->zero;
        case Kind::Mod:
        case Kind::Tilde:
            if (a->mod != b->mod) return false;
            break;
        case Kind::Unary:
            if (a->sugar != b->sugar) return false;
            break;
        case Kind::Binary:
            if (a->until != b->until) return false;
            break;
        case Kind::Mu:
        case Kind::Nu: {
            env.emplace_back(a->name, b->name);
            bool ok = alphaRec(a->kids[0], b->kids[0], env);
            env.pop_back();
            return ok;
        }
        default:
            break;
    }
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!alphaRec(a->kids[i], b->kids[i], env)) return false;
    return true;
}

bool alphaEqual(const Formula& a, const Formula& b) {
    std::vector<std::pair<std::string, std::string>> env;
    return alphaRec(a, b, env);
}

static Formula rebuild(const Formula& f, std::vector<Formula> kids) {
    bool same = true;
    for (std::size_t i = 0; i < kids.size(); ++i)
        if (kids[i] != f->kids[i]) same = false;
    if (same) return f;
    Node n = *f;
    n.kids = std::move(kids);
    return make(std::move(n));
}

namespace {

using SubstMemo = std::unordered_map<const Node*, Formula>;

Formula substRec(const Formula& f, const std::map<std::string, Formula>& s, SubstMemo& memo) {
    // Only variables that are actually free matter.
    bool touches = false;
    for (const auto& x : f->free)
        if (s.count(x)) touches = true;
    if (!touches) return f;
    if (f->kind == Kind::Var) return s.at(f->name);
    if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
    Formula out;
    if (f->kind == Kind::Mu || f->kind == Kind::Nu) {
        std::map<std::string, Formula> inner = s;
        bool changed = inner.erase(f->name) > 0;
        // Rename the binder if it would capture a free variable of a replacement.
        bool clash = false;
        for (const auto& [x, r] : inner) {
            if (std::find(f->free.begin(), f->free.end(), x) == f->free.end()) continue;
            if (std::binary_search(r->free.begin(), r->free.end(), f->name)) clash = true;
        }
        std::string name = f->name;
        Formula body = f->kids[0];
        if (clash) {
            std::set<std::string> used = allNames(f);
            for (const auto& [x, r] : inner) {
                used.insert(x);
                auto more = allNames(r);
                used.insert(more.begin(), more.end());
            }
            name = freshName(used, f->name);
            SubstMemo m;
            body = substRec(body, {{f->name, var(name)}}, m);
            changed = true;
        }
        if (changed) {
            SubstMemo m;
            out = binder(f->kind, name, substRec(body, inner, m));
        } else {
            out = binder(f->kind, name, substRec(body, inner, memo));
        }
    } else {
        std::vector<Formula> kids;
        kids.reserve(f->kids.size());
        for (const auto& k : f->kids) kids.push_back(substRec(k, s, memo));
        out = rebuild(f, std::move(kids));
    }
    memo.emplace(f.get(), out);
    return out;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Formula>& s) {
    if (s.empty()) return f;
    SubstMemo memo;
    return substRec(f, s, memo);
}

// ---------------------------------------------------------------- printing

namespace {

const char* sugarName(Sugar s) {
    switch (s) {
        case Sugar::Fg: return "Fg";
        case Sugar::Fc: return "Fc";
        case Sugar::Gg: return "Gg";
        case Sugar::Gc: return "Gc";
        case Sugar::Pg: return "Pg";
        case Sugar::Pc: return "Pc";
        case Sugar::Hg: return "Hg";
        case Sugar::Hc: return "Hc";
    }
    return "?";
}
const char* untilName(Until u) {
    switch (u) {
        case Until::Ug: return "Ug";
        case Until::Uc: return "Uc";
        case Until::Sg: return "Sg";
        case Until::Sc: return "Sc";
    }
    return "?";
}

// Precedence levels: 0 until, 1 or, 2 and, 3 prefix, 4 atom.
int level(const Formula& f) {
    switch (f->kind) {
        case Kind::Binary: return 0;
        case Kind::Or: return 1;
        case Kind::And: return 2;
        case Kind::Mod:
        case Kind::Tilde:
        case Kind::Unary: return 3;
        case Kind::Mu:
        case Kind::Nu: return -1;  // always bracketed when nested
        default: return 4;
    }
}

void pr(const Formula& f, std::string& out, int ctx);

void wrap(const Formula& f, std::string& out, int need) {
    int l = level(f);
    if (l < need) {
        out += '(';
        pr(f, out, 0);
        out += ')';
    } else {
        pr(f, out, need);
    }
}

void pr(const Formula& f, std::string& out, int ctx) {
    switch (f->kind) {
        case Kind::True: out += "true"; return;
        case Kind::False: out += "false"; return;
        case Kind::Prop: out += f->name; return;
        case Kind::NProp: out += "!" + f->name; return;
        case Kind::Var: out += f->name; return;
        case Kind::Zero: out += zeroName(f->zero); return;
        case Kind::NZero:
            if (f->zero == Zero::S) out += "nS";
            else if (f->zero == Zero::P) out += "nP";
            else out += std::string("!") + zeroName(f->zero);
            return;
        case Kind::And:
        case Kind::Or: {
            int l = level(f);
            // Left-nested chains print flat; right operands of equal level are bracketed.
            wrap(f->kids[0], out, l);
            out += f->kind == Kind::And ? " & " : " | ";
            wrap(f->kids[1], out, l + 1);
            return;
        }
        case Kind::Mod:
            out += modName(f->mod);
            out += ' ';
            wrap(f->kids[0], out, 3);
            return;
        case Kind::Tilde:
            out += '~';
            out += modName(f->mod);
            out += ' ';
            wrap(f->kids[0], out, 3);
            return;
        case Kind::Unary:
            out += sugarName(f->sugar);
            out += ' ';
            wrap(f->kids[0], out, 3);
            return;
        case Kind::Binary:
            // right associative
            wrap(f->kids[0], out, 1);
            out += ' ';
            out += untilName(f->until);
            out += ' ';
            wrap(f->kids[1], out, 0);
            return;
        case Kind::Mu:
        case Kind::Nu:
            (void)ctx;
            out += f->kind == Kind::Mu ? "mu " : "nu ";
            out += f->name;
            out += ". ";
            pr(f->kids[0], out, 0);
            return;
    }
}

}  // namespace

std::string print(const Formula& f) {
    std::string out;
    pr(f, out, 0);
    return out;
}

}  // namespace mudw
