#include <algorithm>
#include <functional>
#include <unordered_map>

#include "mudw/formula.hpp"

namespace mudw {

namespace {

Formula rebuildWith(const Formula& f, std::vector<Formula> kids) {
    bool same = kids.size() == f->kids.size();
    for (std::size_t i = 0; same && i < kids.size(); ++i)
        if (kids[i] != f->kids[i]) same = false;
    if (same) return f;
    switch (f->kind) {
        case Kind::And: return conj(kids[0], kids[1]);
        case Kind::Or: return disj(kids[0], kids[1]);
        case Kind::Mod: return mod(f->mod, kids[0]);
        case Kind::Tilde: return tilde(f->mod, kids[0]);
        case Kind::Mu:
        case Kind::Nu: return binder(f->kind, f->name, kids[0]);
        case Kind::Unary: return sugar(f->sugar, kids[0]);
        case Kind::Binary: return until(f->until, kids[0], kids[1]);
        default: return f;
    }
}

// Boundary atom that holds where modality m has no target.
Formula boundaryOf(Mod m) {
    switch (m) {
        case Mod::Xg: return zero(Zero::LastG);
        case Mod::Xc: return zero(Zero::LastC);
        case Mod::Yg: return zero(Zero::FirstG);
        case Mod::Yc: return zero(Zero::FirstC);
    }
    return mkFalse();
}

Mod sugarMod(Sugar s) {
    switch (s) {
        case Sugar::Fg:
        case Sugar::Gg: return Mod::Xg;
        case Sugar::Fc:
        case Sugar::Gc: return Mod::Xc;
        case Sugar::Pg:
        case Sugar::Hg: return Mod::Yg;
        case Sugar::Pc:
        case Sugar::Hc: return Mod::Yc;
    }
    return Mod::Xg;
}

bool sugarIsBox(Sugar s) { return s == Sugar::Gg || s == Sugar::Gc || s == Sugar::Hg || s == Sugar::Hc; }

Mod untilMod(Until u) {
    switch (u) {
        case Until::Ug: return Mod::Xg;
        case Until::Uc: return Mod::Xc;
        case Until::Sg: return Mod::Yg;
        case Until::Sc: return Mod::Yc;
    }
    return Mod::Xg;
}

class Desugarer {
public:
    Desugarer(const Formula& f, bool sugar, bool tildes) : used_(allNames(f)), all_(sugar), tildes_(tildes) {}

    Formula run(const Formula& f) {
        if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
        Formula r = step(f);
        memo_.emplace(f.get(), r);
        return r;
    }

private:
    Formula step(const Formula& f) {
        std::vector<Formula> kids;
        kids.reserve(f->kids.size());
        for (const auto& k : f->kids) kids.push_back(run(k));
        switch (f->kind) {
            case Kind::Tilde:
                if (!tildes_) break;
                return disj(boundaryOf(f->mod), mod(f->mod, kids[0]));
            case Kind::Unary: {
                if (!all_) break;
                Mod m = sugarMod(f->sugar);
                std::string x = fresh();
                if (sugarIsBox(f->sugar))
                    return nu(x, conj(kids[0], disj(boundaryOf(m), mod(m, var(x)))));
                return mu(x, disj(kids[0], mod(m, var(x))));
            }
            case Kind::Binary: {
                if (!all_) break;
                std::string x = fresh();
                return mu(x, disj(kids[1], conj(kids[0], mod(untilMod(f->until), var(x)))));
            }
            default:
                break;
        }
        return rebuildWith(f, std::move(kids));
    }

    std::string fresh() {
        std::string x = freshName(used_, "z");
        used_.insert(x);
        return x;
    }
    std::set<std::string> used_;
    bool all_;
    bool tildes_;
    std::unordered_map<const Node*, Formula> memo_;
};

using Memo = std::unordered_map<const Node*, Formula>;

Formula dualStep(const Formula& f, Memo& m);

Formula dualRec(const Formula& f, Memo& m) {
    if (auto it = m.find(f.get()); it != m.end()) return it->second;
    Formula r = dualStep(f, m);
    m.emplace(f.get(), r);
    return r;
}

Formula dualStep(const Formula& f, Memo& m) {
    switch (f->kind) {
        case Kind::True: return mkFalse();
        case Kind::False: return mkTrue();
        case Kind::Prop: return nprop(f->name);
        case Kind::NProp: return prop(f->name);
        case Kind::Zero: return zero(f->zero, true);
        case Kind::NZero: return zero(f->zero, false);
        case Kind::Var: return f;
        case Kind::And: return disj(dualRec(f->kids[0], m), dualRec(f->kids[1], m));
        case Kind::Or: return conj(dualRec(f->kids[0], m), dualRec(f->kids[1], m));
        case Kind::Mod: return disj(boundaryOf(f->mod), mod(f->mod, dualRec(f->kids[0], m)));
        case Kind::Mu: return nu(f->name, dualRec(f->kids[0], m));
        case Kind::Nu: return mu(f->name, dualRec(f->kids[0], m));
        default: break;
    }
    throw InputError("dualize: unexpected node");
}

Formula mirrorRec(const Formula& f) {
    std::vector<Formula> kids;
    for (const auto& k : f->kids) kids.push_back(mirrorRec(k));
    switch (f->kind) {
        case Kind::Zero:
        case Kind::NZero: return zero(mirror(f->zero), f->kind == Kind::NZero);
        case Kind::Mod: return mod(mirror(f->mod), kids[0]);
        case Kind::Tilde: return tilde(mirror(f->mod), kids[0]);
        case Kind::Unary: {
            static const std::map<Sugar, Sugar> m{{Sugar::Fg, Sugar::Pg}, {Sugar::Pg, Sugar::Fg},
                                                  {Sugar::Fc, Sugar::Pc}, {Sugar::Pc, Sugar::Fc},
                                                  {Sugar::Gg, Sugar::Hg}, {Sugar::Hg, Sugar::Gg},
                                                  {Sugar::Gc, Sugar::Hc}, {Sugar::Hc, Sugar::Gc}};
            return sugar(m.at(f->sugar), kids[0]);
        }
        case Kind::Binary: {
            static const std::map<Until, Until> m{
                {Until::Ug, Until::Sg}, {Until::Sg, Until::Ug}, {Until::Uc, Until::Sc}, {Until::Sc, Until::Uc}};
            return until(m.at(f->until), kids[0], kids[1]);
        }
        default: return rebuildWith(f, std::move(kids));
    }
}

// True iff x occurs free in f outside the scope of any modality.
bool unguardedIn(const Formula& f, const std::string& x) {
    if (!std::binary_search(f->free.begin(), f->free.end(), x)) return false;
    switch (f->kind) {
        case Kind::Var: return f->name == x;
        case Kind::Mod:
        case Kind::Tilde: return false;
        default:
            for (const auto& k : f->kids)
                if (unguardedIn(k, x)) return true;
            return false;
    }
}

bool guardedCore(const Formula& f) {
    if ((f->kind == Kind::Mu || f->kind == Kind::Nu) && unguardedIn(f->kids[0], f->name)) return false;
    for (const auto& k : f->kids)
        if (!guardedCore(k)) return false;
    return true;
}

// Unfolds inner binders until no free occurrence of x sits unguarded inside one.
Formula exposeVar(const Formula& f, const std::string& x) {
    if (!unguardedIn(f, x)) return f;
    switch (f->kind) {
        case Kind::And: return conj(exposeVar(f->kids[0], x), exposeVar(f->kids[1], x));
        case Kind::Or: return disj(exposeVar(f->kids[0], x), exposeVar(f->kids[1], x));
        case Kind::Mu:
        case Kind::Nu: {
            Formula unfolded = substitute(f->kids[0], {{f->name, f}});
            return exposeVar(unfolded, x);
        }
        default: return f;
    }
}

using Clause = std::vector<Formula>;  // disjunction of literals
using Cnf = std::vector<Clause>;      // conjunction of clauses

void addLit(Clause& c, const Formula& l) {
    for (const auto& e : c)
        if (structurallyEqual(e, l)) return;
    c.push_back(l);
}

Cnf toCnf(const Formula& f) {
    if (f->kind == Kind::True) return {};
    if (f->kind == Kind::False) return {Clause{}};
    if (f->kind == Kind::And) {
        Cnf a = toCnf(f->kids[0]), b = toCnf(f->kids[1]);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }
    if (f->kind == Kind::Or) {
        Cnf a = toCnf(f->kids[0]), b = toCnf(f->kids[1]);
        Cnf out;
        for (const auto& ca : a)
            for (const auto& cb : b) {
                Clause c = ca;
                for (const auto& l : cb) addLit(c, l);
                out.push_back(std::move(c));
            }
        return out;
    }
    return {Clause{f}};
}

Formula guardRec(const Formula& f) {
    std::vector<Formula> kids;
    for (const auto& k : f->kids) kids.push_back(guardRec(k));
    Formula g = rebuildWith(f, std::move(kids));
    if (g->kind != Kind::Mu && g->kind != Kind::Nu) return g;
    const std::string& x = g->name;
    if (!unguardedIn(g->kids[0], x)) return g;
    Formula body = exposeVar(g->kids[0], x);
    Cnf cnf = toCnf(body);
    Formula alpha = mkTrue(), beta = mkTrue();
    for (const auto& c : cnf) {
        bool hasX = false;
        Formula rest = mkFalse();
        for (const auto& l : c) {
            if (l->kind == Kind::Var && l->name == x) hasX = true;
            else rest = orS(rest, l);
        }
        if (hasX) alpha = andS(alpha, rest);
        else beta = andS(beta, rest);
    }
    Formula nb = g->kind == Kind::Mu ? andS(alpha, beta) : beta;
    return binder(g->kind, x, nb);
}

void renameRec(const Formula& f, std::set<std::string>& used, std::map<std::string, std::string>& env,
               Formula& out) {
    switch (f->kind) {
        case Kind::Var: {
            auto it = env.find(f->name);
            out = it == env.end() || it->second == f->name ? f : var(it->second);
            return;
        }
        case Kind::Mu:
        case Kind::Nu: {
            std::string name = freshName(used, f->name);
            used.insert(name);
            auto saved = env.find(f->name) == env.end() ? std::optional<std::string>{}
                                                         : std::optional<std::string>{env[f->name]};
            env[f->name] = name;
            Formula body;
            renameRec(f->kids[0], used, env, body);
            if (saved) env[f->name] = *saved;
            else env.erase(f->name);
            out = binder(f->kind, name, body);
            return;
        }
        default: {
            std::vector<Formula> kids(f->kids.size());
            for (std::size_t i = 0; i < kids.size(); ++i) renameRec(f->kids[i], used, env, kids[i]);
            out = rebuildWith(f, std::move(kids));
        }
    }
}

}  // namespace

Formula desugar(const Formula& f) { return Desugarer(f, true, true).run(f); }

Formula expandTilde(const Formula& f) { return Desugarer(f, false, true).run(f); }

Formula desugarKeepTilde(const Formula& f) { return Desugarer(f, true, false).run(f); }

Formula dualize(const Formula& f) {
    if (!isSentence(f)) throw InputError("dualize: formula has free variables");
    Memo m;
    return dualRec(desugar(f), m);
}

Formula mirror(const Formula& f) { return mirrorRec(f); }

bool isGuarded(const Formula& f) { return guardedCore(desugar(f)); }

Formula toGuarded(const Formula& f) {
    Formula core = desugar(f);
    if (guardedCore(core)) return core;
    return renameBoundApart(guardRec(core));
}

Formula renameBoundApart(const Formula& f) {
    std::set<std::string> used(f->free.begin(), f->free.end());
    std::map<std::string, std::string> env;
    Formula out;
    renameRec(f, used, env, out);
    return out;
}

Formula swapFixpoints(const Formula& f, Kind from, Kind to) {
    std::vector<Formula> kids;
    for (const auto& k : f->kids) kids.push_back(swapFixpoints(k, from, to));
    if (f->kind == from) return binder(to, f->name, kids[0]);
    return rebuildWith(f, std::move(kids));
}

std::size_t modalDepth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& k : f->kids) d = std::max(d, modalDepth(k));
    if (f->kind == Kind::Mod || f->kind == Kind::Tilde || f->kind == Kind::Unary || f->kind == Kind::Binary)
        ++d;
    return d;
}

std::size_t fixpointDepth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& k : f->kids) d = std::max(d, fixpointDepth(k));
    if (f->kind == Kind::Mu || f->kind == Kind::Nu) ++d;
    return d;
}

Formula bekic(const VectorialFormula& v, const std::string& component) {
    if (v.vars.size() != v.bodies.size()) throw InputError("bekic: arity mismatch");
    if (v.binder != Kind::Mu && v.binder != Kind::Nu) throw InputError("bekic: binder must be mu or nu");
    auto it = std::find(v.vars.begin(), v.vars.end(), component);
    if (it == v.vars.end()) throw InputError("bekic: unknown component '" + component + "'");
    std::vector<std::string> vars = v.vars;
    std::vector<Formula> bodies = v.bodies;
    // Eliminate every other variable, last first.
    for (std::size_t i = vars.size(); i-- > 0;) {
        if (vars[i] == component) continue;
        Formula sol = binder(v.binder, vars[i], bodies[i]);
        std::map<std::string, Formula> s{{vars[i], sol}};
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (j != i) bodies[j] = substitute(bodies[j], s);
        vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(i));
        bodies.erase(bodies.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return binder(v.binder, component, bodies[0]);
}

}  // namespace mudw
