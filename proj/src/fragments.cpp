#include "mudw/fragments.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <unordered_map>

namespace mudw {

const char* name(Basis b) { return b == Basis::BR ? "br" : "bma"; }

const char* name(LayerKind k) {
    switch (k) {
        case LayerKind::Future: return "future";
        case LayerKind::Past: return "past";
        case LayerKind::Global: return "global";
        case LayerKind::Class: return "class";
    }
    return "?";
}

std::vector<LayerKind> kindsOf(Basis b) {
    if (b == Basis::BR) return {LayerKind::Future, LayerKind::Past};
    return {LayerKind::Global, LayerKind::Class};
}

bool modInKind(Mod m, LayerKind k) {
    switch (k) {
        case LayerKind::Future: return isFuture(m);
        case LayerKind::Past: return !isFuture(m);
        case LayerKind::Global: return isGlobal(m);
        case LayerKind::Class: return !isGlobal(m);
    }
    return false;
}

bool zeroInKind(Zero z, LayerKind k, bool strict) {
    if (!strict || z == Zero::S || z == Zero::P) return true;
    switch (k) {
        case LayerKind::Future: return z == Zero::LastG || z == Zero::LastC;
        case LayerKind::Past: return z == Zero::FirstG || z == Zero::FirstC;
        case LayerKind::Global: return z == Zero::FirstG || z == Zero::LastG;
        case LayerKind::Class: return z == Zero::FirstC || z == Zero::LastC;
    }
    return false;
}

bool isPure(const Formula& f, LayerKind k, bool strict) {
    if ((f->kind == Kind::Mod || f->kind == Kind::Tilde) && !modInKind(f->mod, k)) return false;
    if ((f->kind == Kind::Zero || f->kind == Kind::NZero) && !zeroInKind(f->zero, k, strict)) return false;
    if (f->kind == Kind::Unary || f->kind == Kind::Binary) {
        Formula d = desugarKeepTilde(f);
        return isPure(d, k, strict);
    }
    for (const auto& c : f->kids)
        if (!isPure(c, k, strict)) return false;
    return true;
}

namespace {

// Replacement of free variables without capture avoidance.
Formula plainReplace(const Formula& f, const std::map<std::string, Formula>& s) {
    bool touches = false;
    for (const auto& x : f->free)
        if (s.count(x)) touches = true;
    if (!touches) return f;
    if (f->kind == Kind::Var) return s.at(f->name);
    std::map<std::string, Formula> inner = s;
    if (f->kind == Kind::Mu || f->kind == Kind::Nu) inner.erase(f->name);
    std::vector<Formula> kids;
    for (const auto& k : f->kids) kids.push_back(plainReplace(k, inner));
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

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

class HeightDp {
public:
    HeightDp(const Formula& root, Basis basis, bool strict)
        : strict_(strict), kinds_(kindsOf(basis)), rootFree_(root->free.begin(), root->free.end()), used_(allNames(root)) {}

    std::size_t height(const Formula& f) { return get(f)[2]; }

    Layer build(const Formula& f) {
        const auto& v = get(f);
        std::size_t m = v[0] <= v[1] ? 0 : 1;
        Layer l;
        l.kind = kinds_[m];
        std::unordered_map<const Node*, Formula> memo;
        l.skeleton = skeleton(f, m, l, memo);
        return l;
    }

private:
    using Entry = std::array<std::size_t, 3>;  // cost in kind 0, kind 1, height

    bool cuttable(const Formula& g) const {
        for (const auto& x : g->free)
            if (!rootFree_.count(x)) return false;
        return true;
    }

    std::size_t cutCost(const Formula& g) { return cuttable(g) ? height(g) : kInf; }

    std::size_t passCost(const Formula& g, std::size_t m) { return std::min(get(g)[m], cutCost(g)); }

    const Entry& get(const Formula& f) {
        if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
        Entry e{};
        for (std::size_t m = 0; m < 2; ++m) e[m] = cost(f, m);
        std::size_t best = std::min(e[0], e[1]);
        e[2] = best >= kInf ? kInf : best + 1;
        return memo_.emplace(f.get(), e).first->second;
    }

    std::size_t cost(const Formula& f, std::size_t m) {
        switch (f->kind) {
            case Kind::Mod:
            case Kind::Tilde:
                if (!modInKind(f->mod, kinds_[m])) return kInf;
                return passCost(f->kids[0], m);
            case Kind::Zero:
            case Kind::NZero: return zeroInKind(f->zero, kinds_[m], strict_) ? 0 : kInf;
            case Kind::Unary:
            case Kind::Binary:
                throw InputError("compHeight: sugar must be expanded first");
            default: {
                std::size_t c = 0;
                for (const auto& k : f->kids) c = std::max(c, passCost(k, m));
                return c;
            }
        }
    }

    // Shared subterms map to the same skeleton and the same hole.
    Formula skeleton(const Formula& f, std::size_t m, Layer& l, std::unordered_map<const Node*, Formula>& memo) {
        if (f->kids.empty()) return f;
        if (auto it = memo.find(f.get()); it != memo.end()) return it->second;
        Formula r = skeletonStep(f, m, l, memo);
        memo.emplace(f.get(), r);
        return r;
    }

    Formula skeletonStep(const Formula& f, std::size_t m, Layer& l, std::unordered_map<const Node*, Formula>& memo) {
        std::vector<Formula> kids;
        for (const auto& k : f->kids) {
            std::size_t pass = get(k)[m];
            if (pass <= cutCost(k) && pass < kInf) {
                kids.push_back(skeleton(k, m, l, memo));
            } else if (auto it = memo.find(k.get()); it != memo.end()) {
                kids.push_back(it->second);
            } else {
                std::string h = freshName(used_, "h");
                used_.insert(h);
                l.holes.push_back(h);
                l.children.push_back(build(k));
                kids.push_back(var(h));
                memo.emplace(k.get(), kids.back());
            }
        }
        switch (f->kind) {
            case Kind::And: return conj(kids[0], kids[1]);
            case Kind::Or: return disj(kids[0], kids[1]);
            case Kind::Mod: return mod(f->mod, kids[0]);
            case Kind::Tilde: return tilde(f->mod, kids[0]);
            case Kind::Mu:
            case Kind::Nu: return binder(f->kind, f->name, kids[0]);
            default: return f;
        }
    }

    bool strict_;
    std::vector<LayerKind> kinds_;
    std::set<std::string> rootFree_;
    std::set<std::string> used_;
    std::unordered_map<const Node*, Entry> memo_;
};

// Names bound above each occurrence of hole h must avoid `forbidden`.
bool holeCaptureFree(const Formula& f, const std::string& h, const std::vector<std::string>& forbidden,
                     std::vector<std::string>& bound) {
    if (f->kind == Kind::Var && f->name == h) {
        for (const auto& b : bound)
            if (std::find(forbidden.begin(), forbidden.end(), b) != forbidden.end()) return false;
        return true;
    }
    if (f->kind == Kind::Mu || f->kind == Kind::Nu) {
        if (f->name == h) return true;  // shadowed, the hole is not free here
        bound.push_back(f->name);
        bool ok = holeCaptureFree(f->kids[0], h, forbidden, bound);
        bound.pop_back();
        return ok;
    }
    for (const auto& k : f->kids)
        if (!holeCaptureFree(k, h, forbidden, bound)) return false;
    return true;
}

bool checkLayer(const Layer& l, Basis basis, const std::set<std::string>& rootFree, bool strict) {
    auto ks = kindsOf(basis);
    if (std::find(ks.begin(), ks.end(), l.kind) == ks.end()) return false;
    if (!isPure(l.skeleton, l.kind, strict)) return false;
    if (l.holes.size() != l.children.size()) return false;
    std::set<std::string> hs(l.holes.begin(), l.holes.end());
    if (hs.size() != l.holes.size()) return false;
    auto bound = boundVars(l.skeleton);
    for (std::size_t i = 0; i < l.holes.size(); ++i) {
        const auto& h = l.holes[i];
        if (rootFree.count(h) || bound.count(h)) return false;
        const auto& fv = l.skeleton->free;
        if (!std::binary_search(fv.begin(), fv.end(), h)) return false;
        std::vector<std::string> stack;
        if (!l.children[i].skeleton || !holeCaptureFree(l.skeleton, h, l.children[i].recompose()->free, stack))
            return false;
        if (!checkLayer(l.children[i], basis, rootFree, strict)) return false;
    }
    // Free variables other than holes must be free in the whole formula.
    for (const auto& x : l.skeleton->free)
        if (!hs.count(x) && !rootFree.count(x)) return false;
    return true;
}

}  // namespace

std::size_t Layer::depth() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
}

Formula Layer::recompose() const {
    std::map<std::string, Formula> s;
    for (std::size_t i = 0; i < holes.size(); ++i) s[holes[i]] = children[i].recompose();
    return plainReplace(skeleton, s);
}

HeightResult compHeight(const Formula& f, Basis basis, bool strict) {
    Formula g = desugarKeepTilde(f);
    HeightDp dp(g, basis, strict);
    HeightResult r;
    std::size_t h = dp.height(g);
    if (h >= kInf) return r;
    r.height = h;
    r.witness = dp.build(g);
    return r;
}

bool verifyDecomposition(const Formula& f, const Layer& d, Basis basis, bool strict) {
    Formula g = desugarKeepTilde(f);
    std::set<std::string> rootFree(g->free.begin(), g->free.end());
    if (!d.skeleton || !checkLayer(d, basis, rootFree, strict)) return false;
    return alphaEqual(d.recompose(), g);
}

static bool hasBinder(const Formula& f, Kind k) {
    if (f->kind == k) return true;
    for (const auto& c : f->kids)
        if (hasBinder(c, k)) return true;
    return false;
}

bool isNuOnly(const Formula& f) { return !hasBinder(desugar(f), Kind::Mu); }
bool isMuOnly(const Formula& f) { return !hasBinder(desugar(f), Kind::Nu); }

Formula brToNu(const Formula& f) {
    if (!compHeight(f, Basis::BR).height) throw InputError("brToNu: formula is not in BR");
    return swapFixpoints(toGuarded(f), Kind::Mu, Kind::Nu);
}

FragmentReport classify(const Formula& f) {
    FragmentReport r;
    auto br = compHeight(f, Basis::BR);
    auto bma = compHeight(f, Basis::BMA);
    r.br = br.height;
    r.bma = bma.height;
    r.brWitness = br.witness;
    r.bmaWitness = bma.witness;
    r.nuOnly = isNuOnly(f);
    r.muOnly = isMuOnly(f);
    return r;
}

}  // namespace mudw
