#include <map>

#include "mudw/fragments.hpp"
#include "mudw/wordautomata.hpp"

namespace mudw {

namespace {

struct Pair {
    Formula pos, neg;
};

bool observable(Zero z, LayerKind k) {
    if (z == Zero::S || z == Zero::P) return true;
    bool global = z == Zero::FirstG || z == Zero::LastG;
    return global == (k == LayerKind::Global);
}

class BmaToBr {
public:
    explicit BmaToBr(std::vector<std::string> letters) : letters_(std::move(letters)) {}

    Pair layer(const Layer& l) {
        WordAlphabet al{letters_, true, true, {}};
        std::map<std::string, Formula> rename;
        std::set<std::string> used = allNames(l.skeleton);
        for (std::size_t i = 0; i < l.holes.size(); ++i) {
            Pair c = layer(l.children[i]);
            al.features.push_back(Feature{l.holes[i], c.pos, c.neg});
        }
        // Zeroary atoms of the other mode become features over themselves.
        std::map<std::pair<Zero, bool>, std::string> zeroFeat;
        Formula sk = hideForeign(l.skeleton, l.kind, al, zeroFeat, used);
        WordKind wk = l.kind == LayerKind::Global ? WordKind::Global : WordKind::Class;
        Transducer t = markingTransducer(sk, wk, al);
        auto fs = transducerToFormulas(t, al, wk);
        return {fs[1], fs[0]};
    }

private:
    Formula hideForeign(const Formula& f, LayerKind k, WordAlphabet& al,
                        std::map<std::pair<Zero, bool>, std::string>& feats, std::set<std::string>& used) {
        if ((f->kind == Kind::Zero || f->kind == Kind::NZero) && !observable(f->zero, k)) {
            bool neg = f->kind == Kind::NZero;
            auto key = std::make_pair(f->zero, neg);
            auto it = feats.find(key);
            if (it == feats.end()) {
                std::string h = freshName(used, "z");
                used.insert(h);
                al.features.push_back(Feature{h, zero(f->zero, neg), zero(f->zero, !neg)});
                it = feats.emplace(key, h).first;
            }
            return var(it->second);
        }
        if (f->kids.empty()) return f;
        std::vector<Formula> kids;
        for (const auto& c : f->kids) kids.push_back(hideForeign(c, k, al, feats, used));
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

    std::vector<std::string> letters_;
};

}  // namespace

Formula bmaToBr(const Formula& f) {
    if (!f->free.empty()) throw InputError("bmaToBr: formula must be a sentence");
    auto h = compHeight(f, Basis::BMA);
    if (!h.height) throw InputError("bmaToBr: formula is not in BMA");
    auto ps = propositions(f);
    BmaToBr conv(std::vector<std::string>(ps.begin(), ps.end()));
    return conv.layer(*h.witness).pos;
}

}  // namespace mudw
