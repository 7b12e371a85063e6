#include "mudw/reductions.hpp"

#include <algorithm>
#include <set>

#include "mudw/evaluator.hpp"

namespace mudw {

namespace {

// Fixpoint formulas with binders of one kind. Every fixpoint below moves in one direction
// along a finite chain, so mu and nu agree on finite words.
class Builder {
public:
    Builder(Kind k, std::set<std::string> used) : k_(k), used_(std::move(used)) {}

    // Reflexive eventually along m.
    Formula ev(Mod m, const Formula& f) {
        std::string x = fresh();
        return binder(k_, x, disj(f, mod(m, var(x))));
    }
    // Reflexive always along m.
    Formula always(Mod m, const Formula& f) {
        std::string x = fresh();
        return binder(k_, x, conj(f, disj(zero(endOf(m)), mod(m, var(x)))));
    }
    // Somewhere in the class.
    Formula inClass(const Formula& f) { return ev(Mod::Xc, ev(Mod::Yc, f)); }
    Formula allInClass(const Formula& f) { return always(Mod::Xc, always(Mod::Yc, f)); }
    std::string fresh() {
        std::string x = freshName(used_, "x");
        used_.insert(x);
        return x;
    }
    Kind kind() const { return k_; }

private:
    static Zero endOf(Mod m) {
        switch (m) {
            case Mod::Xg: return Zero::LastG;
            case Mod::Xc: return Zero::LastC;
            case Mod::Yg: return Zero::FirstG;
            case Mod::Yc: return Zero::FirstC;
        }
        return Zero::LastG;
    }
    Kind k_;
    std::set<std::string> used_;
};

// Exactly one l in the class of the current position.
Formula exactlyOneInClass(Builder& b, const std::string& l) {
    Formula noLater = disj(zero(Zero::LastC), mod(Mod::Xc, b.always(Mod::Xc, nprop(l))));
    return conj(b.inClass(prop(l)), b.allInClass(disj(nprop(l), noLater)));
}

}  // namespace

Formula bigWitnessFormula(const std::string& la, const std::string& lb) {
    if (la == lb) throw InputError("bigWitnessFormula: letters must differ");
    Builder b(Kind::Nu, {la, lb});
    std::string x = b.fresh();
    Formula inner = conj(prop(la), mod(Mod::Xg, b.ev(Mod::Xg, var(x))));
    Formula step = conj(prop(lb), b.inClass(inner));
    Formula body = conj(prop(la), b.inClass(conj(prop(lb), mod(Mod::Xg, b.ev(Mod::Xg, step)))));
    return b.ev(Mod::Xg, nu(x, body));
}

Formula monotoneBijectionFormula(const std::string& la, const std::string& lb) {
    if (la == lb) throw InputError("monotoneBijectionFormula: letters must differ");
    Builder b(Kind::Mu, {la, lb});
    Formula matched = disj(conj(nprop(la), nprop(lb)), conj(exactlyOneInClass(b, la), exactlyOneInClass(b, lb)));
    return conj(b.always(Mod::Xg, matched), dualize(bigWitnessFormula(la, lb)));
}

void validate(const PcpInstance& I) {
    if (I.pairs.empty()) throw InputError("pcp: instance has no pairs");
    if (I.markA == I.markB) throw InputError("pcp: marker letters must differ");
    for (const auto& m : {I.markA, I.markB})
        if (!isLetterName(m)) throw InputError("pcp: bad marker letter '" + m + "'");
    for (const auto& [u, v] : I.pairs) {
        if (u.empty() || v.empty()) throw InputError("pcp: words must be nonempty");
        for (char c : u + v) {
            std::string l(1, c);
            if (!isLetterName(l)) throw InputError("pcp: bad letter '" + l + "'");
            if (l == I.markA || l == I.markB) throw InputError("pcp: letter '" + l + "' clashes with a marker");
        }
    }
}

std::vector<std::string> pcpAlphabet(const PcpInstance& I) {
    validate(I);
    std::set<char> cs;
    for (const auto& [u, v] : I.pairs) {
        cs.insert(u.begin(), u.end());
        cs.insert(v.begin(), v.end());
    }
    std::vector<std::string> r;
    for (char c : cs) r.emplace_back(1, c);
    r.push_back(I.markA);
    r.push_back(I.markB);
    return r;
}

namespace {
std::pair<std::string, std::string> concatenations(const PcpInstance& I, const std::vector<int>& indices) {
    std::string u, v;
    for (int i : indices) {
        if (i < 1 || i > static_cast<int>(I.pairs.size())) throw InputError("pcp: index out of range");
        u += I.pairs[i - 1].first;
        v += I.pairs[i - 1].second;
    }
    return {u, v};
}
}  // namespace

bool isSolution(const PcpInstance& I, const std::vector<int>& indices) {
    if (indices.empty()) return false;
    auto [u, v] = concatenations(I, indices);
    return u == v;
}

Formula pcpFormula(const PcpInstance& I) {
    auto sigma = pcpAlphabet(I);
    Builder b(Kind::Mu, {sigma.begin(), sigma.end()});
    const std::string &A = I.markA, &B = I.markB;
    // Starts with A B, ends with A B, length at least 4.
    Formula start = andAll({prop(A), mod(Mod::Xg, prop(B)), mod(Mod::Xg, mod(Mod::Xg, mod(Mod::Xg, mkTrue())))});
    Formula end = b.ev(Mod::Xg, conj(prop(A), mod(Mod::Xg, conj(prop(B), zero(Zero::LastG)))));
    // The next position without letter skip satisfies f.
    auto nextWithout = [&](const std::string& skip, const Formula& f) {
        std::string y = b.fresh();
        return mod(Mod::Xg, mu(y, disj(conj(nprop(skip), f), conj(prop(skip), mod(Mod::Xg, var(y))))));
    };
    // From a marker m, skipping the other marker o: m w m.
    auto block = [&](const std::string& m, const std::string& o, const std::string& w) {
        Formula f = prop(m);
        for (auto it = w.rbegin(); it != w.rend(); ++it) f = conj(prop(std::string(1, *it)), nextWithout(o, f));
        return conj(prop(m), nextWithout(o, f));
    };
    std::vector<Formula> choices;
    for (const auto& [u, v] : I.pairs) choices.push_back(conj(block(A, B, u), b.inClass(conj(prop(B), block(B, A, v)))));
    Formula noLaterA = disj(zero(Zero::LastG), mod(Mod::Xg, b.always(Mod::Xg, nprop(A))));
    Formula blocks = b.always(Mod::Xg, orAll({nprop(A), noLaterA, orAll(choices)}));
    return andAll({start, end, monotoneBijectionFormula(A, B), blocks});
}

DataWord encodeSolution(const PcpInstance& I, const std::vector<int>& indices) {
    validate(I);
    if (indices.empty()) throw InputError("pcp: a solution is nonempty");
    auto [u, v] = concatenations(I, indices);
    if (u != v) throw InputError("pcp: index sequence is not a solution");
    // Block boundaries in the common word.
    std::vector<std::size_t> cutsU{0}, cutsV{0};
    for (int i : indices) {
        cutsU.push_back(cutsU.back() + I.pairs[i - 1].first.size());
        cutsV.push_back(cutsV.back() + I.pairs[i - 1].second.size());
    }
    std::vector<Letter> letters;
    std::vector<Value> values;
    Value fresh = cutsU.size() + 1;
    std::size_t a = 0, bIdx = 0;
    for (std::size_t k = 0; k <= u.size(); ++k) {
        if (a < cutsU.size() && cutsU[a] == k) {
            letters.push_back(I.markA);
            values.push_back(++a);
        }
        if (bIdx < cutsV.size() && cutsV[bIdx] == k) {
            letters.push_back(I.markB);
            values.push_back(++bIdx);
        }
        if (k < u.size()) {
            letters.emplace_back(1, u[k]);
            values.push_back(fresh++);
        }
    }
    return DataWord(std::move(letters), std::move(values));
}

std::optional<DataWord> searchPcpWitness(const PcpInstance& I, std::size_t maxLen) {
    auto sigma = pcpAlphabet(I);
    Evaluator ev(pcpFormula(I));
    const std::string &A = I.markA, &B = I.markB;
    for (std::size_t n = 4; n <= maxLen; ++n) {
        std::vector<std::size_t> mid(n - 4, 0);
        for (;;) {
            std::vector<Letter> letters{A, B};
            for (std::size_t c : mid) letters.push_back(sigma[c]);
            letters.push_back(A);
            letters.push_back(B);
            std::vector<std::size_t> as, bs;
            for (std::size_t i = 0; i < n; ++i) {
                if (letters[i] == A) as.push_back(i);
                if (letters[i] == B) bs.push_back(i);
            }
            if (as.size() == bs.size()) {
                std::vector<Value> values(n);
                for (std::size_t i = 0; i < n; ++i) values[i] = n + 1 + i;
                std::vector<std::size_t> perm(as.size());
                for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
                do {
                    for (std::size_t i = 0; i < as.size(); ++i) {
                        values[as[i]] = i + 1;
                        values[bs[perm[i]]] = i + 1;
                    }
                    DataWord w(letters, values);
                    if (ev.models(w)) return w;
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
            // Next middle string, last position fastest.
            std::size_t k = mid.size();
            while (k > 0 && mid[k - 1] + 1 == sigma.size()) mid[--k] = 0;
            if (k == 0) break;
            ++mid[k - 1];
        }
    }
    return std::nullopt;
}

}  // namespace mudw
