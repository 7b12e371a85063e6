#include <array>
#include <cctype>
#include <map>
#include <set>

#include "mudw/dltl.hpp"

namespace mudw {

namespace fo2 {

namespace {
Fo2 make(Fo2Node n) { return std::make_shared<const Fo2Node>(std::move(n)); }
void checkVar(int v) {
    if (v != 0 && v != 1) throw InputError("fo2: variable must be x or y");
}
}  // namespace

Fo2 tt() { return make({FoKind::True, "", 0, 1, {}}); }
Fo2 ff() { return make({FoKind::False, "", 0, 1, {}}); }

Fo2 letter(const std::string& l, int v) {
    checkVar(v);
    return make({FoKind::Letter, l, v, v, {}});
}

Fo2 rel(FoKind k, int a, int b) {
    checkVar(a);
    checkVar(b);
    switch (k) {
        case FoKind::Eq:
        case FoKind::Less:
        case FoKind::Succ:
        case FoKind::ClassSucc:
        case FoKind::ClassLess:
        case FoKind::Sim: return make({k, "", a, b, {}});
        default: throw InputError("fo2: not a relation");
    }
}

Fo2 neg(Fo2 f) {
    if (f->kind == FoKind::True) return ff();
    if (f->kind == FoKind::False) return tt();
    if (f->kind == FoKind::Not) return f->kids[0];
    return make({FoKind::Not, "", 0, 1, {std::move(f)}});
}

Fo2 conj(Fo2 a, Fo2 b) {
    if (a->kind == FoKind::False || b->kind == FoKind::False) return ff();
    if (a->kind == FoKind::True) return b;
    if (b->kind == FoKind::True) return a;
    return make({FoKind::And, "", 0, 1, {std::move(a), std::move(b)}});
}

Fo2 disj(Fo2 a, Fo2 b) {
    if (a->kind == FoKind::True || b->kind == FoKind::True) return tt();
    if (a->kind == FoKind::False) return b;
    if (b->kind == FoKind::False) return a;
    return make({FoKind::Or, "", 0, 1, {std::move(a), std::move(b)}});
}

Fo2 exists(int v, Fo2 f) {
    checkVar(v);
    return make({FoKind::Exists, "", v, v, {std::move(f)}});
}

Fo2 forall(int v, Fo2 f) {
    checkVar(v);
    return make({FoKind::Forall, "", v, v, {std::move(f)}});
}

}  // namespace fo2

namespace {

bool isRelation(FoKind k) {
    return k == FoKind::Eq || k == FoKind::Less || k == FoKind::Succ || k == FoKind::ClassSucc ||
           k == FoKind::ClassLess || k == FoKind::Sim;
}

const char* relText(FoKind k) {
    switch (k) {
        case FoKind::Eq: return "=";
        case FoKind::Less: return "<";
        case FoKind::Succ: return "+1=";
        case FoKind::ClassSucc: return "~+1=";
        case FoKind::ClassLess: return "<~";
        case FoKind::Sim: return "~";
        default: return "?";
    }
}

char varName(int v) { return v == 0 ? 'x' : 'y'; }

// ---------------------------------------------------------------- parsing

class Fo2Parser {
public:
    explicit Fo2Parser(const std::string& s) : s_(s) {}

    Fo2 run() {
        Fo2 f = impl();
        skip();
        if (i_ != s_.size()) throw ParseError("unexpected input", i_);
        return f;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(const std::string& t) {
        skip();
        if (s_.compare(i_, t.size(), t) == 0) {
            i_ += t.size();
            return true;
        }
        return false;
    }
    std::string ident() {
        skip();
        std::size_t j = i_;
        if (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j])))
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        std::string w = s_.substr(i_, j - i_);
        i_ = j;
        return w;
    }
    int variable() {
        std::size_t at = (skip(), i_);
        std::string w = ident();
        if (w == "x") return 0;
        if (w == "y") return 1;
        throw ParseError("expected variable x or y", at);
    }
    // After 'E' or 'A': a variable then '.'.
    bool quantifierAhead() const {
        std::size_t j = i_;
        while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
        if (j >= s_.size() || (s_[j] != 'x' && s_[j] != 'y')) return false;
        ++j;
        while (j < s_.size() && std::isspace(static_cast<unsigned char>(s_[j]))) ++j;
        return j < s_.size() && s_[j] == '.';
    }

    Fo2 impl() {
        Fo2 l = orExpr();
        if (eat("->")) return fo2::disj(fo2::neg(l), impl());
        return l;
    }
    Fo2 orExpr() {
        Fo2 l = andExpr();
        for (;;) {
            skip();
            if (i_ < s_.size() && s_[i_] == '|') {
                ++i_;
                l = fo2::disj(l, andExpr());
            } else {
                return l;
            }
        }
    }
    Fo2 andExpr() {
        Fo2 l = prefix();
        for (;;) {
            skip();
            if (i_ < s_.size() && s_[i_] == '&') {
                ++i_;
                l = fo2::conj(l, prefix());
            } else {
                return l;
            }
        }
    }
    Fo2 prefix() {
        skip();
        if (i_ < s_.size() && s_[i_] == '!') {
            ++i_;
            return fo2::neg(prefix());
        }
        if (i_ < s_.size() && s_[i_] == '(') {
            ++i_;
            Fo2 f = impl();
            if (!eat(")")) throw ParseError("expected ')'", i_);
            return f;
        }
        std::size_t at = i_;
        std::string w = ident();
        if (w.empty()) throw ParseError("expected a formula", at);
        if ((w == "E" || w == "A") && quantifierAhead()) {
            int v = variable();
            eat(".");
            Fo2 body = impl();
            return w == "E" ? fo2::exists(v, body) : fo2::forall(v, body);
        }
        if (w == "true") return fo2::tt();
        if (w == "false") return fo2::ff();
        if (eat("(")) {
            int v = variable();
            if (!eat(")")) throw ParseError("expected ')'", i_);
            return fo2::letter(w, v);
        }
        if (w != "x" && w != "y") throw ParseError("expected a predicate or a variable", at);
        int a = w == "x" ? 0 : 1;
        FoKind k;
        if (eat("~+1=")) k = FoKind::ClassSucc;
        else if (eat("+1=")) k = FoKind::Succ;
        else if (eat("<~")) k = FoKind::ClassLess;
        else if (eat("<")) k = FoKind::Less;
        else if (eat("=")) k = FoKind::Eq;
        else if (eat("~")) k = FoKind::Sim;
        else throw ParseError("expected a relation", i_);
        return fo2::rel(k, a, variable());
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace

Fo2 parseFo2(const std::string& text) { return Fo2Parser(text).run(); }

std::string print(const Fo2& f) {
    switch (f->kind) {
        case FoKind::True: return "true";
        case FoKind::False: return "false";
        case FoKind::Letter: return f->letter + "(" + varName(f->a) + ")";
        case FoKind::Not: return "!" + print(f->kids[0]);
        case FoKind::And: return "(" + print(f->kids[0]) + " & " + print(f->kids[1]) + ")";
        case FoKind::Or: return "(" + print(f->kids[0]) + " | " + print(f->kids[1]) + ")";
        case FoKind::Exists:
        case FoKind::Forall:
            return std::string("(") + (f->kind == FoKind::Exists ? "E " : "A ") + varName(f->a) + ". " +
                   print(f->kids[0]) + ")";
        default: return std::string(1, varName(f->a)) + relText(f->kind) + varName(f->b);
    }
}

namespace {
void freeInto(const Fo2& f, std::set<int>& out) {
    switch (f->kind) {
        case FoKind::True:
        case FoKind::False: return;
        case FoKind::Letter: out.insert(f->a); return;
        case FoKind::Not:
        case FoKind::And:
        case FoKind::Or:
            for (const auto& k : f->kids) freeInto(k, out);
            return;
        case FoKind::Exists:
        case FoKind::Forall: {
            std::set<int> in;
            freeInto(f->kids[0], in);
            in.erase(f->a);
            out.insert(in.begin(), in.end());
            return;
        }
        default:
            out.insert(f->a);
            out.insert(f->b);
    }
}
}  // namespace

std::vector<int> freeVariables(const Fo2& f) {
    std::set<int> s;
    freeInto(f, s);
    return {s.begin(), s.end()};
}

std::size_t quantifierDepth(const Fo2& f) {
    std::size_t d = 0;
    for (const auto& k : f->kids) d = std::max(d, quantifierDepth(k));
    return d + (f->kind == FoKind::Exists || f->kind == FoKind::Forall ? 1 : 0);
}

std::size_t size(const Fo2& f) {
    std::size_t n = 1;
    for (const auto& k : f->kids) n += size(k);
    return n;
}

// ---------------------------------------------------------------- semantics

namespace {

class Fo2Eval {
public:
    explicit Fo2Eval(const DataWord& w) : w_(w), ws_(w) {}

    // 0-based positions, -1 unbound.
    bool run(const Fo2& f, std::array<int, 2> as) {
        auto pos = [&](int v) {
            if (as[v] < 0) throw InputError(std::string("fo2: unbound variable ") + varName(v));
            return as[v];
        };
        switch (f->kind) {
            case FoKind::True: return true;
            case FoKind::False: return false;
            case FoKind::Letter: return w_.letter(pos(f->a) + 1) == f->letter;
            case FoKind::Not: return !run(f->kids[0], as);
            case FoKind::And: return run(f->kids[0], as) && run(f->kids[1], as);
            case FoKind::Or: return run(f->kids[0], as) || run(f->kids[1], as);
            case FoKind::Exists:
            case FoKind::Forall: {
                bool ex = f->kind == FoKind::Exists;
                for (int i = 0; i < static_cast<int>(ws_.n); ++i) {
                    auto b = as;
                    b[f->a] = i;
                    if (run(f->kids[0], b) == ex) return ex;
                }
                return !ex;
            }
            default: break;
        }
        int i = pos(f->a), j = pos(f->b);
        bool same = ws_.classId[i] == ws_.classId[j];
        switch (f->kind) {
            case FoKind::Eq: return i == j;
            case FoKind::Less: return i < j;
            case FoKind::Succ: return i + 1 == j;
            case FoKind::ClassSucc: return ws_.csucc[i] == j;
            case FoKind::ClassLess: return same && i < j;
            case FoKind::Sim: return same;
            default: return false;
        }
    }

private:
    const DataWord& w_;
    WordStructure ws_;
};

}  // namespace

bool evalFo2(const DataWord& w, const Fo2& f, const Fo2Assignment& a) {
    auto conv = [&](const std::optional<std::size_t>& p) {
        if (!p) return -1;
        if (*p < 1 || *p > w.size()) throw InputError("fo2: assigned position out of range");
        return static_cast<int>(*p - 1);
    };
    return Fo2Eval(w).run(f, {conv(a.x), conv(a.y)});
}

// ---------------------------------------------------------------- FO2 to unary DLTL

namespace {

// Relative position of the quantified variable u to the current one v.
enum class Order {
    Same,
    NextClass,     // u = v+1, same class
    NextOther,     // u = v+1, other class
    FarClassNext,  // u > v+1, u class successor of v
    FarClassLater, // u class-later, not the class successor
    FarOther,      // u > v+1, other class
    PrevClass,
    PrevOther,
    FarClassPrev,
    FarClassEarlier,
    DeepOther
};
constexpr int kOrders = 11;

// Truth of rel(k, v, u) under an order type; rel(k, u, v) is the mirrored type.
bool holdsVU(FoKind k, Order t) {
    bool same = t == Order::Same, classNext = t == Order::NextClass || t == Order::FarClassNext;
    bool later = t == Order::NextClass || t == Order::NextOther || t == Order::FarClassNext ||
                 t == Order::FarClassLater || t == Order::FarOther;
    bool sim = same || t == Order::NextClass || t == Order::FarClassNext || t == Order::FarClassLater ||
               t == Order::PrevClass || t == Order::FarClassPrev || t == Order::FarClassEarlier;
    switch (k) {
        case FoKind::Eq: return same;
        case FoKind::Sim: return sim;
        case FoKind::Less: return later;
        case FoKind::Succ: return t == Order::NextClass || t == Order::NextOther;
        case FoKind::ClassSucc: return classNext;
        case FoKind::ClassLess: return later && sim;
        default: return false;
    }
}

Order mirrored(Order t) {
    int k = static_cast<int>(t);
    return k == 0 ? t : static_cast<Order>(k <= 5 ? k + 5 : k - 5);
}

class ToUdltl {
public:
    Dltl run(const Fo2& f, int v) {
        using namespace dltl;
        switch (f->kind) {
            case FoKind::True: return tt();
            case FoKind::False: return ff();
            case FoKind::Letter: return dltl::prop(f->letter);
            case FoKind::Not: return neg(run(f->kids[0], v));
            case FoKind::And: return conj(run(f->kids[0], v), run(f->kids[1], v));
            case FoKind::Or: return disj(run(f->kids[0], v), run(f->kids[1], v));
            case FoKind::Forall: return neg(exists(f->a, fo2::neg(f->kids[0]), v));
            case FoKind::Exists: return exists(f->a, f->kids[0], v);
            default:
                // Both arguments are v here.
                return holdsVU(f->kind, Order::Same) ? tt() : ff();
        }
    }

private:
    Dltl exists(int u, const Fo2& body, int v) {
        using namespace dltl;
        if (u == v) return unary(DUnary::Pg, unary(DUnary::Fg, run(body, v)));
        std::vector<Fo2> vLeaves;
        std::map<const Fo2Node*, int> vIndex;
        std::map<const Fo2Node*, Dltl> uTrans;
        collect(body, v, u, vLeaves, vIndex, uTrans);
        if (vLeaves.size() > 16) throw InputError("fo2ToUdltl: too many x-only subformulas under one quantifier");
        std::vector<Dltl> vTrans;
        for (const auto& l : vLeaves) vTrans.push_back(run(l, v));
        Dltl r = ff();
        for (std::uint32_t sigma = 0; sigma < (1u << vLeaves.size()); ++sigma) {
            Dltl alts = ff();
            for (int t = 0; t < kOrders; ++t) {
                Dltl beta = reduce(body, v, static_cast<Order>(t), sigma, vIndex, uTrans);
                if (beta->kind == DKind::False) continue;
                alts = disj(alts, place(static_cast<Order>(t), beta));
            }
            if (alts->kind == DKind::False) continue;
            Dltl chi = tt();
            for (std::size_t j = 0; j < vLeaves.size(); ++j)
                chi = conj(chi, (sigma >> j) & 1 ? vTrans[j] : neg(vTrans[j]));
            r = disj(r, conj(chi, alts));
        }
        return r;
    }

    // Boolean structure down to: relations between v and u, v-only and u-only subformulas.
    void collect(const Fo2& f, int v, int u, std::vector<Fo2>& vLeaves, std::map<const Fo2Node*, int>& vIndex,
                 std::map<const Fo2Node*, Dltl>& uTrans) {
        if (f->kind == FoKind::Not || f->kind == FoKind::And || f->kind == FoKind::Or) {
            for (const auto& k : f->kids) collect(k, v, u, vLeaves, vIndex, uTrans);
            return;
        }
        if (f->kind == FoKind::True || f->kind == FoKind::False) return;
        if (isRelation(f->kind) && f->a != f->b) return;
        auto fv = freeVariables(f);
        if (fv.size() == 1 && fv[0] == u) {
            if (!uTrans.count(f.get())) uTrans.emplace(f.get(), run(f, u));
            return;
        }
        if (!vIndex.count(f.get())) {
            vIndex.emplace(f.get(), static_cast<int>(vLeaves.size()));
            vLeaves.push_back(f);
        }
    }

    Dltl reduce(const Fo2& f, int v, Order t, std::uint32_t sigma, const std::map<const Fo2Node*, int>& vIndex,
                const std::map<const Fo2Node*, Dltl>& uTrans) {
        using namespace dltl;
        switch (f->kind) {
            case FoKind::True: return tt();
            case FoKind::False: return ff();
            case FoKind::Not: return neg(reduce(f->kids[0], v, t, sigma, vIndex, uTrans));
            case FoKind::And: {
                Dltl a = reduce(f->kids[0], v, t, sigma, vIndex, uTrans);
                if (a->kind == DKind::False) return a;
                return conj(a, reduce(f->kids[1], v, t, sigma, vIndex, uTrans));
            }
            case FoKind::Or: {
                Dltl a = reduce(f->kids[0], v, t, sigma, vIndex, uTrans);
                if (a->kind == DKind::True) return a;
                return disj(a, reduce(f->kids[1], v, t, sigma, vIndex, uTrans));
            }
            default: break;
        }
        if (isRelation(f->kind) && f->a != f->b)
            return holdsVU(f->kind, f->a == v ? t : mirrored(t)) ? tt() : ff();
        auto vi = vIndex.find(f.get());
        if (vi != vIndex.end()) return (sigma >> vi->second) & 1 ? tt() : ff();
        return uTrans.at(f.get());
    }

    // Formula at v saying: the position u of order type t satisfies beta.
    static Dltl place(Order t, const Dltl& beta) {
        using namespace dltl;
        switch (t) {
            case Order::Same: return beta;
            case Order::NextClass: return conj(S(), unary(DUnary::Xc, beta));
            case Order::NextOther: return conj(neg(S()), unary(DUnary::Xg, beta));
            case Order::FarClassNext: return conj(neg(S()), unary(DUnary::Xc, beta));
            case Order::FarClassLater: return unary(DUnary::Xc, unary(DUnary::Xc, unary(DUnary::Fc, beta)));
            case Order::FarOther: return expandNotInClass(NotInClass::FarFuture, beta);
            case Order::PrevClass: return conj(P(), unary(DUnary::Yc, beta));
            case Order::PrevOther: return conj(neg(P()), unary(DUnary::Yg, beta));
            case Order::FarClassPrev: return conj(neg(P()), unary(DUnary::Yc, beta));
            case Order::FarClassEarlier: return unary(DUnary::Yc, unary(DUnary::Yc, unary(DUnary::Pc, beta)));
            case Order::DeepOther: return expandNotInClass(NotInClass::DeepPast, beta);
        }
        return ff();
    }
};

}  // namespace

Dltl fo2ToUdltl(const Fo2& f) {
    auto fv = freeVariables(f);
    if (fv.size() > 1 || (fv.size() == 1 && fv[0] != 0))
        throw InputError("fo2ToUdltl: free variables must be within {x}");
    return ToUdltl().run(f, 0);
}

// ---------------------------------------------------------------- unary DLTL to FO2

namespace {

Fo2 standard(const Dltl& f, int v) {
    using namespace fo2;
    int u = 1 - v;
    switch (f->kind) {
        case DKind::True: return tt();
        case DKind::False: return ff();
        case DKind::Prop: return letter(f->name, v);
        case DKind::S: return exists(u, conj(rel(FoKind::Succ, v, u), rel(FoKind::ClassSucc, v, u)));
        case DKind::P: return exists(u, conj(rel(FoKind::Succ, u, v), rel(FoKind::ClassSucc, u, v)));
        case DKind::Not: return neg(standard(f->kids[0], v));
        case DKind::And: return conj(standard(f->kids[0], v), standard(f->kids[1], v));
        case DKind::Or: return disj(standard(f->kids[0], v), standard(f->kids[1], v));
        case DKind::Unary: {
            Fo2 g;
            switch (f->unary) {
                case DUnary::Xg: g = rel(FoKind::Succ, v, u); break;
                case DUnary::Yg: g = rel(FoKind::Succ, u, v); break;
                case DUnary::Xc: g = rel(FoKind::ClassSucc, v, u); break;
                case DUnary::Yc: g = rel(FoKind::ClassSucc, u, v); break;
                case DUnary::Fg: g = disj(rel(FoKind::Eq, v, u), rel(FoKind::Less, v, u)); break;
                case DUnary::Pg: g = disj(rel(FoKind::Eq, v, u), rel(FoKind::Less, u, v)); break;
                case DUnary::Fc: g = disj(rel(FoKind::Eq, v, u), rel(FoKind::ClassLess, v, u)); break;
                case DUnary::Pc: g = disj(rel(FoKind::Eq, v, u), rel(FoKind::ClassLess, u, v)); break;
            }
            return exists(u, conj(g, standard(f->kids[0], u)));
        }
        case DKind::Binary: break;
    }
    throw InputError("udltlToFo2: until and since are outside the unary fragment");
}

}  // namespace

Fo2 udltlToFo2(const Dltl& f) {
    if (!isUnaryDltl(f)) throw InputError("udltlToFo2: until and since are outside the unary fragment");
    return standard(f, 0);
}

}  // namespace mudw
