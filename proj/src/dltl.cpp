#include "mudw/dltl.hpp"

#include <cctype>
#include <map>
#include <set>

namespace mudw {

namespace dltl {

namespace {
Dltl make(DltlNode n) { return std::make_shared<const DltlNode>(std::move(n)); }
}  // namespace

Dltl tt() { return make({DKind::True, "", DUnary::Xg, DBinary::Ug, {}}); }
Dltl ff() { return make({DKind::False, "", DUnary::Xg, DBinary::Ug, {}}); }
Dltl prop(const std::string& p) { return make({DKind::Prop, p, DUnary::Xg, DBinary::Ug, {}}); }
Dltl S() { return make({DKind::S, "", DUnary::Xg, DBinary::Ug, {}}); }
Dltl P() { return make({DKind::P, "", DUnary::Xg, DBinary::Ug, {}}); }

Dltl neg(Dltl a) {
    if (a->kind == DKind::True) return ff();
    if (a->kind == DKind::False) return tt();
    if (a->kind == DKind::Not) return a->kids[0];
    return make({DKind::Not, "", DUnary::Xg, DBinary::Ug, {std::move(a)}});
}

Dltl conj(Dltl a, Dltl b) {
    if (a->kind == DKind::False || b->kind == DKind::False) return ff();
    if (a->kind == DKind::True) return b;
    if (b->kind == DKind::True) return a;
    return make({DKind::And, "", DUnary::Xg, DBinary::Ug, {std::move(a), std::move(b)}});
}

Dltl disj(Dltl a, Dltl b) {
    if (a->kind == DKind::True || b->kind == DKind::True) return tt();
    if (a->kind == DKind::False) return b;
    if (b->kind == DKind::False) return a;
    return make({DKind::Or, "", DUnary::Xg, DBinary::Ug, {std::move(a), std::move(b)}});
}

Dltl unary(DUnary op, Dltl a) { return make({DKind::Unary, "", op, DBinary::Ug, {std::move(a)}}); }
Dltl binary(DBinary op, Dltl a, Dltl b) {
    return make({DKind::Binary, "", DUnary::Xg, op, {std::move(a), std::move(b)}});
}

}  // namespace dltl

const char* name(DUnary op) {
    switch (op) {
        case DUnary::Xg: return "Xg";
        case DUnary::Yg: return "Yg";
        case DUnary::Xc: return "Xc";
        case DUnary::Yc: return "Yc";
        case DUnary::Fg: return "Fg";
        case DUnary::Pg: return "Pg";
        case DUnary::Fc: return "Fc";
        case DUnary::Pc: return "Pc";
    }
    return "?";
}

const char* name(DBinary op) {
    switch (op) {
        case DBinary::Ug: return "Ug";
        case DBinary::Sg: return "Sg";
        case DBinary::Uc: return "Uc";
        case DBinary::Sc: return "Sc";
    }
    return "?";
}

const char* name(NotInClass k) {
    switch (k) {
        case NotInClass::FarFuture: return "fF";
        case NotInClass::DeepPast: return "dP";
        case NotInClass::Future: return "F";
        case NotInClass::Past: return "P";
    }
    return "?";
}

// ---------------------------------------------------------------- parsing

namespace {

const std::map<std::string, DUnary>& unaries() {
    static const std::map<std::string, DUnary> m{{"Xg", DUnary::Xg}, {"Yg", DUnary::Yg}, {"Xc", DUnary::Xc},
                                                 {"Yc", DUnary::Yc}, {"Fg", DUnary::Fg}, {"Pg", DUnary::Pg},
                                                 {"Fc", DUnary::Fc}, {"Pc", DUnary::Pc}};
    return m;
}
const std::map<std::string, DBinary>& binaries() {
    static const std::map<std::string, DBinary> m{
        {"Ug", DBinary::Ug}, {"Sg", DBinary::Sg}, {"Uc", DBinary::Uc}, {"Sc", DBinary::Sc}};
    return m;
}

class DltlParser {
public:
    explicit DltlParser(const std::string& s) : s_(s) {}

    Dltl run() {
        Dltl f = impl();
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
    std::string peekIdent() {
        skip();
        std::size_t j = i_;
        if (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j])))
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        return s_.substr(i_, j - i_);
    }

    Dltl impl() {
        Dltl l = until();
        if (eat("->")) return dltl::disj(dltl::neg(l), impl());
        return l;
    }
    Dltl until() {
        Dltl l = orExpr();
        std::string w = peekIdent();
        if (binaries().count(w)) {
            i_ += w.size();
            return dltl::binary(binaries().at(w), l, until());
        }
        return l;
    }
    Dltl orExpr() {
        Dltl l = andExpr();
        for (;;) {
            skip();
            if (i_ < s_.size() && s_[i_] == '|') {
                ++i_;
                l = dltl::disj(l, andExpr());
            } else {
                return l;
            }
        }
    }
    Dltl andExpr() {
        Dltl l = prefix();
        for (;;) {
            skip();
            if (i_ < s_.size() && s_[i_] == '&') {
                ++i_;
                l = dltl::conj(l, prefix());
            } else {
                return l;
            }
        }
    }
    Dltl prefix() {
        skip();
        if (i_ < s_.size() && s_[i_] == '!') {
            ++i_;
            return dltl::neg(prefix());
        }
        if (i_ < s_.size() && s_[i_] == '(') {
            ++i_;
            Dltl f = impl();
            if (!eat(")")) throw ParseError("expected ')'", i_);
            return f;
        }
        std::size_t at = i_;
        std::string w = peekIdent();
        if (w.empty()) throw ParseError("expected a formula", at);
        i_ += w.size();
        if (unaries().count(w)) return dltl::unary(unaries().at(w), prefix());
        if (binaries().count(w)) throw ParseError("binary modality without left operand", at);
        if (w == "true") return dltl::tt();
        if (w == "false") return dltl::ff();
        if (w == "S") return dltl::S();
        if (w == "P") return dltl::P();
        return dltl::prop(w);
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

}  // namespace

Dltl parseDltl(const std::string& text) { return DltlParser(text).run(); }

std::string print(const Dltl& f) {
    switch (f->kind) {
        case DKind::True: return "true";
        case DKind::False: return "false";
        case DKind::Prop: return f->name;
        case DKind::S: return "S";
        case DKind::P: return "P";
        case DKind::Not: return "!" + print(f->kids[0]);
        case DKind::And: return "(" + print(f->kids[0]) + " & " + print(f->kids[1]) + ")";
        case DKind::Or: return "(" + print(f->kids[0]) + " | " + print(f->kids[1]) + ")";
        case DKind::Unary: return std::string(name(f->unary)) + " " + print(f->kids[0]);
        case DKind::Binary:
            return "(" + print(f->kids[0]) + " " + name(f->binary) + " " + print(f->kids[1]) + ")";
    }
    return "?";
}

bool isUnaryDltl(const Dltl& f) {
    if (f->kind == DKind::Binary) return false;
    for (const auto& k : f->kids)
        if (!isUnaryDltl(k)) return false;
    return true;
}

std::size_t modalDepth(const Dltl& f) {
    std::size_t d = 0;
    for (const auto& k : f->kids) d = std::max(d, modalDepth(k));
    return d + (f->kind == DKind::Unary || f->kind == DKind::Binary ? 1 : 0);
}

std::size_t size(const Dltl& f) {
    std::size_t n = 1;
    for (const auto& k : f->kids) n += size(k);
    return n;
}

// ---------------------------------------------------------------- semantics

namespace {

class DltlEval {
public:
    DltlEval(const DataWord& w) : w_(w), ws_(w) {}

    std::vector<char> run(const Dltl& f) {
        auto it = memo_.find(f.get());
        if (it != memo_.end()) return it->second;
        std::size_t n = ws_.n;
        std::vector<char> r(n, 0);
        switch (f->kind) {
            case DKind::True: r.assign(n, 1); break;
            case DKind::False: break;
            case DKind::Prop:
                for (std::size_t i = 0; i < n; ++i) r[i] = w_.letter(i + 1) == f->name;
                break;
            case DKind::S:
                for (std::size_t i = 0; i < n; ++i) r[i] = ws_.types[i].succ;
                break;
            case DKind::P:
                for (std::size_t i = 0; i < n; ++i) r[i] = ws_.types[i].pred;
                break;
            case DKind::Not: {
                auto a = run(f->kids[0]);
                for (std::size_t i = 0; i < n; ++i) r[i] = !a[i];
                break;
            }
            case DKind::And:
            case DKind::Or: {
                auto a = run(f->kids[0]), b = run(f->kids[1]);
                for (std::size_t i = 0; i < n; ++i) r[i] = f->kind == DKind::And ? (a[i] && b[i]) : (a[i] || b[i]);
                break;
            }
            case DKind::Unary: {
                auto a = run(f->kids[0]);
                for (std::size_t i = 0; i < n; ++i) {
                    switch (f->unary) {
                        case DUnary::Xg: r[i] = i + 1 < n && a[i + 1]; break;
                        case DUnary::Yg: r[i] = i > 0 && a[i - 1]; break;
                        case DUnary::Xc: r[i] = ws_.csucc[i] >= 0 && a[ws_.csucc[i]]; break;
                        case DUnary::Yc: r[i] = ws_.cpred[i] >= 0 && a[ws_.cpred[i]]; break;
                        case DUnary::Fg:
                            for (std::size_t j = i; j < n && !r[i]; ++j) r[i] = a[j];
                            break;
                        case DUnary::Pg:
                            for (std::size_t j = 0; j <= i && !r[i]; ++j) r[i] = a[j];
                            break;
                        case DUnary::Fc:
                            for (int j = static_cast<int>(i); j >= 0 && !r[i]; j = ws_.csucc[j]) r[i] = a[j];
                            break;
                        case DUnary::Pc:
                            for (int j = static_cast<int>(i); j >= 0 && !r[i]; j = ws_.cpred[j]) r[i] = a[j];
                            break;
                    }
                }
                break;
            }
            case DKind::Binary: {
                auto a = run(f->kids[0]), b = run(f->kids[1]);
                bool cls = f->binary == DBinary::Uc || f->binary == DBinary::Sc;
                bool fut = f->binary == DBinary::Ug || f->binary == DBinary::Uc;
                for (std::size_t i = 0; i < n; ++i) {
                    // Walk until b holds, as long as a holds on the way.
                    int j = static_cast<int>(i);
                    while (j >= 0 && !b[j] && a[j]) {
                        if (cls) j = fut ? ws_.csucc[j] : ws_.cpred[j];
                        else j = fut ? (j + 1 < static_cast<int>(n) ? j + 1 : -1) : j - 1;
                    }
                    r[i] = j >= 0 && b[j];
                }
                break;
            }
        }
        memo_.emplace(f.get(), r);
        return r;
    }

private:
    const DataWord& w_;
    WordStructure ws_;
    std::map<const DltlNode*, std::vector<char>> memo_;
};

}  // namespace

PositionSet evalDltl(const DataWord& w, const Dltl& f) {
    DltlEval e(w);
    auto r = e.run(f);
    PositionSet s(w.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i]) s.set(i);
    return s;
}

// ---------------------------------------------------------------- to the mu-calculus

namespace {

void collectProps(const Dltl& f, std::set<std::string>& out) {
    if (f->kind == DKind::Prop) out.insert(f->name);
    for (const auto& k : f->kids) collectProps(k, out);
}

class ToMu {
public:
    explicit ToMu(std::set<std::string> used) : used_(std::move(used)) {}

    Formula run(const Dltl& f) {
        switch (f->kind) {
            case DKind::True: return mkTrue();
            case DKind::False: return mkFalse();
            case DKind::Prop: return prop(f->name);
            case DKind::S: return zero(Zero::S);
            case DKind::P: return zero(Zero::P);
            case DKind::Not: return dualize(run(f->kids[0]));
            case DKind::And: return conj(run(f->kids[0]), run(f->kids[1]));
            case DKind::Or: return disj(run(f->kids[0]), run(f->kids[1]));
            case DKind::Unary: {
                Formula a = run(f->kids[0]);
                switch (f->unary) {
                    case DUnary::Xg: return mod(Mod::Xg, a);
                    case DUnary::Yg: return mod(Mod::Yg, a);
                    case DUnary::Xc: return mod(Mod::Xc, a);
                    case DUnary::Yc: return mod(Mod::Yc, a);
                    case DUnary::Fg: return reach(a, Mod::Xg);
                    case DUnary::Pg: return reach(a, Mod::Yg);
                    case DUnary::Fc: return reach(a, Mod::Xc);
                    case DUnary::Pc: return reach(a, Mod::Yc);
                }
                break;
            }
            case DKind::Binary: {
                Formula a = run(f->kids[0]), b = run(f->kids[1]);
                Mod m = f->binary == DBinary::Ug ? Mod::Xg
                        : f->binary == DBinary::Sg ? Mod::Yg
                        : f->binary == DBinary::Uc ? Mod::Xc
                                                   : Mod::Yc;
                std::string x = fresh();
                return mu(x, disj(b, conj(a, mod(m, var(x)))));
            }
        }
        throw InputError("dltlToMu: unknown node");
    }

private:
    // mu x. a | M x
    Formula reach(const Formula& a, Mod m) {
        std::string x = fresh();
        return mu(x, disj(a, mod(m, var(x))));
    }
    std::string fresh() {
        std::string x = freshName(used_, "x");
        used_.insert(x);
        return x;
    }
    std::set<std::string> used_;
};

}  // namespace

Formula dltlToMu(const Dltl& f) {
    std::set<std::string> ps;
    collectProps(f, ps);
    return ToMu(ps).run(f);
}

// ---------------------------------------------------------------- not-in-class modalities

Dltl expandNotInClass(NotInClass kind, const Dltl& f) {
    using namespace dltl;
    bool future = kind == NotInClass::FarFuture || kind == NotInClass::Future;
    DUnary next = future ? DUnary::Xg : DUnary::Yg, ev = future ? DUnary::Fg : DUnary::Pg,
           evc = future ? DUnary::Fc : DUnary::Pc;
    // The last (first) position where f holds; the strict step keeps it satisfiable.
    Dltl extreme = conj(f, neg(unary(next, unary(ev, f))));
    auto skip2 = [&](Dltl g) { return unary(next, unary(next, unary(ev, g))); };
    Dltl notMine = neg(unary(evc, extreme));
    // Either the extreme position is beyond i+1 (i-1) and outside i's class, or it is in
    // i's class and some far f position lies outside that class.
    Dltl far = disj(conj(skip2(extreme), notMine), conj(unary(evc, extreme), skip2(conj(f, notMine))));
    if (kind == NotInClass::FarFuture || kind == NotInClass::DeepPast) return far;
    Dltl adjacent = conj(neg(future ? S() : P()), unary(next, f));
    return disj(adjacent, far);
}

}  // namespace mudw
