#include <cctype>
#include <map>
#include <set>

#include "mudw/formula.hpp"

namespace mudw {

namespace {

enum class Tok { Ident, Not, And, Or, LPar, RPar, Dot, Tilde, End };

struct Token {
    Tok t;
    std::string text;
    std::size_t pos;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), i});
            i = j;
            continue;
        }
        Tok t;
        switch (c) {
            case '!': t = Tok::Not; break;
            case '&': t = Tok::And; break;
            case '|': t = Tok::Or; break;
            case '(': t = Tok::LPar; break;
            case ')': t = Tok::RPar; break;
            case '.': t = Tok::Dot; break;
            case '~': t = Tok::Tilde; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", i);
        }
        out.push_back({t, std::string(1, c), i});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

const std::map<std::string, Mod>& mods() {
    static const std::map<std::string, Mod> m{{"Xg", Mod::Xg}, {"Xc", Mod::Xc}, {"Yg", Mod::Yg}, {"Yc", Mod::Yc}};
    return m;
}
const std::map<std::string, Sugar>& sugars() {
    static const std::map<std::string, Sugar> m{{"Fg", Sugar::Fg}, {"Fc", Sugar::Fc}, {"Gg", Sugar::Gg},
                                                {"Gc", Sugar::Gc}, {"Pg", Sugar::Pg}, {"Pc", Sugar::Pc},
                                                {"Hg", Sugar::Hg}, {"Hc", Sugar::Hc}};
    return m;
}
const std::map<std::string, Until>& untils() {
    static const std::map<std::string, Until> m{{"Ug", Until::Ug}, {"Uc", Until::Uc}, {"Sg", Until::Sg}, {"Sc", Until::Sc}};
    return m;
}
const std::map<std::string, std::pair<Zero, bool>>& zeros() {
    static const std::map<std::string, std::pair<Zero, bool>> m{
        {"S", {Zero::S, false}},          {"P", {Zero::P, false}},           {"nS", {Zero::S, true}},
        {"nP", {Zero::P, true}},          {"firstg", {Zero::FirstG, false}}, {"firstc", {Zero::FirstC, false}},
        {"lastg", {Zero::LastG, false}},  {"lastc", {Zero::LastC, false}}};
    return m;
}

bool reserved(const std::string& w) {
    return w == "true" || w == "false" || w == "mu" || w == "nu" || mods().count(w) || sugars().count(w) ||
           untils().count(w) || zeros().count(w);
}

class Parser {
public:
    Parser(const std::string& text, const std::set<std::string>& freeVarNames)
        : toks_(lex(text)), freeVars_(freeVarNames) {
        for (const auto& t : toks_)
            if (t.t == Tok::Ident) used_.insert(t.text);
    }

    Formula run() {
        Formula f = untilExpr();
        if (peek().t != Tok::End) throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
        return f;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    Token take() { return toks_[i_++]; }
    void expect(Tok t, const char* what) {
        if (peek().t != t) throw ParseError(std::string("expected ") + what, peek().pos);
        ++i_;
    }

    Formula untilExpr() {
        Formula l = orExpr();
        if (peek().t == Tok::Ident && untils().count(peek().text)) {
            Until u = untils().at(take().text);
            Formula r = untilExpr();
            return until(u, l, r);
        }
        return l;
    }

    Formula orExpr() {
        Formula l = andExpr();
        while (peek().t == Tok::Or) {
            take();
            l = disj(l, andExpr());
        }
        return l;
    }

    Formula andExpr() {
        Formula l = prefix();
        while (peek().t == Tok::And) {
            take();
            l = conj(l, prefix());
        }
        return l;
    }

    Formula prefix() {
        const Token& t = peek();
        if (t.t == Tok::Tilde) {
            take();
            const Token& m = peek();
            if (m.t != Tok::Ident || !mods().count(m.text)) throw ParseError("expected modality after '~'", m.pos);
            Mod md = mods().at(take().text);
            return tilde(md, prefix());
        }
        if (t.t == Tok::Ident) {
            if (mods().count(t.text)) {
                Mod md = mods().at(take().text);
                return mod(md, prefix());
            }
            if (sugars().count(t.text)) {
                Sugar s = sugars().at(take().text);
                return sugar(s, prefix());
            }
            if (t.text == "mu" || t.text == "nu") {
                Kind k = take().text == "mu" ? Kind::Mu : Kind::Nu;
                const Token& v = peek();
                if (v.t != Tok::Ident || reserved(v.text)) throw ParseError("expected variable name", v.pos);
                std::string name = take().text;
                expect(Tok::Dot, "'.'");
                std::string unique = name;
                if (bound_.count(name)) {
                    std::set<std::string> taken = used_;
                    taken.insert(bound_.begin(), bound_.end());
                    unique = freshName(taken, name);
                }
                bound_.insert(unique);
                used_.insert(unique);
                scope_.emplace_back(name, unique);
                Formula body = untilExpr();
                scope_.pop_back();
                return binder(k, unique, body);
            }
        }
        return negation();
    }

    Formula negation() {
        if (peek().t == Tok::Not) {
            std::size_t pos = take().pos;
            const Token& a = peek();
            if (a.t != Tok::Ident) throw ParseError("negation applies to atoms only", pos);
            std::string w = take().text;
            if (w == "true") return mkFalse();
            if (w == "false") return mkTrue();
            if (auto z = zeros().find(w); z != zeros().end()) return zero(z->second.first, !z->second.second);
            if (reserved(w)) throw ParseError("negation applies to atoms only", pos);
            if (lookup(w) || freeVars_.count(w)) throw ParseError("negated fixpoint variable '" + w + "'", pos);
            return nprop(w);
        }
        return atom();
    }

    const std::string* lookup(const std::string& w) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
            if (it->first == w) return &it->second;
        return nullptr;
    }

    Formula atom() {
        const Token& t = peek();
        if (t.t == Tok::LPar) {
            take();
            Formula f = untilExpr();
            expect(Tok::RPar, "')'");
            return f;
        }
        if (t.t != Tok::Ident) throw ParseError("expected formula", t.pos);
        std::string w = take().text;
        if (w == "true") return mkTrue();
        if (w == "false") return mkFalse();
        if (auto z = zeros().find(w); z != zeros().end()) return zero(z->second.first, z->second.second);
        if (reserved(w)) throw ParseError("unexpected keyword '" + w + "'", t.pos);
        if (const std::string* v = lookup(w)) return var(*v);
        if (freeVars_.count(w)) return var(w);
        return prop(w);
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    std::set<std::string> freeVars_;
    std::set<std::string> used_;
    std::set<std::string> bound_;
    std::vector<std::pair<std::string, std::string>> scope_;
};

}  // namespace

Formula parse(const std::string& text) { return Parser(text, {}).run(); }

Formula parseWithVars(const std::string& text, const std::set<std::string>& freeVarNames) {
    return Parser(text, freeVarNames).run();
}

}  // namespace mudw
