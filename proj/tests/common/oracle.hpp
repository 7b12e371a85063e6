#pragma once

// Clause-by-clause semantics over explicit position sets, written without the library
// evaluator, WordStructure or desugar. Used as the reference in tests.

#include <map>
#include <set>
#include <string>

#include "mudw/dataword.hpp"
#include "mudw/formula.hpp"

namespace oracle {

using Set = std::set<std::size_t>;  // 1-based
using Env = std::map<std::string, Set>;

inline long nextInClass(const mudw::DataWord& w, std::size_t i) {
    for (std::size_t j = i + 1; j <= w.size(); ++j)
        if (w.value(j) == w.value(i)) return static_cast<long>(j);
    return 0;
}

inline long prevInClass(const mudw::DataWord& w, std::size_t i) {
    for (std::size_t j = i - 1; j >= 1; --j)
        if (w.value(j) == w.value(i)) return static_cast<long>(j);
    return 0;
}

inline long target(const mudw::DataWord& w, mudw::Mod m, std::size_t i) {
    switch (m) {
        case mudw::Mod::Xg: return i < w.size() ? static_cast<long>(i) + 1 : 0;
        case mudw::Mod::Yg: return i > 1 ? static_cast<long>(i) - 1 : 0;
        case mudw::Mod::Xc: return nextInClass(w, i);
        case mudw::Mod::Yc: return prevInClass(w, i);
    }
    return 0;
}

inline bool zeroHolds(const mudw::DataWord& w, mudw::Zero z, std::size_t i) {
    switch (z) {
        case mudw::Zero::S: return i < w.size() && nextInClass(w, i) == static_cast<long>(i) + 1;
        case mudw::Zero::P: return i > 1 && prevInClass(w, i) == static_cast<long>(i) - 1;
        case mudw::Zero::FirstG: return i == 1;
        case mudw::Zero::LastG: return i == w.size();
        case mudw::Zero::FirstC: return prevInClass(w, i) == 0;
        case mudw::Zero::LastC: return nextInClass(w, i) == 0;
    }
    return false;
}

inline Set all(const mudw::DataWord& w) {
    Set s;
    for (std::size_t i = 1; i <= w.size(); ++i) s.insert(i);
    return s;
}

inline Set eval(const mudw::DataWord& w, const mudw::Formula& f, Env env = {}) {
    using mudw::Kind;
    Set out;
    std::size_t n = w.size();
    switch (f->kind) {
        case Kind::True: return all(w);
        case Kind::False: return out;
        case Kind::Prop:
            for (std::size_t i = 1; i <= n; ++i)
                if (w.letter(i) == f->name) out.insert(i);
            return out;
        case Kind::NProp:
            for (std::size_t i = 1; i <= n; ++i)
                if (w.letter(i) != f->name) out.insert(i);
            return out;
        case Kind::Zero:
        case Kind::NZero:
            for (std::size_t i = 1; i <= n; ++i)
                if (zeroHolds(w, f->zero, i) == (f->kind == Kind::Zero)) out.insert(i);
            return out;
        case Kind::Var: return env.at(f->name);
        case Kind::And: {
            Set a = oracle::eval(w, f->kids[0], env), b = oracle::eval(w, f->kids[1], env);
            for (auto i : a)
                if (b.count(i)) out.insert(i);
            return out;
        }
        case Kind::Or: {
            out = oracle::eval(w, f->kids[0], env);
            Set b = oracle::eval(w, f->kids[1], env);
            out.insert(b.begin(), b.end());
            return out;
        }
        case Kind::Mod:
        case Kind::Tilde: {
            Set a = oracle::eval(w, f->kids[0], env);
            for (std::size_t i = 1; i <= n; ++i) {
                long t = target(w, f->mod, i);
                if (t ? a.count(static_cast<std::size_t>(t)) > 0 : f->kind == Kind::Tilde) out.insert(i);
            }
            return out;
        }
        case Kind::Mu:
        case Kind::Nu: {
            // Knaster-Tarski: intersection of prefixpoints / union of postfixpoints, by subsets.
            Set res = f->kind == Kind::Mu ? all(w) : Set{};
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                Set s;
                for (std::size_t i = 0; i < n; ++i)
                    if (mask >> i & 1) s.insert(i + 1);
                env[f->name] = s;
                Set img = oracle::eval(w, f->kids[0], env);
                bool pre = true, post = true;
                for (auto i : img)
                    if (!s.count(i)) pre = false;
                for (auto i : s)
                    if (!img.count(i)) post = false;
                if (f->kind == Kind::Mu && pre) {
                    Set r;
                    for (auto i : res)
                        if (s.count(i)) r.insert(i);
                    res = r;
                }
                if (f->kind == Kind::Nu && post) res.insert(s.begin(), s.end());
            }
            return res;
        }
        case Kind::Unary: {
            Set a = oracle::eval(w, f->kids[0], env);
            using mudw::Sugar;
            mudw::Mod m = mudw::Mod::Xg;
            bool box = false;
            switch (f->sugar) {
                case Sugar::Fg: m = mudw::Mod::Xg; break;
                case Sugar::Fc: m = mudw::Mod::Xc; break;
                case Sugar::Pg: m = mudw::Mod::Yg; break;
                case Sugar::Pc: m = mudw::Mod::Yc; break;
                case Sugar::Gg: m = mudw::Mod::Xg; box = true; break;
                case Sugar::Gc: m = mudw::Mod::Xc; box = true; break;
                case Sugar::Hg: m = mudw::Mod::Yg; box = true; break;
                case Sugar::Hc: m = mudw::Mod::Yc; box = true; break;
            }
            for (std::size_t i = 1; i <= n; ++i) {
                bool any = false, every = true;
                for (long j = static_cast<long>(i); j; j = target(w, m, static_cast<std::size_t>(j))) {
                    bool in = a.count(static_cast<std::size_t>(j)) > 0;
                    any = any || in;
                    every = every && in;
                }
                if (box ? every : any) out.insert(i);
            }
            return out;
        }
        case Kind::Binary: {
            Set a = oracle::eval(w, f->kids[0], env), b = oracle::eval(w, f->kids[1], env);
            using mudw::Until;
            mudw::Mod m = f->until == Until::Ug   ? mudw::Mod::Xg
                          : f->until == Until::Uc ? mudw::Mod::Xc
                          : f->until == Until::Sg ? mudw::Mod::Yg
                                                  : mudw::Mod::Yc;
            for (std::size_t i = 1; i <= n; ++i) {
                for (long j = static_cast<long>(i); j; j = target(w, m, static_cast<std::size_t>(j))) {
                    if (b.count(static_cast<std::size_t>(j))) {
                        out.insert(i);
                        break;
                    }
                    if (!a.count(static_cast<std::size_t>(j))) break;
                }
            }
            return out;
        }
    }
    return out;
}

inline bool models(const mudw::DataWord& w, const mudw::Formula& f) {
    return w.size() >= 1 && oracle::eval(w, f).count(1) > 0;
}

}  // namespace oracle
