#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mudw/dataword.hpp"

namespace mudw {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

enum class Mod { Xg, Xc, Yg, Yc };
enum class Zero { S, P, FirstG, FirstC, LastG, LastC };
// Reflexive unary sugar.
enum class Sugar { Fg, Fc, Gg, Gc, Pg, Pc, Hg, Hc };
enum class Until { Ug, Uc, Sg, Sc };

enum class Kind {
    True, False,
    Prop, NProp,      // letter test / letter differs
    Zero, NZero,      // zeroary modality / its negation
    Var,
    And, Or,
    Mod,              // X^g, X^c, Y^g, Y^c
    Tilde,            // dual modality, kept until desugar
    Mu, Nu,
    Unary,            // F, G, P, H sugar
    Binary,           // until/since sugar
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Kind kind;
    std::string name;  // proposition, variable or binder name
    Mod mod = Mod::Xg;
    Zero zero = Zero::S;
    Sugar sugar = Sugar::Fg;
    Until until = Until::Ug;
    std::vector<Formula> kids;
    std::vector<std::string> free;  // sorted free fixpoint variables
    std::size_t size = 1;
    std::size_t hash = 0;
};

// Constructors. Binary ones do not simplify; the *S variants drop true/false units.
Formula mkTrue();
Formula mkFalse();
Formula prop(const std::string& p);
Formula nprop(const std::string& p);
Formula zero(Zero z, bool negated = false);
Formula var(const std::string& x);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula andS(Formula a, Formula b);
Formula orS(Formula a, Formula b);
Formula andAll(const std::vector<Formula>& fs);
Formula orAll(const std::vector<Formula>& fs);
Formula mod(Mod m, Formula f);
Formula tilde(Mod m, Formula f);
Formula mu(const std::string& x, Formula body);
Formula nu(const std::string& x, Formula body);
Formula binder(Kind k, const std::string& x, Formula body);
Formula sugar(Sugar s, Formula f);
Formula until(Until u, Formula a, Formula b);

bool isGlobal(Mod m);
bool isFuture(Mod m);
Mod mirror(Mod m);
Zero mirror(Zero z);
const char* modName(Mod m);
const char* zeroName(Zero z);

const std::vector<std::string>& freeVars(const Formula& f);
bool isSentence(const Formula& f);
bool isCore(const Formula& f);      // no Tilde / Unary / Binary nodes
bool hasSugar(const Formula& f);    // Unary / Binary nodes present
std::set<std::string> allNames(const Formula& f);
std::set<std::string> propositions(const Formula& f);
std::set<std::string> boundVars(const Formula& f);
std::string freshName(const std::set<std::string>& used, const std::string& base);

bool structurallyEqual(const Formula& a, const Formula& b);
bool alphaEqual(const Formula& a, const Formula& b);

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f->hash; }
};
struct FormulaEq {
    bool operator()(const Formula& a, const Formula& b) const { return structurallyEqual(a, b); }
};

// Capture-avoiding simultaneous substitution of free variables.
Formula substitute(const Formula& f, const std::map<std::string, Formula>& s);

// Text form; reparses to an alpha-equivalent formula.
std::string print(const Formula& f);
// Identifiers bound by mu/nu are variables, others letters. Rebound names are renamed apart.
Formula parse(const std::string& text);
// Like parse, but identifiers in `freeVarNames` that are not bound become free variables.
Formula parseWithVars(const std::string& text, const std::set<std::string>& freeVarNames);

Formula desugar(const Formula& f);
// Expands only the tilde modalities, leaving other sugar alone.
Formula expandTilde(const Formula& f);
// Expands F/G/P/H and until/since but keeps tilde nodes.
Formula desugarKeepTilde(const Formula& f);
// Negation normal form of the complement. Free variables are an input error.
Formula dualize(const Formula& f);
// Swaps future and past: X<->Y, first<->last, S<->P. Semantics on the reversed word.
Formula mirror(const Formula& f);

// Every bound variable occurs under at least one modality within its binder.
bool isGuarded(const Formula& f);
Formula toGuarded(const Formula& f);

// Alpha-renames binders so that all bound names are distinct and differ from free names.
Formula renameBoundApart(const Formula& f);

// Replaces every mu binder by nu (or the converse).
Formula swapFixpoints(const Formula& f, Kind from, Kind to);

std::size_t modalDepth(const Formula& f);
std::size_t fixpointDepth(const Formula& f);

struct VectorialFormula {
    Kind binder = Kind::Nu;  // Mu or Nu, shared by all components
    std::vector<std::string> vars;
    std::vector<Formula> bodies;
};

// Scalar formula denoting the named component of the simultaneous fixpoint.
Formula bekic(const VectorialFormula& v, const std::string& component);

}  // namespace mudw
