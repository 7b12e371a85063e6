#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mudw/dataword.hpp"
#include "mudw/evaluator.hpp"
#include "mudw/formula.hpp"

namespace mudw {

// ---------------------------------------------------------------- Data-LTL

// X/Y strict next/previous; F/P reflexive future/past; U/S reflexive until/since.
enum class DUnary { Xg, Yg, Xc, Yc, Fg, Pg, Fc, Pc };
enum class DBinary { Ug, Sg, Uc, Sc };
enum class DKind { True, False, Prop, S, P, Not, And, Or, Unary, Binary };

struct DltlNode;
using Dltl = std::shared_ptr<const DltlNode>;

struct DltlNode {
    DKind kind;
    std::string name;  // proposition
    DUnary unary = DUnary::Xg;
    DBinary binary = DBinary::Ug;
    std::vector<Dltl> kids;
};

namespace dltl {
Dltl tt();
Dltl ff();
Dltl prop(const std::string& p);
Dltl S();
Dltl P();
// These fold true/false and double negation.
Dltl neg(Dltl a);
Dltl conj(Dltl a, Dltl b);
Dltl disj(Dltl a, Dltl b);
Dltl unary(DUnary op, Dltl a);
Dltl binary(DBinary op, Dltl a, Dltl b);
}  // namespace dltl

const char* name(DUnary op);
const char* name(DBinary op);

// Syntax: letters, S, P, true, false, prefix Xg Yg Xc Yc Fg Pg Fc Pc and !, then &, |,
// infix Ug Sg Uc Sc, then -> (both right associative), as in the formula grammar.
Dltl parseDltl(const std::string& text);
std::string print(const Dltl& f);

// No until/since.
bool isUnaryDltl(const Dltl& f);
std::size_t modalDepth(const Dltl& f);
std::size_t size(const Dltl& f);

// Direct semantics by recursion over positions.
PositionSet evalDltl(const DataWord& w, const Dltl& f);

// Mu-calculus sentence with the same semantics; negation pushed with dualize.
Formula dltlToMu(const Dltl& f);

// fF: far future not in class (j > i+1), dP: deep past not in class (j < i-1), F and P
// without the distance condition.
enum class NotInClass { FarFuture, DeepPast, Future, Past };
const char* name(NotInClass k);
// Unary-DLTL formula for the modality applied to f, valid on finite data words.
Dltl expandNotInClass(NotInClass kind, const Dltl& f);

// ---------------------------------------------------------------- FO2

// Two variables, 0 = x and 1 = y.
enum class FoKind { True, False, Letter, Eq, Less, Succ, ClassSucc, ClassLess, Sim, Not, And, Or, Exists, Forall };

struct Fo2Node;
using Fo2 = std::shared_ptr<const Fo2Node>;

struct Fo2Node {
    FoKind kind;
    std::string letter;
    int a = 0, b = 1;  // variables of the atom, or the bound variable in a
    std::vector<Fo2> kids;
};

namespace fo2 {
Fo2 tt();
Fo2 ff();
Fo2 letter(const std::string& l, int v);
// Relation atoms, read as rel(a, b): a=b, a<b, a+1=b, a+c1=b, a<c b, a~b.
Fo2 rel(FoKind k, int a, int b);
Fo2 neg(Fo2 f);
Fo2 conj(Fo2 a, Fo2 b);
Fo2 disj(Fo2 a, Fo2 b);
Fo2 exists(int v, Fo2 f);
Fo2 forall(int v, Fo2 f);
}  // namespace fo2

// Syntax: E y. phi, A y. phi, a(y), x=y, x<y, x+1=y, x~+1=y, x<~y, x~y, true, false,
// & | ! -> and parentheses. Quantifiers extend as far right as possible.
Fo2 parseFo2(const std::string& text);
std::string print(const Fo2& f);

std::vector<int> freeVariables(const Fo2& f);
std::size_t quantifierDepth(const Fo2& f);
std::size_t size(const Fo2& f);

// Positions are 1-based; an unset entry is unbound.
struct Fo2Assignment {
    std::optional<std::size_t> x, y;
};
bool evalFo2(const DataWord& w, const Fo2& f, const Fo2Assignment& a);

// Free variables must be within {x}. Semantics at x = i equals the result at position i.
Dltl fo2ToUdltl(const Fo2& f);
// Standard translation; the result has x free. Unary fragment only.
Fo2 udltlToFo2(const Dltl& f);

}  // namespace mudw
