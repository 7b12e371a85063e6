#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mudw/cascades.hpp"
#include "mudw/data_automata.hpp"
#include "mudw/dltl.hpp"
#include "mudw/formula.hpp"
#include "mudw/fragments.hpp"

namespace mudw {

// Membership over data words. Formula-like acceptors read position 1, so the empty word is
// rejected by all of them.
struct Acceptor {
    std::string name;
    std::function<bool(const DataWord&)> accepts;
};

Acceptor formulaAcceptor(const Formula& f);
Acceptor automatonAcceptor(const DataAutomaton& a);
Acceptor cascadeAcceptor(const Cascade& c);
Acceptor dltlAcceptor(const Dltl& f);
// x := 1.
Acceptor fo2Acceptor(const Fo2& f);

struct Counterexample {
    DataWord word;
    bool lhs = false, rhs = false;
};

struct EquivalenceResult {
    std::optional<Counterexample> counterexample;
    std::size_t visited = 0;
};

// Exhaustive over all words of length 0..maxLen in enumeration order; stops at the first
// disagreement.
EquivalenceResult equivalenceCheck(const Acceptor& a, const Acceptor& b, const std::vector<Letter>& alphabet,
                                   std::size_t maxLen);

// First word, in enumeration order, not longer than c.word on which a and b disagree.
// An empty alphabet means the letters of c.word.
Counterexample shrink(const Counterexample& c, const Acceptor& a, const Acceptor& b,
                      std::vector<Letter> alphabet = {});

// First accepted word up to maxLen, in enumeration order.
std::optional<DataWord> boundedSatisfy(const Acceptor& a, const std::vector<Letter>& alphabet, std::size_t maxLen);

enum class FragmentKind { Any, NuOnly, MuOnly, BR, BMA, Pure };
struct FragmentSpec {
    FragmentKind kind = FragmentKind::Any;
    LayerKind pure = LayerKind::Future;  // for Pure
};
const char* name(FragmentKind k);
// Accepts any, nuOnly, muOnly, BR, BMA and pure:future|past|global|class.
FragmentSpec parseFragment(const std::string& text);

// Sentence over the letters of nesting depth at most depth, in the requested fragment.
// Identical arguments give identical formulas.
Formula randomFormula(const FragmentSpec& fragment, std::size_t depth, std::uint64_t seed,
                      const std::vector<Letter>& letters = {"a", "b"});
bool inFragment(const Formula& f, const FragmentSpec& fragment);

}  // namespace mudw
