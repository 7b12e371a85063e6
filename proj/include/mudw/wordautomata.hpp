#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mudw/formula.hpp"

namespace mudw {

// Finite automaton over symbols 0..numSymbols-1. States are 0..size()-1.
struct Nfa {
    int numSymbols = 0;
    std::vector<std::vector<std::pair<int, int>>> delta;  // per state: (symbol, target)
    std::vector<int> initial;
    std::vector<char> final;

    explicit Nfa(int symbols = 0) : numSymbols(symbols) {}
    int size() const { return static_cast<int>(delta.size()); }
    int addState(bool isFinal = false);
    void addTransition(int src, int sym, int dst);
    bool accepts(const std::vector<int>& word) const;
    bool isDeterministic() const;
    std::size_t transitionCount() const;
};

Nfa determinize(const Nfa& a);
// Adds a sink so every state has a successor on every symbol. Input must be deterministic.
Nfa complete(const Nfa& a);
Nfa complement(const Nfa& a);
// Moore refinement on the completed DFA, then trimmed.
Nfa minimize(const Nfa& a);
// Keeps states that are reachable and co-reachable.
Nfa trim(const Nfa& a);
Nfa reverse(const Nfa& a);
Nfa product(const Nfa& a, const Nfa& b);
Nfa unionOf(const Nfa& a, const Nfa& b);
// Homomorphic image: every old symbol s becomes map(s).
Nfa project(const Nfa& a, int newSymbols, const std::function<int(int)>& map);
// Inverse image: new symbol t behaves as any of pre(t).
Nfa relabel(const Nfa& a, int newSymbols, const std::function<std::vector<int>(int)>& pre);
// Synchronous product with projection: new symbol t steps a on p.first and b on p.second
// for each p in pairs(t).
Nfa combine(const Nfa& a, const Nfa& b, int newSymbols,
            const std::function<std::vector<std::pair<int, int>>(int)>& pairs);
// Determinize, minimize.
Nfa normalize(const Nfa& a);
bool equivalent(const Nfa& a, const Nfa& b);
bool isEmpty(const Nfa& a);

// Letter-to-letter transducer; nfa symbol = in * numOut + out.
struct Transducer {
    int numIn = 0, numOut = 0;
    Nfa nfa;
    std::vector<std::string> inNames, outNames;

    int sym(int in, int out) const { return in * numOut + out; }
};

// All outputs of accepted runs, deduplicated, capped at `limit`.
std::vector<std::vector<int>> outputs(const Transducer& t, const std::vector<int>& input, std::size_t limit = 2);
// The output of a functional transducer, none if no accepting run.
std::optional<std::vector<int>> runFunctional(const Transducer& t, const std::vector<int>& input);
// True iff no input has two accepted outputs.
bool isFunctional(const Transducer& t);
// Input-deterministic: one initial state and at most one transition per state and input.
bool isInputDeterministic(const Transducer& t);
Transducer identityTransducer(const std::vector<std::string>& names);

// Input symbols of word-level formulas: letter x marking x feature bits.
struct Feature {
    std::string name;  // free variable standing for the feature in a skeleton
    Formula pos, neg;  // formulas used when reading the feature back into logic
};

struct WordAlphabet {
    std::vector<std::string> letters;
    bool other = true;   // an extra letter for anything outside `letters`
    bool marked = true;  // P and S bits present
    std::vector<Feature> features;

    int letterCount() const { return static_cast<int>(letters.size()) + (other ? 1 : 0); }
    int size() const;
    int encode(int letter, bool p, bool s, std::uint32_t feats) const;
    int letterOf(int b) const;
    bool pOf(int b) const;
    bool sOf(int b) const;
    std::uint32_t featsOf(int b) const;
    std::string symbolName(int b) const;
    // Index of letter name, or the other-letter index, or -1.
    int letterIndex(const std::string& l) const;
};

// Which modalities a word formula reads: global ones over the string, class ones over a class string.
enum class WordKind { Global, Class };

// Marking transducer: input alphabet.size(), output {0,1} = truth of f. Mixed-kind and
// unobservable zeroary atoms are input errors.
Transducer markingTransducer(const Formula& f, WordKind kind, const WordAlphabet& alphabet);

// For each output letter o, a formula true exactly where t outputs o. Reach parts use
// past modalities of `kind`, coreach parts future ones, each linearized with bekic.
std::vector<Formula> transducerToFormulas(const Transducer& t, const WordAlphabet& alphabet, WordKind kind);
// Same, with an explicit formula per input symbol.
std::vector<Formula> transducerToFormulas(const Transducer& t, const std::vector<Formula>& tests, WordKind kind);

// Left pass: deterministic, outputs (input, left state). Right pass: deterministic when
// read right to left, outputs the original output letters.
struct Bimachine {
    Transducer left;
    Transducer right;
};

Bimachine sequentialize(const Transducer& t);
std::optional<std::vector<int>> runBimachine(const Bimachine& b, const std::vector<int>& input);
// The right pass as an ordinary left-to-right transducer (co-deterministic).
Transducer rightAsForward(const Bimachine& b);

}  // namespace mudw
