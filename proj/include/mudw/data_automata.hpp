#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mudw/dataword.hpp"
#include "mudw/formula.hpp"
#include "mudw/wordautomata.hpp"

namespace mudw {

// A consistent truth assignment over the closure. Letter and markings are part of it.
struct Atom {
    int letter = 0;  // index into AtomTable::letters, letters.size() for any other letter
    std::uint32_t feats = 0;  // bit k: free variable features()[k]
    std::vector<char> in;  // per basis formula
};

// Closure of a guarded nu-only formula and its atoms. The basis holds the members reached
// from the root, propositions and the chosen zeroary atoms; negated literals are derived.
// Free variables of the root are features, read from the input like letters.
class AtomTable {
public:
    static const std::vector<Zero>& allZeros();
    explicit AtomTable(const Formula& guardedNu, bool enumerate = true,
                       const std::vector<Zero>& zeros = allZeros());

    const Formula& root() const { return root_; }
    const std::vector<std::string>& letters() const { return letters_; }
    const std::vector<std::string>& features() const { return features_; }
    const std::vector<Zero>& zeros() const { return zeros_; }
    const std::vector<Formula>& basis() const { return basis_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    int indexOf(const Formula& f) const;
    // Basis indices of modal members, and of their children.
    const std::vector<int>& modal() const { return modal_; }
    int childOf(int modalIdx) const { return child_[modalIdx]; }
    // -1 when z is not tracked.
    int zeroIndex(Zero z) const { return zeroIdx_[static_cast<int>(z)]; }
    bool has(const Atom& a, int idx) const { return a.in[idx] != 0; }
    bool holds(const Atom& a, const Formula& f) const;
    std::string atomName(std::size_t i) const;

    // Completes an assignment of letter, features, zeroary and modal members; none if it
    // violates a boundary constraint.
    std::optional<Atom> complete(int letter, std::uint32_t feats, const std::vector<char>& freeBits) const;
    // Free members in order: zeros(), then modal().
    std::size_t freeCount() const { return zeros_.size() + modal_.size(); }

private:
    int add(const Formula& f);
    Formula root_;
    std::vector<std::string> letters_;
    std::vector<std::string> features_;
    std::vector<Zero> zeros_;
    std::vector<Formula> basis_;
    std::unordered_map<Formula, int, FormulaHash, FormulaEq> index_;
    std::vector<int> modal_;
    std::vector<int> child_;  // per basis index, child index for And/Or/Mod (first), unfolding for Nu
    std::vector<int> child2_;
    std::vector<int> zeroIdx_;
    std::vector<Atom> atoms_;
};

// Transducer b reads the marked string projection and relabels it; the class automaton c
// must accept every class projection of the relabeled word.
struct DataAutomaton {
    WordAlphabet input;  // marked letters, no features
    Transducer b;
    Nfa c;
};

// Checks that the pieces fit together.
void validate(const DataAutomaton& a);

// Encodes the marked string projection in the automaton's input alphabet.
std::vector<int> mspSymbols(const WordAlphabet& al, const DataWord& w);

struct MembershipResult {
    bool accepted = false;
    std::vector<int> run;  // output letters of a successful transduction
};

MembershipResult membership(const DataAutomaton& a, const DataWord& w);

// Letters of the base alphabet are kept by b; c accepts everything.
DataAutomaton universalAutomaton(const std::vector<std::string>& letters);

// Requires a nu-only sentence; the output alphabet is the atom set of its guarded form.
DataAutomaton fromNuFormula(const Formula& f);

// First accepted word in enumeration order over `letters`, shortest first, up to maxLen.
std::optional<DataWord> boundedEmptiness(const DataAutomaton& a, const std::vector<std::string>& letters,
                                         std::size_t maxLen);

}  // namespace mudw
