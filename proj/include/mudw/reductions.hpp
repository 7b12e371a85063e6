#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mudw/dataword.hpp"
#include "mudw/formula.hpp"

namespace mudw {

// Existence of x1 S x2 S ... over la positions, where x S z iff x ~ x' < y' ~ y < z with
// x, y labelled la and x', y' labelled lb. Every fixpoint is nu, including the eventualities
// (F phi as nu x. phi | X x on finite words).
Formula bigWitnessFormula(const std::string& la, const std::string& lb);

// Mu-fragment sentence: ~ restricted to la x lb positions is an increasing bijection.
// Bijection part conjoined with the dual of the big-witness formula.
Formula monotoneBijectionFormula(const std::string& la, const std::string& lb);

// Pairs (u_j, v_j); every character of u_j and v_j is one letter. The marker letters must
// not occur in the pairs.
struct PcpInstance {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string markA = "a", markB = "b";
};

// Throws InputError on empty instances, empty words, marker clashes or bad letters.
void validate(const PcpInstance& I);
// Letters of the pairs, then the two markers.
std::vector<std::string> pcpAlphabet(const PcpInstance& I);

// Indices are 1-based.
bool isSolution(const PcpInstance& I, const std::vector<int>& indices);

// Mu-fragment sentence: satisfiable iff I has a solution.
Formula pcpFormula(const PcpInstance& I);

// Canonical encoding: markA/markB pairs share values 1, 2, ... in order; other letters get
// fresh singleton values.
DataWord encodeSolution(const PcpInstance& I, const std::vector<int>& indices);

// Exhaustive over words of length <= maxLen that start and end with markA markB, carry as
// many markA as markB, pair each markA with exactly one markB by data value and give the
// remaining positions singleton values. Returns the first model of pcpFormula(I).
std::optional<DataWord> searchPcpWitness(const PcpInstance& I, std::size_t maxLen);

}  // namespace mudw
