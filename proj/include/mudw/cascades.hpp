#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mudw/data_automata.hpp"
#include "mudw/dataword.hpp"
#include "mudw/formula.hpp"
#include "mudw/wordautomata.hpp"

namespace mudw {

// Deterministic class-memory transducer. A forward one reads left to right and consults
// the state at the class predecessor; a backward one reads right to left and consults the
// class successor. Memory -1 stands for no such position.
struct Cmt {
    bool forward = true;
    int numStates = 0;
    int initial = 0;
    int numIn = 0, numOut = 0;
    std::vector<char> classFinal, globalFinal;
    // (state, memory, input) -> (state, output)
    std::map<std::tuple<int, int, int>, std::pair<int, int>> delta;

    std::optional<std::pair<int, int>> step(int q, int mem, int in) const;
};

struct CmtRun {
    std::vector<int> states;  // per position, 0-based
    std::vector<int> output;
};

// The unique run, none if a transition is missing or a finality condition fails.
// Class-final states are checked where the class ends in reading order, the global-final
// state at the last position read.
std::optional<CmtRun> runCmt(const Cmt& t, const std::vector<int>& input, const WordStructure& ws);

enum class StageKind { Global, Class, ForwardCmt, BackwardCmt };
const char* name(StageKind k);

// One relabeling step. Input symbols are in.encode(letter, P, S, 0).
struct CascadeStage {
    StageKind kind = StageKind::Global;
    WordAlphabet in;
    std::vector<std::string> out;
    Transducer t;  // Global, Class
    Cmt cmt;       // ForwardCmt, BackwardCmt
};

// Stage 0 reads `letters` (plus an other-letter when `other`), stage s reads the output
// letters of stage s-1. A word is accepted when every stage has a run, the word is
// nonempty and, if `accepting` is set, the last output at position 1 is in it.
struct Cascade {
    std::vector<std::string> letters;
    bool other = true;
    std::vector<CascadeStage> stages;
    std::optional<std::set<int>> accepting;

    std::size_t height() const { return stages.size(); }
    WordAlphabet inputAlphabet() const { return WordAlphabet{letters, other, true, {}}; }
    const std::vector<std::string>& outputLetters() const;
};

void validate(const Cascade& c);

// Words after each stage, the input first; none if some stage has no run.
std::optional<std::vector<DataWord>> traceCascade(const Cascade& c, const DataWord& w);
std::optional<DataWord> runCascade(const Cascade& c, const DataWord& w);
bool accepts(const Cascade& c, const DataWord& w);

// Stages of a then b; b must read exactly a's output letters.
Cascade compose(const Cascade& a, const Cascade& b);
// Same input, output pair o1 * b.numOut + o2.
Transducer productTransducer(const Transducer& a, const Transducer& b);

// Height equals the strict BMA comp-height; at most twice that when sequential. The last
// stage outputs F/T, the truth of f, and acceptance asks for T.
Cascade bmaToCascade(const Formula& f, bool sequential = false);
// Height equals the strict BR comp-height; past layers become forward CMTs, future layers
// backward ones.
Cascade brToCmtCascade(const Formula& f);

// Sentence true at position 1 exactly on the accepted words.
Formula cascadeToFormula(const Cascade& c);

// Guesses all stage outputs at once: b checks the global stages and acceptance, c the
// class stages. Transducer stages only.
DataAutomaton cascadeToDataAutomaton(const Cascade& c);

}  // namespace mudw
