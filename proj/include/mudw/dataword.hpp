#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mudw {

// Raised on malformed user input (out-of-range positions, bad word text, ...).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Letter = std::string;
using Value = std::uint64_t;

// 1-type of a position. pred is P, succ is S.
struct Marking {
    bool pred = false;
    bool succ = false;
    bool operator==(const Marking&) const = default;
};

std::string toText(Marking m);

struct MarkedLetter {
    Letter letter;
    Marking mark;
    bool operator==(const MarkedLetter&) const = default;
};

using MarkedWord = std::vector<MarkedLetter>;

// Positions are 1-based throughout the public API.
class DataWord {
public:
    DataWord() = default;
    DataWord(std::vector<Letter> letters, std::vector<Value> values);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    const std::vector<Letter>& letters() const { return letters_; }
    const std::vector<Value>& values() const { return values_; }
    const Letter& letter(std::size_t i) const;
    Value value(std::size_t i) const;

    bool operator==(const DataWord&) const = default;

private:
    std::vector<Letter> letters_;
    std::vector<Value> values_;
};

std::optional<std::size_t> classSuccessor(const DataWord& w, std::size_t i);
std::optional<std::size_t> classPredecessor(const DataWord& w, std::size_t i);
Marking oneType(const DataWord& w, std::size_t i);

struct ClassProjection {
    std::vector<std::size_t> positions;  // increasing
    MarkedWord word;
};

struct Projections {
    MarkedWord msp;
    std::vector<ClassProjection> classes;  // ordered by first occurrence
};

Projections projections(const DataWord& w);

// Restricted-growth renaming: the k-th distinct value (by first occurrence) becomes k.
DataWord canonicalize(const DataWord& w);

// Position-reversed word; class structure reverses with it.
DataWord reversed(const DataWord& w);

// One representative per data-permutation class: letter words (lexicographic over the
// sorted alphabet, outer loop) times restricted-growth value strings (inner loop).
// The callback returns false to stop early; the function then returns false.
bool forEachWord(const std::vector<Letter>& alphabet, std::size_t n,
                 const std::function<bool(const DataWord&)>& fn);
bool forEachWordUpTo(const std::vector<Letter>& alphabet, std::size_t maxLen,
                     const std::function<bool(const DataWord&)>& fn);
std::vector<DataWord> enumerate(const std::vector<Letter>& alphabet, std::size_t n);

// Pull-style enumerator over the same order as forEachWord.
class WordEnumerator {
public:
    WordEnumerator(std::vector<Letter> alphabet, std::size_t n);
    // Advances to the next word; false when exhausted.
    bool next();
    const DataWord& current() const { return word_; }

private:
    void rebuild();
    std::vector<Letter> alpha_;
    std::size_t n_;
    std::vector<std::size_t> letterIdx_;
    std::vector<Value> rgs_;
    DataWord word_;
    bool started_ = false;
    bool done_ = false;
};

std::uint64_t bellNumber(std::size_t n);
std::uint64_t wordCount(std::size_t alphabetSize, std::size_t n);

// Text format: whitespace separated `letter:value` tokens.
DataWord parseWord(const std::string& text);
std::string toText(const DataWord& w);
bool isLetterName(const std::string& s);

// Precomputed class structure, 0-based, used by evaluators and automata runs.
struct WordStructure {
    std::size_t n = 0;
    std::vector<int> csucc;  // -1 if none
    std::vector<int> cpred;  // -1 if none
    std::vector<Marking> types;
    std::vector<int> classId;  // by first occurrence
    int numClasses = 0;
    explicit WordStructure(const DataWord& w);
};

}  // namespace mudw
