#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mudw/dataword.hpp"
#include "mudw/formula.hpp"

namespace mudw {

// Subset of positions 1..n. Bits past n are kept zero.
class PositionSet {
public:
    PositionSet() = default;
    explicit PositionSet(std::size_t n, bool full = false);
    static PositionSet of(std::size_t n, const std::vector<std::size_t>& positions);

    std::size_t universe() const { return n_; }
    bool contains(std::size_t i) const { return i >= 1 && i <= n_ && test(i - 1); }
    void insert(std::size_t i);
    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<std::size_t> positions() const;

    // 0-based bit access.
    bool test(std::size_t k) const { return (data()[k >> 6] >> (k & 63)) & 1u; }
    void set(std::size_t k) { data()[k >> 6] |= std::uint64_t{1} << (k & 63); }
    void reset(std::size_t k) { data()[k >> 6] &= ~(std::uint64_t{1} << (k & 63)); }

    PositionSet& operator|=(const PositionSet& o);
    PositionSet& operator&=(const PositionSet& o);
    PositionSet complement() const;
    bool subsetOf(const PositionSet& o) const;
    bool operator==(const PositionSet& o) const;

    // {i : i+1 in this} and {i : i-1 in this}.
    PositionSet predecessorsOf() const;
    PositionSet successorsOf() const;

private:
    std::size_t words() const { return n_ == 0 ? 0 : (n_ + 63) / 64; }
    std::uint64_t* data() { return n_ <= 64 ? &small_ : big_.data(); }
    const std::uint64_t* data() const { return n_ <= 64 ? &small_ : big_.data(); }
    void trim();

    std::size_t n_ = 0;
    std::uint64_t small_ = 0;
    std::vector<std::uint64_t> big_;
};

using Environment = std::map<std::string, PositionSet>;

// Compiled formula for repeated evaluation. Sugar and tilde nodes are evaluated by their
// direct semantic definitions, independently of desugar. Thread-safe for concurrent eval.
class Evaluator {
public:
    explicit Evaluator(const Formula& f);
    PositionSet eval(const DataWord& w, const Environment& env = {}) const;
    // Satisfaction at position 1; false on the empty word.
    bool models(const DataWord& w) const;
    const Formula& formula() const { return f_; }

    struct Op {
        Kind kind;
        Mod mod = Mod::Xg;
        Zero zero = Zero::S;
        Sugar sugar = Sugar::Fg;
        Until until = Until::Ug;
        std::string letter;
        int a = -1, b = -1;  // child ops
        int slot = -1;       // variable slot (Var and binders)
        std::vector<int> freeSlots;
    };

private:
    int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope);

    Formula f_;
    std::vector<Op> ops_;
    int root_ = -1;
    int slots_ = 0;
    std::vector<std::pair<std::string, int>> topVars_;
    std::map<std::pair<const Node*, std::vector<int>>, int> memo_;
};

PositionSet eval(const DataWord& w, const Formula& f, const Environment& env = {});
bool models(const DataWord& w, const Formula& f);

}  // namespace mudw
