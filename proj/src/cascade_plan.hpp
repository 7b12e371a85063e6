#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mudw/cascades.hpp"
#include "mudw/fragments.hpp"

namespace mudw::detail {

// Assigns the layers of a witness to cascade stages: a layer at tree depth d (root 1) is
// computed at stage k-d. Its bit is carried in the letters until its parent's stage reads
// it. Stage letters are orig * 2^c + bits, bit j for carried layer j; orig ranges over the
// letters plus the other-letter. The last stage outputs F/T.
class StagePlan {
public:
    struct Node {
        const Layer* layer;
        int parent;  // -1 for the root
        int stage;
        std::vector<int> children;  // in hole order
    };
    struct Decoded {
        int orig;
        std::uint32_t bits;
    };

    StagePlan(const Layer& root, std::vector<std::string> letters);

    int height() const { return k_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& computed(int s) const { return computed_[s]; }
    LayerKind kindAt(int s) const { return nodes_[computed_[s][0]].layer->kind; }

    WordAlphabet inAlphabet(int s) const;
    std::vector<std::string> outLetters(int s) const;
    Decoded decode(int s, int inLetter) const;
    // Feature bits of node's children, taken from the carried input bits of its stage.
    std::uint32_t childBits(int node, std::uint32_t inBits) const;
    // Output letter given the layer values computed at stage s.
    int outLetter(int s, const Decoded& d, const std::map<int, bool>& values) const;

private:
    void add(const Layer& l, int parent, int depth);
    std::vector<std::string> letters_;
    std::vector<Node> nodes_;
    int k_ = 0;
    std::vector<std::vector<int>> computed_;
    std::vector<std::vector<int>> carryOut_;
};

// Formulas for each output letter of a CMT given one test per input symbol; finality
// conditions, to be read at position 1, are appended to conds.
std::vector<Formula> cmtToFormulas(const Cmt& t, const std::vector<Formula>& tests, std::vector<Formula>& conds);

}  // namespace mudw::detail
