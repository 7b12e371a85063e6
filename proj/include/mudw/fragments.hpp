#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mudw/formula.hpp"

namespace mudw {

// BR splits modalities by direction, BMA by mode.
enum class Basis { BR, BMA };

// One side of a basis. Zeroary modalities belong to every side.
enum class LayerKind { Future, Past, Global, Class };

const char* name(Basis b);
const char* name(LayerKind k);
std::vector<LayerKind> kindsOf(Basis b);
bool modInKind(Mod m, LayerKind k);

// A layer skeleton is pure in its kind; holes[i] is a free variable of the skeleton
// that stands for children[i].
struct Layer {
    Formula skeleton;
    LayerKind kind = LayerKind::Future;
    std::vector<std::string> holes;
    std::vector<Layer> children;

    std::size_t depth() const;
    // Substitutes children back into the skeleton without renaming.
    Formula recompose() const;
};

struct HeightResult {
    std::optional<std::size_t> height;
    std::optional<Layer> witness;
};

// Strict purity also confines zeroary atoms to the kinds that can observe them: first/last
// of a mode to that mode, first to the past and last to the future. S and P fit everywhere.
bool zeroInKind(Zero z, LayerKind k, bool strict);

// Uses only modalities of kind k (tilde by its underlying modality).
bool isPure(const Formula& f, LayerKind k, bool strict = false);

// Minimal Comp-height with a layered witness. Sugar other than tilde is expanded first.
HeightResult compHeight(const Formula& f, Basis basis, bool strict = false);

// Checks purity, capture-freedom, recomposition (up to alpha) and hole bookkeeping.
bool verifyDecomposition(const Formula& f, const Layer& d, Basis basis, bool strict = false);

bool isNuOnly(const Formula& f);
bool isMuOnly(const Formula& f);

// Guarded form with every mu turned into nu. Requires BR membership.
Formula brToNu(const Formula& f);

// Boolean combination of single-direction formulas per layer; BR height at most k+1.
Formula bmaToBr(const Formula& f);

struct FragmentReport {
    std::optional<std::size_t> br, bma;
    bool nuOnly = false, muOnly = false;
    std::optional<Layer> brWitness, bmaWitness;
};

FragmentReport classify(const Formula& f);

}  // namespace mudw
