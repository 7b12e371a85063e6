#pragma once

#include "json.hpp"
#include "mudw/cascades.hpp"
#include "mudw/data_automata.hpp"
#include "mudw/dataword.hpp"
#include "mudw/wordautomata.hpp"

namespace mudw {

using Json = nlohmann::ordered_json;

// {"letters": [...], "values": [...]}
Json wordToJson(const DataWord& w);
DataWord wordFromJson(const Json& j);

// Automata: {"states", "alphabet", "transitions": [[src, letter, dst]], "initial", "final"}.
// States are strings; letters are names from the alphabet. Unnamed symbols print as
// their index.
Json nfaToJson(const Nfa& a, const std::vector<std::string>& alphabet = {});
Nfa nfaFromJson(const Json& j);

// Same with "inputs", "outputs" and transitions [src, in, out, dst].
Json transducerToJson(const Transducer& t);
Transducer transducerFromJson(const Json& j);

// {"letters", "other", "marked"}; features are not serialized.
Json alphabetToJson(const WordAlphabet& al);
WordAlphabet alphabetFromJson(const Json& j);

// {"input", "transducer", "classAutomaton"}
Json automatonToJson(const DataAutomaton& a);
DataAutomaton automatonFromJson(const Json& j);

// {"forward", "states", "initial", "inputs", "outputs", "classFinal", "globalFinal",
//  "transitions": [[q, mem or null, in, q', out]]}
Json cmtToJson(const Cmt& t);
Cmt cmtFromJson(const Json& j);

// {"letters", "other", "accepting", "stages": [{"kind", "in", "out", "transducer" | "cmt"}]}
Json cascadeToJson(const Cascade& c);
Cascade cascadeFromJson(const Json& j);

}  // namespace mudw
