#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mudw/cascades.hpp"
#include "mudw/data_automata.hpp"
#include "mudw/dltl.hpp"
#include "mudw/evaluator.hpp"
#include "mudw/fragments.hpp"
#include "mudw/reductions.hpp"
#include "mudw/serialize.hpp"
#include "mudw/testkit.hpp"

using namespace mudw;

namespace {

// Property checks that fail exit with this code.
struct Violated {};

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json readJson(const std::string& path) {
    try {
        return Json::parse(readFile(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

// Inline text, or the contents of the file when given.
std::string textOrFile(const std::string& text, const std::string& file, const char* what) {
    if (!file.empty()) return readFile(file);
    if (text.empty()) throw InputError(std::string("missing ") + what);
    return text;
}

DataWord wordFrom(const std::string& text) {
    auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos && text[start] == '{') {
        try {
            return wordFromJson(Json::parse(text));
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(std::string("word JSON: ") + e.what());
        }
    }
    return parseWord(text);
}

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> r;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) r.push_back(part);
    return r;
}

Json optionalSize(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json layerToJson(const Layer& l) {
    Json kids = Json::array();
    for (const auto& c : l.children) kids.push_back(layerToJson(c));
    return Json{{"kind", name(l.kind)}, {"skeleton", print(l.skeleton)}, {"holes", l.holes}, {"children", kids}};
}

struct Output {
    bool pretty = false;
    void operator()(const Json& j) const { std::cout << (pretty ? j.dump(2) : j.dump()) << "\n"; }
};

// Acceptor from "backend:argument"; an argument starting with @ names a file.
Acceptor acceptorFrom(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw InputError("acceptor spec must be backend:argument, got '" + spec + "'");
    std::string backend = spec.substr(0, colon), arg = spec.substr(colon + 1);
    auto text = [&] { return !arg.empty() && arg[0] == '@' ? readFile(arg.substr(1)) : arg; };
    if (backend == "formula") return formulaAcceptor(parse(text()));
    if (backend == "dltl") return dltlAcceptor(parseDltl(text()));
    if (backend == "fo2") return fo2Acceptor(parseFo2(text()));
    if (backend == "da") return automatonAcceptor(automatonFromJson(readJson(arg)));
    if (backend == "cascade") return cascadeAcceptor(cascadeFromJson(readJson(arg)));
    if (backend == "nu-da") {
        Formula f = parse(text());
        return automatonAcceptor(fromNuFormula(isNuOnly(f) ? f : brToNu(f)));
    }
    throw InputError("unknown backend '" + backend + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mu-calculus on data words"};
    app.require_subcommand(1);
    Output out;
    app.add_flag("--pretty", out.pretty, "indent JSON output");

    std::string formula, formulaFile, word, wordFile;
    auto addFormula = [&](CLI::App* c) {
        c->add_option("-f,--formula", formula, "formula text");
        c->add_option("--formula-file", formulaFile, "file holding the formula");
    };
    auto addWord = [&](CLI::App* c) {
        c->add_option("-w,--word", word, "word as letter:value tokens or JSON");
        c->add_option("--word-file", wordFile, "file holding the word");
    };
    auto theFormula = [&] { return parse(textOrFile(formula, formulaFile, "formula")); };
    auto theWord = [&] { return wordFrom(textOrFile(word, wordFile, "word")); };

    std::function<void()> action;

    // eval
    std::string logic = "mu";
    auto* evalCmd = app.add_subcommand("eval", "positions where the formula holds");
    addFormula(evalCmd);
    addWord(evalCmd);
    evalCmd->add_option("--logic", logic, "mu, dltl or fo2")->check(CLI::IsMember({"mu", "dltl", "fo2"}));
    evalCmd->callback([&] {
        action = [&] {
            std::string text = textOrFile(formula, formulaFile, "formula");
            DataWord w = theWord();
            std::vector<std::size_t> ps;
            if (logic == "mu") ps = eval(w, parse(text)).positions();
            else if (logic == "dltl") ps = evalDltl(w, parseDltl(text)).positions();
            else {
                Fo2 f = parseFo2(text);
                for (std::size_t i = 1; i <= w.size(); ++i)
                    if (evalFo2(w, f, {i, std::nullopt})) ps.push_back(i);
            }
            out(Json{{"positions", ps}});
        };
    });

    // check
    auto* checkCmd = app.add_subcommand("check", "does the word satisfy the sentence (at position 1)");
    addFormula(checkCmd);
    addWord(checkCmd);
    checkCmd->callback([&] {
        action = [&] {
            bool m = models(theWord(), theFormula());
            out(Json{{"models", m}});
            if (!m) throw Violated{};
        };
    });

    // classify
    auto* classifyCmd = app.add_subcommand("classify", "Comp-heights in BR and BMA");
    addFormula(classifyCmd);
    classifyCmd->callback([&] {
        action = [&] {
            auto r = classify(theFormula());
            Json wit{{"br", r.brWitness ? layerToJson(*r.brWitness) : Json(nullptr)},
                     {"bma", r.bmaWitness ? layerToJson(*r.bmaWitness) : Json(nullptr)}};
            out(Json{{"br", optionalSize(r.br)},
                     {"bma", optionalSize(r.bma)},
                     {"nuOnly", r.nuOnly},
                     {"muOnly", r.muOnly},
                     {"witness", wit}});
        };
    });

    // normalize
    bool guardedFlag = false, dualFlag = false, desugarFlag = false, nuFlag = false, brFlag = false;
    auto* normCmd = app.add_subcommand("normalize", "rewrite a formula");
    addFormula(normCmd);
    auto* g1 = normCmd->add_flag("--guarded", guardedFlag, "guarded form");
    auto* g2 = normCmd->add_flag("--dual", dualFlag, "negation");
    auto* g3 = normCmd->add_flag("--desugar", desugarFlag, "expand sugar");
    auto* g4 = normCmd->add_flag("--nu", nuFlag, "BR formula as a nu-only formula");
    auto* g5 = normCmd->add_flag("--br", brFlag, "BMA formula as a BR formula");
    for (auto* a : {g1, g2, g3, g4, g5})
        for (auto* b : {g1, g2, g3, g4, g5})
            if (a != b) a->excludes(b);
    normCmd->callback([&] {
        action = [&] {
            Formula f = theFormula();
            Formula g;
            if (guardedFlag) g = toGuarded(f);
            else if (dualFlag) g = dualize(f);
            else if (desugarFlag) g = desugar(f);
            else if (nuFlag) g = brToNu(f);
            else if (brFlag) g = bmaToBr(f);
            else throw InputError("normalize needs one of --guarded, --dual, --desugar, --nu, --br");
            out(Json{{"formula", print(g)}});
        };
    });

    // to-da
    auto* toDaCmd = app.add_subcommand("to-da", "data automaton of a nu-only (or BR) sentence");
    addFormula(toDaCmd);
    toDaCmd->callback([&] {
        action = [&] {
            Formula f = theFormula();
            out(automatonToJson(fromNuFormula(isNuOnly(f) ? f : brToNu(f))));
        };
    });

    // da-member
    std::string daFile;
    auto* memberCmd = app.add_subcommand("da-member", "membership of a word in a data automaton");
    memberCmd->add_option("--da", daFile, "automaton JSON file")->required();
    addWord(memberCmd);
    memberCmd->callback([&] {
        action = [&] {
            auto r = membership(automatonFromJson(readJson(daFile)), theWord());
            out(Json{{"accepted", r.accepted}, {"run", r.run}});
            if (!r.accepted) throw Violated{};
        };
    });

    // da-empty
    std::size_t maxLen = 4;
    std::string sigma;
    auto* emptyCmd = app.add_subcommand("da-empty", "bounded emptiness search");
    emptyCmd->add_option("--da", daFile, "automaton JSON file")->required();
    emptyCmd->add_option("--max-len", maxLen, "length bound");
    emptyCmd->add_option("--sigma", sigma, "letters, comma separated (default: the automaton's)");
    emptyCmd->callback([&] {
        action = [&] {
            DataAutomaton a = automatonFromJson(readJson(daFile));
            auto letters = sigma.empty() ? a.input.letters : splitList(sigma);
            auto w = boundedEmptiness(a, letters, maxLen);
            out(Json{{"maxLen", maxLen}, {"witness", w ? Json(toText(*w)) : Json(nullptr)}});
            if (w) throw Violated{};
        };
    });

    // to-cascade
    std::string basis = "bma";
    bool sequential = false;
    auto* toCascadeCmd = app.add_subcommand("to-cascade", "compile a sentence into a cascade");
    addFormula(toCascadeCmd);
    toCascadeCmd->add_option("--basis", basis, "bma or br")->check(CLI::IsMember({"bma", "br"}));
    toCascadeCmd->add_flag("--sequential", sequential, "split stages into sequential passes (bma)");
    toCascadeCmd->callback([&] {
        action = [&] {
            Formula f = theFormula();
            if (basis == "br" && sequential) throw InputError("--sequential applies to the bma basis");
            out(cascadeToJson(basis == "bma" ? bmaToCascade(f, sequential) : brToCmtCascade(f)));
        };
    });

    // run-cascade
    std::string cascadeFile;
    auto* runCmd = app.add_subcommand("run-cascade", "run a cascade on a word");
    runCmd->add_option("--cascade", cascadeFile, "cascade JSON file")->required();
    addWord(runCmd);
    runCmd->callback([&] {
        action = [&] {
            Cascade c = cascadeFromJson(readJson(cascadeFile));
            DataWord w = theWord();
            auto tr = traceCascade(c, w);
            Json trace = nullptr;
            if (tr) {
                trace = Json::array();
                for (const auto& x : *tr) trace.push_back(toText(x));
            }
            out(Json{{"trace", trace}, {"accepted", accepts(c, w)}});
            if (!tr) throw Violated{};
        };
    });

    // translate
    std::string from, to, expand;
    auto* trCmd = app.add_subcommand("translate", "fo2 -> udltl, dltl -> mu, dltl -> fo2, far modalities");
    addFormula(trCmd);
    trCmd->add_option("--from", from, "fo2 or dltl")->required()->check(CLI::IsMember({"fo2", "dltl"}));
    trCmd->add_option("--to", to, "udltl, mu or fo2")->required()->check(CLI::IsMember({"udltl", "mu", "fo2"}));
    trCmd->add_option("--expand", expand, "apply fF, dP, F or P to the dltl input first")
        ->check(CLI::IsMember({"fF", "dP", "F", "P"}));
    trCmd->callback([&] {
        action = [&] {
            std::string text = textOrFile(formula, formulaFile, "formula");
            if (from == "fo2") {
                if (to != "udltl") throw InputError("fo2 translates to udltl");
                Fo2 f = parseFo2(text);
                Dltl d = fo2ToUdltl(f);
                out(Json{{"formula", print(d)},
                         {"quantifierDepth", quantifierDepth(f)},
                         {"modalDepth", modalDepth(d)}});
                return;
            }
            Dltl d = parseDltl(text);
            if (!expand.empty()) {
                for (NotInClass k : {NotInClass::FarFuture, NotInClass::DeepPast, NotInClass::Future, NotInClass::Past})
                    if (expand == name(k)) d = expandNotInClass(k, d);
            }
            if (to == "mu") out(Json{{"formula", print(dltlToMu(d))}});
            else if (to == "fo2") {
                Fo2 g = udltlToFo2(d);
                out(Json{{"formula", print(g)}, {"modalDepth", modalDepth(d)}, {"quantifierDepth", quantifierDepth(g)}});
            } else {
                if (!isUnaryDltl(d)) throw InputError("formula uses until or since");
                out(Json{{"formula", print(d)}, {"modalDepth", modalDepth(d)}});
            }
        };
    });

    // pcp
    std::string instanceFile, encode, markers = "a,b";
    std::size_t searchLen = 0;
    auto* pcpCmd = app.add_subcommand("pcp", "PCP instance to a mu-fragment sentence");
    pcpCmd->add_option("--instance", instanceFile, "JSON list of [u, v] pairs")->required();
    pcpCmd->add_option("--encode", encode, "1-based index sequence, space separated");
    pcpCmd->add_option("--markers", markers, "two marker letters, comma separated");
    pcpCmd->add_option("--search", searchLen, "bounded witness search up to this length");
    pcpCmd->callback([&] {
        action = [&] {
            PcpInstance I;
            Json j = readJson(instanceFile);
            try {
                for (const auto& p : j) I.pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
            } catch (const nlohmann::json::exception& e) {
                throw InputError(std::string("instance: ") + e.what());
            }
            auto ms = splitList(markers);
            if (ms.size() != 2) throw InputError("--markers takes two letters");
            I.markA = ms[0];
            I.markB = ms[1];
            Formula f = pcpFormula(I);
            Json r{{"formula", print(f)}, {"muOnly", isMuOnly(f)}};
            bool violated = false;
            if (!encode.empty()) {
                std::vector<int> idx;
                std::stringstream ss(encode);
                std::string tok;
                while (ss >> tok) {
                    try {
                        idx.push_back(std::stoi(tok));
                    } catch (const std::exception&) {
                        throw InputError("bad index '" + tok + "'");
                    }
                }
                DataWord w = encodeSolution(I, idx);
                bool holds = models(w, f);
                r["encoding"] = toText(w);
                r["holds"] = holds;
                violated = !holds;
            }
            if (searchLen > 0) {
                auto w = searchPcpWitness(I, searchLen);
                r["witness"] = w ? Json(toText(*w)) : Json(nullptr);
            }
            out(r);
            if (violated) throw Violated{};
        };
    });

    // equiv
    std::string lhs, rhs;
    bool doShrink = false;
    std::size_t equivLen = 4;
    sigma = "a,b";
    auto* equivCmd = app.add_subcommand("equiv", "exhaustive bounded equivalence of two acceptors");
    equivCmd->add_option("--lhs", lhs, "backend:argument (formula, dltl, fo2, nu-da, da, cascade)")->required();
    equivCmd->add_option("--rhs", rhs, "backend:argument")->required();
    equivCmd->add_option("--sigma", sigma, "letters, comma separated");
    equivCmd->add_option("--max-len", equivLen, "length bound");
    equivCmd->add_flag("--shrink", doShrink, "shrink the counterexample");
    equivCmd->callback([&] {
        action = [&] {
            Acceptor a = acceptorFrom(lhs), b = acceptorFrom(rhs);
            auto letters = splitList(sigma);
            auto r = equivalenceCheck(a, b, letters, equivLen);
            Json ce = nullptr;
            if (r.counterexample) {
                Counterexample c = doShrink ? shrink(*r.counterexample, a, b, letters) : *r.counterexample;
                ce = Json{{"word", toText(c.word)}, {"lhs", c.lhs}, {"rhs", c.rhs}};
            }
            out(Json{{"counterexample", ce}, {"visited", r.visited}});
            if (r.counterexample) throw Violated{};
        };
    });

    // enum
    std::size_t enumLen = 3;
    bool countOnly = false;
    auto* enumCmd = app.add_subcommand("enum", "enumerate data words up to isomorphism");
    enumCmd->add_option("--sigma", sigma, "letters, comma separated");
    enumCmd->add_option("-n,--length", enumLen, "word length");
    enumCmd->add_flag("--count", countOnly, "only count");
    enumCmd->callback([&] {
        action = [&] {
            Json words = Json::array();
            std::size_t count = 0;
            forEachWord(splitList(sigma), enumLen, [&](const DataWord& w) {
                ++count;
                if (!countOnly) words.push_back(toText(w));
                return true;
            });
            Json r{{"count", count}};
            if (!countOnly) r["words"] = words;
            out(r);
        };
    });

    // random
    std::string fragment = "any";
    std::size_t depth = 3;
    std::uint64_t seed = 0;
    auto* randCmd = app.add_subcommand("random", "seeded random sentence in a fragment");
    randCmd->add_option("--fragment", fragment, "any, nuOnly, muOnly, BR, BMA, pure:<kind>");
    randCmd->add_option("--depth", depth, "nesting depth");
    randCmd->add_option("--seed", seed, "seed");
    randCmd->add_option("--sigma", sigma, "letters, comma separated");
    randCmd->callback([&] {
        action = [&] { out(Json{{"formula", print(randomFormula(parseFragment(fragment), depth, seed, splitList(sigma)))}}); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        if (action) action();
        return 0;
    } catch (const Violated&) {
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
