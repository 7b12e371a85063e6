#include "mudw/dataword.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mudw {

std::string toText(Marking m) {
    std::string s = m.pred ? "P" : "nP";
    s += ",";
    s += m.succ ? "S" : "nS";
    return s;
}

DataWord::DataWord(std::vector<Letter> letters, std::vector<Value> values)
    : letters_(std::move(letters)), values_(std::move(values)) {
    if (letters_.size() != values_.size())
        throw InputError("letters and values differ in length");
}

const Letter& DataWord::letter(std::size_t i) const {
    if (i < 1 || i > size()) throw InputError("position out of range: " + std::to_string(i));
    return letters_[i - 1];
}

Value DataWord::value(std::size_t i) const {
    if (i < 1 || i > size()) throw InputError("position out of range: " + std::to_string(i));
    return values_[i - 1];
}

static void checkPos(const DataWord& w, std::size_t i) {
    if (i < 1 || i > w.size()) throw InputError("position out of range: " + std::to_string(i));
}

std::optional<std::size_t> classSuccessor(const DataWord& w, std::size_t i) {
    checkPos(w, i);
    const auto& v = w.values();
    for (std::size_t j = i; j < v.size(); ++j)
        if (v[j] == v[i - 1]) return j + 1;
    return std::nullopt;
}

std::optional<std::size_t> classPredecessor(const DataWord& w, std::size_t i) {
    checkPos(w, i);
    const auto& v = w.values();
    for (std::size_t j = i - 1; j-- > 0;)
        if (v[j] == v[i - 1]) return j + 1;
    return std::nullopt;
}

Marking oneType(const DataWord& w, std::size_t i) {
    checkPos(w, i);
    Marking m;
    auto s = classSuccessor(w, i);
    m.succ = s && *s == i + 1;
    auto p = classPredecessor(w, i);
    m.pred = p && i >= 2 && *p == i - 1;
    return m;
}

WordStructure::WordStructure(const DataWord& w) : n(w.size()) {
    csucc.assign(n, -1);
    cpred.assign(n, -1);
    types.assign(n, Marking{});
    classId.assign(n, -1);
    std::unordered_map<Value, int> last, ids;
    const auto& v = w.values();
    for (std::size_t i = 0; i < n; ++i) {
        auto it = last.find(v[i]);
        if (it != last.end()) {
            cpred[i] = it->second;
            csucc[it->second] = static_cast<int>(i);
            it->second = static_cast<int>(i);
        } else {
            last.emplace(v[i], static_cast<int>(i));
        }
        auto [id, fresh] = ids.emplace(v[i], numClasses);
        if (fresh) ++numClasses;
        classId[i] = id->second;
    }
    for (std::size_t i = 0; i < n; ++i) {
        types[i].succ = csucc[i] == static_cast<int>(i) + 1;
        types[i].pred = i > 0 && cpred[i] == static_cast<int>(i) - 1;
    }
}

Projections projections(const DataWord& w) {
    WordStructure st(w);
    Projections p;
    p.classes.resize(st.numClasses);
    for (std::size_t i = 0; i < st.n; ++i) {
        MarkedLetter ml{w.letters()[i], st.types[i]};
        p.msp.push_back(ml);
        auto& c = p.classes[st.classId[i]];
        c.positions.push_back(i + 1);
        c.word.push_back(ml);
    }
    return p;
}

DataWord canonicalize(const DataWord& w) {
    std::unordered_map<Value, Value> ren;
    std::vector<Value> vals;
    vals.reserve(w.size());
    for (Value v : w.values()) {
        auto [it, fresh] = ren.emplace(v, ren.size() + 1);
        vals.push_back(it->second);
    }
    return DataWord(w.letters(), std::move(vals));
}

DataWord reversed(const DataWord& w) {
    std::vector<Letter> l(w.letters().rbegin(), w.letters().rend());
    std::vector<Value> v(w.values().rbegin(), w.values().rend());
    return DataWord(std::move(l), std::move(v));
}

WordEnumerator::WordEnumerator(std::vector<Letter> alphabet, std::size_t n)
    : alpha_(std::move(alphabet)), n_(n) {
    std::sort(alpha_.begin(), alpha_.end());
    alpha_.erase(std::unique(alpha_.begin(), alpha_.end()), alpha_.end());
    letterIdx_.assign(n_, 0);
    rgs_.assign(n_, 1);
    if (n_ > 0 && alpha_.empty()) done_ = true;
}

void WordEnumerator::rebuild() {
    std::vector<Letter> l(n_);
    for (std::size_t i = 0; i < n_; ++i) l[i] = alpha_[letterIdx_[i]];
    word_ = DataWord(std::move(l), rgs_);
}

// Next restricted-growth string in lexicographic order.
static bool nextRgs(std::vector<Value>& a) {
    std::size_t n = a.size();
    if (n == 0) return false;
    std::vector<Value> pref(n);
    Value m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pref[i] = m;  // max over a[0..i-1]
        m = std::max(m, a[i]);
    }
    for (std::size_t i = n; i-- > 1;) {
        if (a[i] <= pref[i]) {
            ++a[i];
            for (std::size_t j = i + 1; j < n; ++j) a[j] = 1;
            return true;
        }
    }
    return false;
}

static bool nextLetters(std::vector<std::size_t>& idx, std::size_t k) {
    for (std::size_t i = idx.size(); i-- > 0;) {
        if (idx[i] + 1 < k) {
            ++idx[i];
            for (std::size_t j = i + 1; j < idx.size(); ++j) idx[j] = 0;
            return true;
        }
    }
    return false;
}

bool WordEnumerator::next() {
    if (done_) return false;
    if (!started_) {
        started_ = true;
        rebuild();
        return true;
    }
    if (nextRgs(rgs_)) {
        rebuild();
        return true;
    }
    std::fill(rgs_.begin(), rgs_.end(), 1);
    if (nextLetters(letterIdx_, alpha_.size())) {
        rebuild();
        return true;
    }
    done_ = true;
    return false;
}

bool forEachWord(const std::vector<Letter>& alphabet, std::size_t n,
                 const std::function<bool(const DataWord&)>& fn) {
    WordEnumerator e(alphabet, n);
    while (e.next())
        if (!fn(e.current())) return false;
    return true;
}

bool forEachWordUpTo(const std::vector<Letter>& alphabet, std::size_t maxLen,
                     const std::function<bool(const DataWord&)>& fn) {
    for (std::size_t n = 0; n <= maxLen; ++n)
        if (!forEachWord(alphabet, n, fn)) return false;
    return true;
}

std::vector<DataWord> enumerate(const std::vector<Letter>& alphabet, std::size_t n) {
    std::vector<DataWord> out;
    forEachWord(alphabet, n, [&](const DataWord& w) {
        out.push_back(w);
        return true;
    });
    return out;
}

std::uint64_t bellNumber(std::size_t n) {
    // Bell triangle.
    std::vector<std::uint64_t> row{1};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::uint64_t> nxt{row.back()};
        for (auto x : row) nxt.push_back(nxt.back() + x);
        row = std::move(nxt);
    }
    return row.front();
}

std::uint64_t wordCount(std::size_t k, std::size_t n) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < n; ++i) p *= k;
    return p * bellNumber(n);
}

bool isLetterName(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

DataWord parseWord(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    std::vector<Letter> letters;
    std::vector<Value> values;
    while (in >> tok) {
        auto colon = tok.rfind(':');
        if (colon == std::string::npos) throw InputError("expected letter:value, got '" + tok + "'");
        std::string l = tok.substr(0, colon), v = tok.substr(colon + 1);
        if (!isLetterName(l)) throw InputError("bad letter '" + l + "'");
        if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw InputError("bad value in '" + tok + "'");
        try {
            values.push_back(std::stoull(v));
        } catch (const std::exception&) {
            throw InputError("value out of range in '" + tok + "'");
        }
        letters.push_back(l);
    }
    return DataWord(std::move(letters), std::move(values));
}

std::string toText(const DataWord& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += w.letters()[i] + ":" + std::to_string(w.values()[i]);
    }
    return s;
}

}  // namespace mudw
