#include "mudw/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <optional>

namespace mudw {

PositionSet::PositionSet(std::size_t n, bool full) : n_(n) {
    if (n_ > 64) big_.assign(words(), 0);
    if (full) {
        for (std::size_t w = 0; w < words(); ++w) data()[w] = ~std::uint64_t{0};
        trim();
    }
}

PositionSet PositionSet::of(std::size_t n, const std::vector<std::size_t>& positions) {
    PositionSet s(n);
    for (auto i : positions) s.insert(i);
    return s;
}

void PositionSet::trim() {
    if (n_ == 0) {
        small_ = 0;
        return;
    }
    std::size_t r = n_ & 63;
    if (r) data()[words() - 1] &= (std::uint64_t{1} << r) - 1;
}

void PositionSet::insert(std::size_t i) {
    if (i < 1 || i > n_) throw InputError("position out of range: " + std::to_string(i));
    set(i - 1);
}

std::size_t PositionSet::count() const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words(); ++w) c += static_cast<std::size_t>(std::popcount(data()[w]));
    return c;
}

std::vector<std::size_t> PositionSet::positions() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n_; ++k)
        if (test(k)) out.push_back(k + 1);
    return out;
}

PositionSet& PositionSet::operator|=(const PositionSet& o) {
    for (std::size_t w = 0; w < words(); ++w) data()[w] |= o.data()[w];
    return *this;
}

PositionSet& PositionSet::operator&=(const PositionSet& o) {
    for (std::size_t w = 0; w < words(); ++w) data()[w] &= o.data()[w];
    return *this;
}

PositionSet PositionSet::complement() const {
    PositionSet r(n_);
    for (std::size_t w = 0; w < words(); ++w) r.data()[w] = ~data()[w];
    r.trim();
    return r;
}

bool PositionSet::subsetOf(const PositionSet& o) const {
    for (std::size_t w = 0; w < words(); ++w)
        if (data()[w] & ~o.data()[w]) return false;
    return true;
}

bool PositionSet::operator==(const PositionSet& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t w = 0; w < words(); ++w)
        if (data()[w] != o.data()[w]) return false;
    return true;
}

PositionSet PositionSet::predecessorsOf() const {
    PositionSet r(n_);
    std::size_t nw = words();
    for (std::size_t w = 0; w < nw; ++w) {
        std::uint64_t v = data()[w] >> 1;
        if (w + 1 < nw) v |= data()[w + 1] << 63;
        r.data()[w] = v;
    }
    return r;
}

PositionSet PositionSet::successorsOf() const {
    PositionSet r(n_);
    std::size_t nw = words();
    for (std::size_t w = 0; w < nw; ++w) {
        std::uint64_t v = data()[w] << 1;
        if (w > 0) v |= data()[w - 1] >> 63;
        r.data()[w] = v;
    }
    r.trim();
    return r;
}

// ---------------------------------------------------------------- compilation

Evaluator::Evaluator(const Formula& f) : f_(f) {
    std::vector<std::pair<std::string, int>> scope;
    for (const auto& x : f->free) {
        scope.emplace_back(x, slots_);
        topVars_.emplace_back(x, slots_++);
    }
    root_ = compile(f, scope);
    memo_.clear();
}

int Evaluator::compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope) {
    auto resolve = [&](const std::string& x) {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == x) return it->second;
        throw InputError("unbound variable '" + x + "'");
    };
    std::vector<int> fs;
    for (const auto& x : f->free) fs.push_back(resolve(x));
    auto key = std::make_pair(f.get(), fs);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Op op;
    op.kind = f->kind;
    op.mod = f->mod;
    op.zero = f->zero;
    op.sugar = f->sugar;
    op.until = f->until;
    op.freeSlots = fs;
    switch (f->kind) {
        case Kind::Prop:
        case Kind::NProp: op.letter = f->name; break;
        case Kind::Var: op.slot = resolve(f->name); break;
        case Kind::Mu:
        case Kind::Nu:
            op.slot = slots_++;
            scope.emplace_back(f->name, op.slot);
            op.a = compile(f->kids[0], scope);
            scope.pop_back();
            break;
        default:
            if (!f->kids.empty()) op.a = compile(f->kids[0], scope);
            if (f->kids.size() > 1) op.b = compile(f->kids[1], scope);
            break;
    }
    ops_.push_back(std::move(op));
    int id = static_cast<int>(ops_.size()) - 1;
    memo_.emplace(std::move(key), id);
    return id;
}

// ---------------------------------------------------------------- evaluation

namespace {

struct Run {
    const DataWord& w;
    WordStructure st;
    const std::vector<Evaluator::Op>& ops;
    std::vector<PositionSet> val;
    std::vector<std::uint64_t> stamp;
    std::vector<std::optional<PositionSet>> cache;
    std::vector<std::vector<std::uint64_t>> cacheStamp;
    std::uint64_t clock = 0;

    Run(const DataWord& word, const std::vector<Evaluator::Op>& o, int slots)
        : w(word), st(word), ops(o), val(slots), stamp(slots, 0), cache(o.size()), cacheStamp(o.size()) {}

    void assign(int slot, PositionSet s) {
        val[slot] = std::move(s);
        stamp[slot] = ++clock;
    }

    PositionSet classShift(const PositionSet& s, const std::vector<int>& link) const {
        PositionSet r(st.n);
        for (std::size_t i = 0; i < st.n; ++i)
            if (link[i] >= 0 && s.test(static_cast<std::size_t>(link[i]))) r.set(i);
        return r;
    }

    PositionSet zeroSet(Zero z) const {
        PositionSet r(st.n);
        for (std::size_t i = 0; i < st.n; ++i) {
            bool b = false;
            switch (z) {
                case Zero::S: b = st.types[i].succ; break;
                case Zero::P: b = st.types[i].pred; break;
                case Zero::FirstG: b = i == 0; break;
                case Zero::LastG: b = i + 1 == st.n; break;
                case Zero::FirstC: b = st.cpred[i] < 0; break;
                case Zero::LastC: b = st.csucc[i] < 0; break;
            }
            if (b) r.set(i);
        }
        return r;
    }

    PositionSet modal(Mod m, const PositionSet& s) const {
        switch (m) {
            case Mod::Xg: return s.predecessorsOf();
            case Mod::Yg: return s.successorsOf();
            case Mod::Xc: return classShift(s, st.csucc);
            case Mod::Yc: return classShift(s, st.cpred);
        }
        return s;
    }

    static Zero boundary(Mod m) {
        switch (m) {
            case Mod::Xg: return Zero::LastG;
            case Mod::Xc: return Zero::LastC;
            case Mod::Yg: return Zero::FirstG;
            case Mod::Yc: return Zero::FirstC;
        }
        return Zero::LastG;
    }

    // Link from position i to its neighbour in direction m, -1 if none.
    int step(Mod m, std::size_t i) const {
        switch (m) {
            case Mod::Xg: return i + 1 < st.n ? static_cast<int>(i) + 1 : -1;
            case Mod::Yg: return i > 0 ? static_cast<int>(i) - 1 : -1;
            case Mod::Xc: return st.csucc[i];
            case Mod::Yc: return st.cpred[i];
        }
        return -1;
    }

    // Positions visited in an order where step(m, i) is always handled before i.
    std::vector<std::size_t> order(Mod m) const {
        std::vector<std::size_t> o(st.n);
        for (std::size_t i = 0; i < st.n; ++i) o[i] = isFuture(m) ? st.n - 1 - i : i;
        return o;
    }

    // Reflexive eventually (box=false) or always (box=true) along m.
    PositionSet closure(Mod m, const PositionSet& s, bool box) const {
        PositionSet r(st.n);
        for (std::size_t i : order(m)) {
            int j = step(m, i);
            bool v = box ? s.test(i) && (j < 0 || r.test(static_cast<std::size_t>(j)))
                         : s.test(i) || (j >= 0 && r.test(static_cast<std::size_t>(j)));
            if (v) r.set(i);
        }
        return r;
    }

    PositionSet untilSet(Mod m, const PositionSet& hold, const PositionSet& goal) const {
        PositionSet r(st.n);
        for (std::size_t i : order(m)) {
            int j = step(m, i);
            if (goal.test(i) || (hold.test(i) && j >= 0 && r.test(static_cast<std::size_t>(j)))) r.set(i);
        }
        return r;
    }

    PositionSet ev(int id) {
        const auto& op = ops[id];
        auto& c = cache[id];
        if (c) {
            bool fresh = true;
            const auto& cs = cacheStamp[id];
            for (std::size_t k = 0; k < op.freeSlots.size(); ++k)
                if (cs[k] != stamp[op.freeSlots[k]]) fresh = false;
            if (fresh) return *c;
        }
        PositionSet r = compute(op);
        c = r;
        auto& cs = cacheStamp[id];
        cs.resize(op.freeSlots.size());
        for (std::size_t k = 0; k < op.freeSlots.size(); ++k) cs[k] = stamp[op.freeSlots[k]];
        return r;
    }

    PositionSet compute(const Evaluator::Op& op) {
        std::size_t n = st.n;
        switch (op.kind) {
            case Kind::True: return PositionSet(n, true);
            case Kind::False: return PositionSet(n);
            case Kind::Prop:
            case Kind::NProp: {
                PositionSet r(n);
                for (std::size_t i = 0; i < n; ++i)
                    if ((w.letters()[i] == op.letter) == (op.kind == Kind::Prop)) r.set(i);
                return r;
            }
            case Kind::Zero: return zeroSet(op.zero);
            case Kind::NZero: return zeroSet(op.zero).complement();
            case Kind::Var: return val[op.slot];
            case Kind::And: {
                PositionSet r = ev(op.a);
                r &= ev(op.b);
                return r;
            }
            case Kind::Or: {
                PositionSet r = ev(op.a);
                r |= ev(op.b);
                return r;
            }
            case Kind::Mod: return modal(op.mod, ev(op.a));
            case Kind::Tilde: {
                PositionSet r = modal(op.mod, ev(op.a));
                r |= zeroSet(boundary(op.mod));
                return r;
            }
            case Kind::Mu:
            case Kind::Nu: {
                PositionSet cur(n, op.kind == Kind::Nu);
                for (;;) {
                    assign(op.slot, cur);
                    PositionSet next = ev(op.a);
                    if (next == cur) return cur;
                    cur = std::move(next);
                }
            }
            case Kind::Unary: {
                PositionSet s = ev(op.a);
                switch (op.sugar) {
                    case Sugar::Fg: return closure(Mod::Xg, s, false);
                    case Sugar::Fc: return closure(Mod::Xc, s, false);
                    case Sugar::Pg: return closure(Mod::Yg, s, false);
                    case Sugar::Pc: return closure(Mod::Yc, s, false);
                    case Sugar::Gg: return closure(Mod::Xg, s, true);
                    case Sugar::Gc: return closure(Mod::Xc, s, true);
                    case Sugar::Hg: return closure(Mod::Yg, s, true);
                    case Sugar::Hc: return closure(Mod::Yc, s, true);
                }
                return s;
            }
            case Kind::Binary: {
                PositionSet hold = ev(op.a), goal = ev(op.b);
                switch (op.until) {
                    case Until::Ug: return untilSet(Mod::Xg, hold, goal);
                    case Until::Uc: return untilSet(Mod::Xc, hold, goal);
                    case Until::Sg: return untilSet(Mod::Yg, hold, goal);
                    case Until::Sc: return untilSet(Mod::Yc, hold, goal);
                }
                return goal;
            }
        }
        return PositionSet(n);
    }
};

}  // namespace

PositionSet Evaluator::eval(const DataWord& w, const Environment& env) const {
    Run run(w, ops_, slots_);
    for (const auto& [name, slot] : topVars_) {
        auto it = env.find(name);
        if (it == env.end()) throw InputError("unbound variable '" + name + "'");
        if (it->second.universe() != w.size()) throw InputError("environment set has wrong universe for '" + name + "'");
        run.assign(slot, it->second);
    }
    return run.ev(root_);
}

bool Evaluator::models(const DataWord& w) const {
    if (w.empty()) return false;
    return eval(w).test(0);
}

PositionSet eval(const DataWord& w, const Formula& f, const Environment& env) { return Evaluator(f).eval(w, env); }

bool models(const DataWord& w, const Formula& f) { return Evaluator(f).models(w); }

}  // namespace mudw
