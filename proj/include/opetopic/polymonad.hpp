#pragma once
#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tree.hpp"

namespace opetopic {

inline constexpr int max_level = 3;

// ---- small constructors for the first levels -------------------------------

inline Op linear(int k) { return chain(k); }

inline Op planar_leaf() { return bare(2, star()); }

inline Op planar_node(std::vector<Op> children) {
    Op d = linear((int)children.size());
    return node(2, d, std::move(children));
}

inline Op corolla(int k) { return planar_node(std::vector<Op>(k, planar_leaf())); }

inline Op trunk() { return corolla(0); }

// "|" is a leaf, "(...)" a vertex whose inputs are listed inside.
inline Op parse_planar(const std::string& s) {
    size_t i = 0;
    std::function<Op()> go = [&]() -> Op {
        while (i < s.size() && s[i] == ' ') ++i;
        if (i >= s.size()) throw input_error("unexpected end of planar tree");
        if (s[i] == '|') {
            ++i;
            return planar_leaf();
        }
        if (s[i] != '(') throw input_error(std::string("unexpected character '") + s[i] + "' in planar tree");
        ++i;
        std::vector<Op> ch;
        while (true) {
            while (i < s.size() && s[i] == ' ') ++i;
            if (i >= s.size()) throw input_error("unbalanced planar tree");
            if (s[i] == ')') {
                ++i;
                break;
            }
            ch.push_back(go());
        }
        return planar_node(std::move(ch));
    };
    Op t = go();
    while (i < s.size() && s[i] == ' ') ++i;
    if (i != s.size()) throw input_error("trailing characters in planar tree");
    return t;
}

inline std::string planar_string(const Op& t) {
    if (t->level != 2) throw input_error("not a planar tree");
    if (t->bare()) return "|";
    std::string s = "(";
    for (const Op& c : t->children) s += planar_string(c);
    return s + ")";
}

// Readable notation for any level: "*", L<k>, planar strings, and
// {deco: children} for level 3.
inline std::string show(const Op& o) {
    if (o->level == 0) return "*";
    if (o->level == 1) return "L" + std::to_string(o->nvert);
    if (o->level == 2) return planar_string(o);
    if (o->bare()) return "|" + show(o->colour);
    std::string s = "{" + show(o->deco);
    if (!o->children.empty()) {
        s += ":";
        for (size_t k = 0; k < o->children.size(); ++k) s += (k ? "," : "") + show(o->children[k]);
    }
    return s + "}";
}

// ---- enumeration -----------------------------------------------------------

// Size of an operation: sum over vertices of 1 + size(decoration); a bare
// operation has the size of its colour. Level-1 size is the vertex count,
// level-2 size is vertices plus the sum of arities.
class Enumerator {
public:
    Enumerator(int level, int max_size) : level_(level), max_(max_size) {
        if (level < 0) throw input_error("negative level");
        if (level > 0) lower_ = std::make_unique<Enumerator>(level - 1, max_size);
    }

    int level() const { return level_; }
    int max_size() const { return max_; }
    Enumerator& lower() { return *lower_; }

    const std::vector<Op>& all() {
        if (done_) return all_;
        done_ = true;
        if (level_ == 0) {
            all_ = {star()};
            return all_;
        }
        std::map<std::string, Op> cols;
        for (const Op& d : lower_->all()) cols.emplace(target(d)->key, target(d));
        for (const Op& c : edge_colours()) cols.emplace(c->key, c);
        std::vector<Op> out;
        for (auto& [k, c] : cols) {
            if (op_size(c) <= max_) out.push_back(bare(level_, c));
            for (int s = 1; s <= max_; ++s)
                for (const Op& t : trees(c, s)) out.push_back(t);
        }
        std::sort(out.begin(), out.end(), [](const Op& a, const Op& b) {
            int sa = op_size(a), sb = op_size(b);
            return sa != sb ? sa < sb : a->key < b->key;
        });
        all_ = std::move(out);
        return all_;
    }

    const std::vector<Op>& with_target(const Op& c) {
        if (!indexed_) {
            indexed_ = true;
            for (const Op& o : all()) by_target_[target(o)->key].push_back(o);
        }
        static const std::vector<Op> none;
        auto it = by_target_.find(c->key);
        return it == by_target_.end() ? none : it->second;
    }

    // colours of edges of level-n trees within the bound
    std::vector<Op> edge_colours() {
        if (level_ <= 2) return {star()};
        std::vector<Op> out;
        for (const Op& c : lower_->lower().all())
            if (op_size(c) <= max_) out.push_back(c);
        return out;
    }

    // trees with a given root colour and exact size; size 0 is the bare edge
    const std::vector<Op>& trees(const Op& colour, int s) {
        std::string key = colour->key + "#" + std::to_string(s);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<Op> out;
        if (s == 0) {
            out.push_back(bare(level_, colour));
        } else {
            for (const Op& d : lower_->with_target(colour)) {
                int ds = d->level == 0 ? 0 : d->size;
                if (ds > s - 1) continue;
                int r = s - 1 - ds;
                int k = arity(d);
                std::vector<Op> ch(k);
                std::function<void(int, int)> fill = [&](int pos, int left) {
                    if (pos == k) {
                        if (left == 0) out.push_back(node(level_, d, ch));
                        return;
                    }
                    for (int part = 0; part <= left; ++part) {
                        if (pos == k - 1 && part != left) continue;
                        for (const Op& c : trees(source(d, pos), part)) {
                            ch[pos] = c;
                            fill(pos + 1, left - part);
                        }
                    }
                };
                if (k == 0) {
                    if (r == 0) out.push_back(node(level_, d, {}));
                } else {
                    fill(0, r);
                }
            }
        }
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    int level_;
    int max_;
    std::unique_ptr<Enumerator> lower_;
    bool done_ = false;
    bool indexed_ = false;
    std::vector<Op> all_;
    std::unordered_map<std::string, std::vector<Op>> by_target_;
    std::unordered_map<std::string, std::vector<Op>> memo_;
};

// operations with at most max_vertices vertices and size at most max_size
inline std::vector<Op> enumerate_ops(int level, int max_vertices, int max_size) {
    Enumerator e(level, max_size);
    std::vector<Op> out;
    for (const Op& o : e.all())
        if (arity(o) <= max_vertices || o->level == 0) out.push_back(o);
    return out;
}

// ---- the monad interface and the opetopic levels ---------------------------

template <class O>
struct Grafted {
    O op;
    // for each fibre element of op: {0, host position} or {1, guest position}
    std::vector<std::pair<int, int>> origin;

    int position_of(int side, int pos) const {
        for (int q = 0; q < (int)origin.size(); ++q)
            if (origin[q].first == side && origin[q].second == pos) return q;
        return -1;
    }
};

template <class M>
concept PolynomialMonad = requires(const M& m, const typename M::op_type& o, const typename M::colour_type& c,
                                   int k) {
    { m.arity(o) } -> std::convertible_to<int>;
    { m.source(o, k) } -> std::convertible_to<typename M::colour_type>;
    { m.target(o) } -> std::convertible_to<typename M::colour_type>;
    { m.unit(c) } -> std::convertible_to<typename M::op_type>;
    { m.substitute(o, k, o) } -> std::convertible_to<Grafted<typename M::op_type>>;
    { m.key(o) } -> std::convertible_to<std::string>;
    { m.colour_key(c) } -> std::convertible_to<std::string>;
};

// Id^{+n}: colours are operations of level n-1, operations are level-n trees.
struct OpetopicLevel {
    using op_type = Op;
    using colour_type = Op;
    int n = 0;

    explicit OpetopicLevel(int level) : n(level) {
        if (level < 0) throw input_error("negative level");
        if (level > max_level) throw capability_error("level above the configured maximum");
    }

    int arity(const Op& o) const { return opetopic::arity(o); }
    Op source(const Op& o, int k) const { return opetopic::source(o, k); }
    Op target(const Op& o) const { return opetopic::target(o); }
    Op unit(const Op& c) const {
        if (c->level != std::max(n - 1, 0)) throw input_error("unknown colour");
        return opetopic::unit(n, c);
    }
    Grafted<Op> substitute(const Op& h, int pos, const Op& g) const {
        auto c = opetopic::substitute(n, h, pos, g);
        Grafted<Op> out{c.op, {}};
        for (auto [j, f] : c.origin) out.origin.push_back(j == pos ? std::pair{1, f} : std::pair{0, j});
        return out;
    }
    std::string key(const Op& o) const { return o->key; }
    std::string colour_key(const Op& c) const { return c->key; }
};

inline OpetopicLevel opetopic_level(int n) { return OpetopicLevel(n); }

inline Op unit_op(const OpetopicLevel& m, const Op& c) { return m.unit(c); }

struct Evaluation {
    Op op;
    std::vector<int> leaf_of;
};

inline Evaluation evaluate(const Op& tree) {
    if (tree->level == 0) throw domain_error("level 0 has no trees");
    return {tree->target, tree->leaf_of};
}

inline Op insert(int level, const Op& host, int vertex, const Op& guest) {
    return substitute(level, host, vertex, guest).op;
}

// ---- law checking ----------------------------------------------------------

struct LawReport {
    long unit_checks = 0;
    long sequential_checks = 0;
    long parallel_checks = 0;
    long counterexample_count = 0;
    std::vector<std::string> counterexamples;
    bool pass() const { return counterexample_count == 0; }
    void fail(std::string what) {
        ++counterexample_count;
        if (counterexamples.size() < 20) counterexamples.push_back(std::move(what));
    }
    void merge(const LawReport& o) {
        unit_checks += o.unit_checks;
        sequential_checks += o.sequential_checks;
        parallel_checks += o.parallel_checks;
        counterexample_count += o.counterexample_count;
        for (auto& c : o.counterexamples)
            if (counterexamples.size() < 20) counterexamples.push_back(c);
    }
};

// Exhaustive check of unit laws and of sequential and parallel
// associativity on every composable configuration drawn from ops.
template <PolynomialMonad M>
LawReport check_monad_laws(const M& m, const std::vector<typename M::op_type>& ops) {
    using O = typename M::op_type;
    LawReport r;
    std::unordered_map<std::string, std::vector<const O*>> by_target;
    for (const O& o : ops) by_target[m.colour_key(m.target(o))].push_back(&o);
    auto guests = [&](const auto& colour) -> const std::vector<const O*>& {
        static const std::vector<const O*> none;
        auto it = by_target.find(m.colour_key(colour));
        return it == by_target.end() ? none : it->second;
    };
    auto eq = [&](const O& a, const O& b) { return m.key(a) == m.key(b); };

    for (const O& g : ops) {
        auto c = m.target(g);
        O u = m.unit(c);
        ++r.unit_checks;
        if (m.arity(u) != 1 || m.colour_key(m.source(u, 0)) != m.colour_key(c) ||
            m.colour_key(m.target(u)) != m.colour_key(c))
            r.fail("unit shape at " + m.colour_key(c));
        auto left = m.substitute(u, 0, g);
        if (!eq(left.op, g)) r.fail("left unit fails for " + m.key(g));
        for (int p = 0; p < m.arity(g); ++p) {
            ++r.unit_checks;
            auto right = m.substitute(g, p, m.unit(m.source(g, p)));
            if (!eq(right.op, g)) r.fail("right unit fails for " + m.key(g) + " at " + std::to_string(p));
        }
    }
    for (const O& h : ops) {
        int a = m.arity(h);
        for (int p = 0; p < a; ++p) {
            for (const O* g : guests(m.source(h, p))) {
                auto hg = m.substitute(h, p, *g);
                if (m.colour_key(m.target(hg.op)) != m.colour_key(m.target(h)))
                    r.fail("substitution changes the target: " + m.key(h) + " at " + std::to_string(p));
                for (int q = 0; q < m.arity(*g); ++q) {
                    int qq = hg.position_of(1, q);
                    for (const O* k : guests(m.source(*g, q))) {
                        ++r.sequential_checks;
                        auto lhs = m.substitute(hg.op, qq, *k);
                        auto gk = m.substitute(*g, q, *k);
                        auto rhs = m.substitute(h, p, gk.op);
                        if (!eq(lhs.op, rhs.op))
                            r.fail("associativity: " + m.key(h) + " @" + std::to_string(p) + " " + m.key(*g) + " @" +
                                   std::to_string(q) + " " + m.key(*k));
                    }
                }
                for (int p2 = p + 1; p2 < a; ++p2) {
                    int pp2 = hg.position_of(0, p2);
                    for (const O* g2 : guests(m.source(h, p2))) {
                        ++r.parallel_checks;
                        auto lhs = m.substitute(hg.op, pp2, *g2);
                        auto hg2 = m.substitute(h, p2, *g2);
                        auto rhs = m.substitute(hg2.op, hg2.position_of(0, p), *g);
                        if (!eq(lhs.op, rhs.op))
                            r.fail("interchange: " + m.key(h) + " @" + std::to_string(p) + "," + std::to_string(p2));
                    }
                }
            }
        }
    }
    return r;
}

// ---- counting --------------------------------------------------------------

// ordered rooted trees with v nodes, by the forest recursion
inline std::uint64_t ordered_tree_count(int v) {
    if (v <= 0) return 0;
    std::vector<std::uint64_t> tree(v + 1, 0), forest(v + 1, 0);
    forest[0] = 1;
    for (int n = 1; n <= v; ++n) {
        tree[n] = forest[n - 1];
        for (int k = 1; k <= n; ++k) forest[n] += tree[k] * forest[n - k];
    }
    return tree[v];
}

inline std::uint64_t catalan(int n) {
    std::uint64_t c = 1;
    for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
    return c;
}

}  // namespace opetopic
