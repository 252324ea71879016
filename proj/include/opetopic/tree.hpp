#pragma once
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace opetopic {

// An operation of Id^{+level}. Level 0 is the single operation "*". For
// level n > 0 the value is a tree: either a bare edge carrying a colour
// (an operation of level n-2, or "*" when n <= 2) or a vertex decorated by
// an operation of level n-1 with one child per element of its fibre.
struct Node;
using Op = std::shared_ptr<const Node>;

struct Node {
    int level = 0;
    Op deco;
    Op colour;
    std::vector<Op> children;

    // composite one level down, and for each of its fibre elements the
    // depth-first index of the leaf of this tree it comes from
    Op target;
    std::vector<int> leaf_of;

    std::vector<Op> vdecos;
    std::string key;
    int nvert = 0;
    int nleaves = 0;
    int size = 0;

    bool bare() const { return level > 0 && !deco; }
};

struct Composite {
    Op op;
    // for each fibre element of op: (guest index, fibre element of that guest)
    std::vector<std::pair<int, int>> origin;
};

inline const Op& star() {
    static const Op s = [] {
        auto n = std::make_shared<Node>();
        n->level = 0;
        n->key = "*";
        n->nvert = 1;
        n->nleaves = 1;
        return Op(n);
    }();
    return s;
}

inline bool same(const Op& a, const Op& b) { return a == b || a->key == b->key; }

inline int arity(const Op& o) { return o->level == 0 ? 1 : o->nvert; }

inline Op source(const Op& o, int k) {
    if (o->level == 0) return star();
    if (k < 0 || k >= o->nvert) throw input_error("fibre position out of range");
    return o->vdecos[k];
}

inline Op target(const Op& o) { return o->level == 0 ? star() : o->target; }

// colour of the root edge of a level >= 1 tree
inline Op root_colour(const Op& o) { return o->colour; }

inline int colour_level(int level) { return level <= 2 ? 0 : level - 2; }

inline Op unit(int level, const Op& colour);
inline Op node(int level, const Op& deco, std::vector<Op> children);
inline Composite compose(int level, const Op& d, const std::vector<Op>& guests);

inline Op make_bare(int level, const Op& colour) {
    auto n = std::make_shared<Node>();
    n->level = level;
    n->colour = colour;
    n->key = "|" + colour->key;
    n->nleaves = 1;
    n->target = unit(level - 1, colour);
    n->leaf_of = {0};
    return n;
}

inline Op bare(int level, const Op& colour) {
    if (level < 1) throw input_error("bare edge needs level >= 1");
    if (colour->level != colour_level(level)) throw input_error("bare edge colour has the wrong level");
    if (level <= 2 && colour->level == 0) {
        // the only colour below level 3; share the edge
        thread_local Op edges[3];
        if (!edges[level]) edges[level] = make_bare(level, star());
        return edges[level];
    }
    return make_bare(level, colour);
}

// the level-1 operation with k vertices
inline const Op& chain(int k) {
    thread_local std::vector<Op> memo;
    while ((int)memo.size() <= k) {
        if (memo.empty())
            memo.push_back(bare(1, star()));
        else
            memo.push_back(node(1, star(), {memo.back()}));
    }
    return memo[k];
}

inline Op node(int level, const Op& deco, std::vector<Op> children) {
    if (level < 1 || deco->level != level - 1) throw coherence_error("decoration has the wrong level");
    if ((int)children.size() != arity(deco)) throw coherence_error("child count differs from decoration arity");
    auto n = std::make_shared<Node>();
    n->level = level;
    n->deco = deco;
    n->colour = target(deco);
    n->key.reserve(64);
    n->key = "(" + deco->key + ":";
    n->nvert = 1;
    n->size = 1 + (deco->level == 0 ? 0 : deco->size);
    n->vdecos.push_back(deco);
    std::vector<Op> ts;
    std::vector<int> offset;
    for (int k = 0; k < (int)children.size(); ++k) {
        const Op& c = children[k];
        if (c->level != level) throw coherence_error("child has the wrong level");
        if (!same(c->colour, source(deco, k)))
            throw coherence_error("edge " + std::to_string(k) + " colour " + c->colour->key +
                                  " differs from source " + source(deco, k)->key);
        if (k) n->key += ",";
        n->key += c->key;
        offset.push_back(n->nleaves);
        n->nleaves += c->nleaves;
        n->nvert += c->nvert;
        n->size += c->size;
        n->vdecos.insert(n->vdecos.end(), c->vdecos.begin(), c->vdecos.end());
        ts.push_back(c->target);
    }
    n->key += ")";
    auto comp = compose(level - 1, deco, ts);
    n->target = comp.op;
    for (auto [j, f] : comp.origin) n->leaf_of.push_back(offset[j] + children[j]->leaf_of[f]);
    n->children = std::move(children);
    return n;
}

inline Op unit(int level, const Op& colour) {
    if (level == 0) return star();
    if (colour->level != level - 1) throw input_error("unit colour has the wrong level");
    std::vector<Op> ch;
    for (int k = 0; k < arity(colour); ++k) ch.push_back(bare(level, source(colour, k)));
    return node(level, colour, std::move(ch));
}

// Substitute guests[j] for the j-th vertex of d (depth-first order).
inline Composite compose(int level, const Op& d, const std::vector<Op>& guests) {
    Composite out;
    if (level == 0) {
        if (guests.size() != 1 || guests[0]->level != 0) throw substitution_error("level 0 takes one guest");
        out.op = star();
        out.origin = {{0, 0}};
        return out;
    }
    if ((int)guests.size() != arity(d)) throw substitution_error("guest count differs from vertex count");
    if (level == 1) {
        // chains compose by concatenation
        int total = 0;
        for (int j = 0; j < (int)guests.size(); ++j) {
            if (guests[j]->level != 1) throw substitution_error("guest has the wrong level");
            for (int g = 0; g < guests[j]->nvert; ++g) out.origin.push_back({j, g});
            total += guests[j]->nvert;
        }
        out.op = chain(total);
        return out;
    }
    for (int j = 0; j < (int)guests.size(); ++j) {
        if (guests[j]->level != level) throw substitution_error("guest has the wrong level");
        if (!same(target(guests[j]), source(d, j)))
            throw substitution_error("guest " + std::to_string(j) + " evaluates to " + target(guests[j])->key +
                                     " but the vertex is decorated " + source(d, j)->key);
    }
    std::function<Op(const Op&, int)> build = [&](const Op& dn, int base) -> Op {
        if (dn->bare()) return dn;
        const Op& g = guests[base];
        std::vector<int> fib_of_leaf(g->nleaves, -1);
        for (int f = 0; f < (int)g->leaf_of.size(); ++f) fib_of_leaf[g->leaf_of[f]] = f;
        std::vector<int> cbase(dn->children.size());
        int b = base + 1;
        for (size_t k = 0; k < dn->children.size(); ++k) {
            cbase[k] = b;
            b += dn->children[k]->nvert;
        }
        int leafctr = 0, gidx = 0;
        std::function<Op(const Op&)> copy = [&](const Op& gn) -> Op {
            if (gn->bare()) {
                int f = fib_of_leaf[leafctr++];
                return build(dn->children[f], cbase[f]);
            }
            out.origin.push_back({base, gidx++});
            std::vector<Op> ch;
            ch.reserve(gn->children.size());
            for (const Op& c : gn->children) ch.push_back(copy(c));
            return node(level, gn->deco, std::move(ch));
        };
        return copy(g);
    };
    out.op = build(d, 0);
    return out;
}

// Plus-monad substitution of guest into vertex pos of host.
inline Composite substitute(int level, const Op& host, int pos, const Op& guest) {
    if (level == 0) return compose(0, host, {guest});
    if (pos < 0 || pos >= arity(host)) throw input_error("vertex out of range");
    std::vector<Op> gs;
    for (int k = 0; k < arity(host); ++k) gs.push_back(k == pos ? guest : unit(level, source(host, k)));
    return compose(level, host, gs);
}

inline int op_size(const Op& o) {
    if (o->level == 0) return 0;
    if (o->bare()) return o->colour->level == 0 ? 0 : op_size(o->colour);
    return o->size;
}

// Depth-first view of a tree with explicit edges. Edge 0 is the root edge;
// the child edges of a vertex follow it, each followed by its subtree.
struct Shape {
    struct Vertex {
        Op node;
        int parent = -1;
        int slot = -1;
        int out = -1;
        std::vector<int> in;
        std::vector<int> kids;  // vertex id above each input, -1 for a leaf
    };
    struct Edge {
        Op colour;
        int lower = -1;
        int slot = -1;
        int upper = -1;
    };
    std::vector<Vertex> v;
    std::vector<Edge> e;
    std::vector<int> leaves;  // edge ids in planar order

    bool below(int a, int b) const {  // a strictly below b
        for (int x = v[b].parent; x >= 0; x = v[x].parent)
            if (x == a) return true;
        return false;
    }
    bool comparable(int a, int b) const { return a == b || below(a, b) || below(b, a); }
    bool edge_above(int x, int y) const {  // edge x at or above edge y
        for (int cur = x;;) {
            if (cur == y) return true;
            int l = e[cur].lower;
            if (l < 0) return false;
            cur = v[l].out;
        }
    }
};

inline Shape shape_of(const Op& t) {
    Shape s;
    if (t->level == 0) {
        Shape::Vertex vx;
        vx.node = t;
        s.v.push_back(vx);
        return s;
    }
    std::function<void(const Op&, int, int)> walk = [&](const Op& n, int lower, int slot) {
        int eid = (int)s.e.size();
        s.e.push_back({n->colour, lower, slot, -1});
        if (n->bare()) {
            s.leaves.push_back(eid);
            return;
        }
        int vid = (int)s.v.size();
        s.e[eid].upper = vid;
        Shape::Vertex vx;
        vx.node = n;
        vx.out = eid;
        if (lower >= 0) {
            vx.parent = lower;
            vx.slot = slot;
        }
        s.v.push_back(vx);
        for (int k = 0; k < (int)n->children.size(); ++k) {
            int child_edge = (int)s.e.size();
            s.v[vid].in.push_back(child_edge);
            int child_vertex = n->children[k]->bare() ? -1 : (int)s.v.size();
            s.v[vid].kids.push_back(child_vertex);
            walk(n->children[k], vid, k);
        }
    };
    walk(t, -1, -1);
    return s;
}

// Rebuild a tree bottom-up while visiting vertices in depth-first order.
// fn(vertex id, node, rebuilt children) returns the replacement node.
inline Op rebuild(const Op& t, const std::function<Op(int, const Op&, std::vector<Op>)>& fn) {
    int counter = 0;
    std::function<Op(const Op&)> go = [&](const Op& n) -> Op {
        if (n->bare()) return n;
        int id = counter++;
        std::vector<Op> ch;
        for (const Op& c : n->children) ch.push_back(go(c));
        return fn(id, n, std::move(ch));
    };
    return go(t);
}

}  // namespace opetopic
