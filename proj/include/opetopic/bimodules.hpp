#pragma once
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polymonad.hpp"

namespace opetopic {

using VSet = std::set<int>;

struct WhiteTree {
    int level = 0;
    Op tree;
    VSet whites;

    std::string key() const {
        std::string k = tree->key + "/";
        for (int w : whites) k += std::to_string(w) + ",";
        return k;
    }
    bool operator==(const WhiteTree& o) const { return level == o.level && key() == o.key(); }
};

inline int vertex_count(const Op& t) { return t->level == 0 ? 1 : t->nvert; }

inline VSet all_vertices(const Op& t) {
    VSet s;
    for (int i = 0; i < vertex_count(t); ++i) s.insert(i);
    return s;
}

inline void check_white_tree(const WhiteTree& wt) {
    if (wt.tree->level != wt.level) throw input_error("white tree level mismatch");
    for (int w : wt.whites)
        if (w < 0 || w >= vertex_count(wt.tree)) throw input_error("white vertex out of range");
}

struct DownResult {
    WhiteTree down;
    std::map<int, int> correspondence;
};

namespace detail {

// b_0 together with, for each of its leaves, the edge of b it is.
struct Trunk0 {
    Op b0;
    std::vector<int> leaf_edge;
    Shape shape;
};

inline Trunk0 black_root_part(const WhiteTree& wt) {
    Trunk0 r;
    r.shape = shape_of(wt.tree);
    const Shape& s = r.shape;
    std::function<Op(int)> go = [&](int e) -> Op {
        int u = s.e[e].upper;
        if (u < 0 || wt.whites.count(u)) {
            r.leaf_edge.push_back(e);
            return bare(wt.level, s.e[e].colour);
        }
        std::vector<Op> ch;
        for (int c : s.v[u].in) ch.push_back(go(c));
        return node(wt.level, s.v[u].node->deco, std::move(ch));
    };
    r.b0 = go(0);
    return r;
}

}  // namespace detail

inline DownResult down(const WhiteTree& wt) {
    if (wt.level < 1) throw domain_error("the down construction needs level >= 1");
    check_white_tree(wt);
    auto t0 = detail::black_root_part(wt);
    const Shape& s = t0.shape;
    DownResult r;
    r.down.level = wt.level - 1;
    r.down.tree = t0.b0->target;
    const auto& perm = t0.b0->leaf_of;
    std::map<int, int> fibre_of_edge;
    for (int f = 0; f < (int)perm.size(); ++f) {
        int e = t0.leaf_edge[perm[f]];
        fibre_of_edge[e] = f;
        if (s.e[e].upper >= 0) r.down.whites.insert(f);
    }
    for (int w : wt.whites) {
        int low = w;
        for (int x = s.v[w].parent; x >= 0; x = s.v[x].parent)
            if (wt.whites.count(x)) low = x;
        r.correspondence[w] = fibre_of_edge.at(s.v[low].out);
    }
    return r;
}

inline bool has_comparable_pair(const WhiteTree& wt) {
    if (wt.level == 0) return false;
    Shape s = shape_of(wt.tree);
    for (int w : wt.whites)
        for (int x = s.v[w].parent; x >= 0; x = s.v[x].parent)
            if (wt.whites.count(x)) return true;
    return false;
}

inline bool is_m_dimensional(const WhiteTree& wt, int m) {
    if (m < 0 || m > wt.level) throw input_error("dimension must lie between 0 and the level");
    check_white_tree(wt);
    WhiteTree cur = wt;
    for (int i = 0; i < wt.level - m; ++i) {
        if (has_comparable_pair(cur)) return false;
        cur = down(cur).down;
    }
    return cur.whites == all_vertices(cur.tree);
}

// The direct descriptions for m = 0, n-1, n. For m = n-1 a path is read
// as: no root-to-vertex path meets two whites, every root-to-leaf path
// meets one.
inline bool dimension_by_paths(const WhiteTree& wt, int m) {
    int n = wt.level;
    if (m == n) return wt.whites == all_vertices(wt.tree);
    if (m == 0) return wt.whites.size() == 1;
    if (m != n - 1) throw input_error("path description only for m in {0, n-1, n}");
    Shape s = shape_of(wt.tree);
    if (has_comparable_pair(wt)) return false;
    for (int l : s.leaves) {
        int count = 0;
        for (int x = s.e[l].lower; x >= 0; x = s.v[x].parent) count += wt.whites.count(x);
        if (count != 1) return false;
    }
    return true;
}

inline bool black_conditions(const WhiteTree& wt) {
    if (wt.level == 0) return true;
    Shape s = shape_of(wt.tree);
    for (int v = 0; v < (int)s.v.size(); ++v) {
        if (wt.whites.count(v)) continue;
        if (s.v[v].in.size() == 1) return false;
        if (s.v[v].parent >= 0 && !wt.whites.count(s.v[v].parent)) return false;
    }
    return true;
}

inline bool in_Bmn(const WhiteTree& wt, int m) { return is_m_dimensional(wt, m) && black_conditions(wt); }

struct BimodOp {
    int m = 0;
    WhiteTree wt;
};

// ---- normalisation and the monad Bimod_{m,n} -------------------------------

struct Normalised {
    Op tree;
    VSet whites;
    std::vector<int> new_id;  // old vertex -> new vertex, -1 if removed
};

// Contract every maximal black component to one vertex decorated by its
// composite and drop unary black vertices.
inline Normalised normalise(int n, const Op& tree, const VSet& whites) {
    Normalised r;
    if (n == 0) {
        r.tree = tree;
        r.whites = whites;
        r.new_id = {0};
        return r;
    }
    Shape s = shape_of(tree);
    r.new_id.assign(s.v.size(), -1);
    int counter = 0;
    std::function<Op(int)> edge;
    std::function<Op(int)> vertex = [&](int x) -> Op {
        const auto& vx = s.v[x];
        if (whites.count(x)) {
            r.new_id[x] = counter++;
            std::vector<Op> ch;
            for (int c : vx.in) ch.push_back(edge(c));
            return node(n, vx.node->deco, std::move(ch));
        }
        std::vector<int> comp, leaf_edges;
        std::function<Op(int)> grab = [&](int y) -> Op {
            comp.push_back(y);
            std::vector<Op> ch;
            for (int c : s.v[y].in) {
                int u = s.e[c].upper;
                if (u >= 0 && !whites.count(u)) {
                    ch.push_back(grab(u));
                } else {
                    leaf_edges.push_back(c);
                    ch.push_back(bare(n, s.e[c].colour));
                }
            }
            return node(n, s.v[y].node->deco, std::move(ch));
        };
        Op ctree = grab(x);
        Op d;
        std::vector<int> perm;
        if (comp.size() == 1) {
            d = vx.node->deco;
            for (int k = 0; k < (int)vx.in.size(); ++k) perm.push_back(k);
        } else {
            d = ctree->target;
            perm = ctree->leaf_of;
        }
        if (arity(d) == 1) {
            if (!same(d, unit(n - 1, target(d))))
                throw invariant_error("normalisation met a unary black vertex that is not a unit");
            return edge(leaf_edges[perm[0]]);
        }
        int id = counter++;
        for (int y : comp) r.new_id[y] = id;
        std::vector<Op> ch;
        for (int f = 0; f < arity(d); ++f) ch.push_back(edge(leaf_edges[perm[f]]));
        return node(n, d, std::move(ch));
    };
    edge = [&](int e) -> Op {
        int u = s.e[e].upper;
        if (u < 0) return bare(n, s.e[e].colour);
        return vertex(u);
    };
    r.tree = edge(0);
    for (int w : whites) r.whites.insert(r.new_id[w]);
    return r;
}

struct BimodComposite {
    BimodOp op;
    std::map<int, int> host_whites;   // old id -> new id
    std::map<int, int> guest_whites;  // old id -> new id
};

inline BimodComposite compose_bimod(int m, int n, const BimodOp& host, int white, const BimodOp& guest) {
    if (!host.wt.whites.count(white)) throw input_error("insertion vertex is not white");
    if (host.wt.level != n || guest.wt.level != n) throw input_error("level mismatch");
    auto c = substitute(n, host.wt.tree, white, guest.wt.tree);
    VSet w;
    for (int q = 0; q < (int)c.origin.size(); ++q) {
        auto [j, f] = c.origin[q];
        if (n == 0 ? guest.wt.whites.count(0) : (j == white ? guest.wt.whites.count(f) : host.wt.whites.count(j)))
            w.insert(q);
    }
    auto nz = normalise(n, c.op, w);
    BimodComposite r;
    r.op = {m, {n, nz.tree, nz.whites}};
    for (int q = 0; q < (int)c.origin.size(); ++q) {
        auto [j, f] = c.origin[q];
        if (!w.count(q)) continue;
        if (n == 0 || j == white)
            r.guest_whites[n == 0 ? 0 : f] = nz.new_id[q];
        else
            r.host_whites[j] = nz.new_id[q];
    }
    return r;
}

struct BimodMonad {
    using op_type = WhiteTree;
    using colour_type = Op;
    int m = 0, n = 0;

    BimodMonad(int m_, int n_) : m(m_), n(n_) {
        if (m < 0 || m > n) throw input_error("need 0 <= m <= n");
        if (n > max_level) throw capability_error("level above the configured maximum");
    }

    static int white_at(const WhiteTree& o, int k) {
        auto it = o.whites.begin();
        std::advance(it, k);
        return *it;
    }
    int arity(const WhiteTree& o) const { return (int)o.whites.size(); }
    Op source(const WhiteTree& o, int k) const { return opetopic::source(o.tree, white_at(o, k)); }
    Op target(const WhiteTree& o) const { return opetopic::target(o.tree); }
    WhiteTree unit(const Op& c) const { return {n, opetopic::unit(n, c), {0}}; }
    Grafted<WhiteTree> substitute(const WhiteTree& h, int pos, const WhiteTree& g) const {
        auto c = compose_bimod(m, n, {m, h}, white_at(h, pos), {m, g});
        Grafted<WhiteTree> out{c.op.wt, {}};
        std::map<int, std::pair<int, int>> from;
        int k = 0;
        for (int w : h.whites) {
            if (w != white_at(h, pos)) from[c.host_whites.at(w)] = {0, k};
            ++k;
        }
        k = 0;
        for (int w : g.whites) from[c.guest_whites.at(w)] = {1, k++};
        for (int w : out.op.whites) out.origin.push_back(from.at(w));
        return out;
    }
    std::string key(const WhiteTree& o) const { return o.key(); }
    std::string colour_key(const Op& c) const { return c->key; }
};

// all subsets of the vertices of t
inline std::vector<VSet> vertex_subsets(const Op& t) {
    int nv = vertex_count(t);
    std::vector<VSet> out;
    for (long mask = 0; mask < (1L << nv); ++mask) {
        VSet s;
        for (int i = 0; i < nv; ++i)
            if (mask >> i & 1) s.insert(i);
        out.push_back(s);
    }
    return out;
}

inline std::vector<WhiteTree> enumerate_Bmn(int m, int n, int max_vertices, int max_size) {
    std::vector<WhiteTree> out;
    for (const Op& t : enumerate_ops(n, max_vertices, max_size))
        for (auto& w : vertex_subsets(t)) {
            WhiteTree wt{n, t, w};
            if (in_Bmn(wt, m)) out.push_back(wt);
        }
    return out;
}

// ---- splitting the complement of an (m-1)-dimensional subset ---------------

// With strict unset, whites comparable to no vertex of V are left in neither part.
inline std::pair<VSet, VSet> split_complement(const BimodOp& op, const VSet& V, bool strict = true) {
    const WhiteTree& wt = op.wt;
    int m = op.m, n = wt.level;
    if (m < 1) throw precondition_error("splitting needs m >= 1");
    for (int v : V)
        if (!wt.whites.count(v)) throw precondition_error("V is not contained in the whites");
    if (!is_m_dimensional({n, wt.tree, V}, m - 1)) throw precondition_error("V is not (m-1)-dimensional");
    VSet minus, plus;
    if (m == n) {
        Shape s = shape_of(wt.tree);
        for (int w : wt.whites) {
            if (V.count(w)) continue;
            bool lo = false, hi = false;
            for (int v : V) {
                if (s.below(w, v)) lo = true;
                if (s.below(v, w)) hi = true;
            }
            if (lo && hi) throw precondition_error("a white vertex lies both above and below V");
            if (!lo && !hi) {
                if (strict) throw precondition_error("a white vertex is comparable to no vertex of V");
                continue;
            }
            (lo ? minus : plus).insert(w);
        }
        return {minus, plus};
    }
    auto d = down(wt);
    VSet Vd;
    for (int v : V) Vd.insert(d.correspondence.at(v));
    auto [mi, pl] = split_complement({m, d.down}, Vd, strict);
    for (int w : wt.whites) {
        if (V.count(w)) continue;
        int x = d.correspondence.at(w);
        if (mi.count(x)) minus.insert(w);
        if (pl.count(x)) plus.insert(w);
    }
    return {minus, plus};
}

// ---- unary insertions and trunks -------------------------------------------

struct Insertion {
    Op tree;
    std::vector<int> new_of_old;  // old vertex -> new vertex
    std::vector<int> inserted;    // new vertex for each requested edge, in request order
};

// Subdivide the given edges (repetitions allowed) by unit-decorated unary vertices.
inline Insertion insert_unaries(int level, const Op& tree, const std::vector<int>& edges) {
    Shape s = shape_of(tree);
    for (int e : edges)
        if (e < 0 || e >= (int)s.e.size()) throw input_error("edge position out of range");
    Insertion r;
    r.new_of_old.assign(s.v.size(), -1);
    r.inserted.assign(edges.size(), -1);
    int counter = 0;
    std::function<Op(int)> edge = [&](int e) -> Op {
        std::vector<int> here;
        for (int i = 0; i < (int)edges.size(); ++i)
            if (edges[i] == e) {
                here.push_back(i);
                r.inserted[i] = counter++;
            }
        Op up;
        int u = s.e[e].upper;
        if (u < 0) {
            up = bare(level, s.e[e].colour);
        } else {
            r.new_of_old[u] = counter++;
            std::vector<Op> ch;
            for (int c : s.v[u].in) ch.push_back(edge(c));
            up = node(level, s.v[u].node->deco, std::move(ch));
        }
        for (size_t k = 0; k < here.size(); ++k) up = node(level, unit(level - 1, s.e[e].colour), {up});
        return up;
    };
    r.tree = edge(0);
    return r;
}

struct TrunkInsertion {
    WhiteTree wt;
    std::vector<int> new_of_old;  // for vertices kept from the input (whites and what lies above them)
    std::vector<int> trunks;      // new vertex of the trunk for each requested position
};

// The trunk construction: contract b_0 to one black vertex decorated by
// b-down with unit vertices on the chosen edges, and put a white trunk
// decorated by the free-living edge above each new unit vertex.
inline TrunkInsertion insert_trunks(const WhiteTree& wt, const std::vector<int>& positions) {
    check_white_tree(wt);
    TrunkInsertion r;
    int nv = vertex_count(wt.tree);
    if (positions.empty()) {
        r.wt = wt;
        for (int i = 0; i < nv; ++i) r.new_of_old.push_back(i);
        return r;
    }
    int n = wt.level;
    if (n < 2) throw input_error("trunk insertion needs level >= 2");
    auto t0 = detail::black_root_part(wt);
    const Shape& s = t0.shape;
    Op bd = t0.b0->target;
    const auto& perm = t0.b0->leaf_of;
    auto ins = insert_unaries(n - 1, bd, positions);
    Shape sd = shape_of(bd);
    std::vector<int> old_of_new(ins.tree->nvert, -1), pos_of_new(ins.tree->nvert, -1);
    for (int f = 0; f < (int)ins.new_of_old.size(); ++f) old_of_new[ins.new_of_old[f]] = f;
    for (int i = 0; i < (int)positions.size(); ++i) pos_of_new[ins.inserted[i]] = i;
    std::vector<Op> ch;
    r.new_of_old.assign(nv, -1);
    r.trunks.assign(positions.size(), -1);
    int offset = 1;
    for (int g = 0; g < ins.tree->nvert; ++g) {
        if (pos_of_new[g] >= 0) {
            Op c = sd.e[positions[pos_of_new[g]]].colour;
            ch.push_back(node(n, bare(n - 1, c), {}));
            r.trunks[pos_of_new[g]] = offset;
            offset += 1;
            continue;
        }
        int e = t0.leaf_edge[perm[old_of_new[g]]];
        int u = s.e[e].upper;
        if (u < 0) {
            ch.push_back(bare(n, s.e[e].colour));
            continue;
        }
        const Op& sub = s.v[u].node;
        ch.push_back(sub);
        for (int k = 0; k < sub->nvert; ++k) r.new_of_old[u + k] = offset + k;
        offset += sub->nvert;
    }
    r.wt.level = n;
    r.wt.tree = node(n, ins.tree, std::move(ch));
    for (int w : wt.whites) r.wt.whites.insert(r.new_of_old[w]);
    for (int t : r.trunks) r.wt.whites.insert(t);
    return r;
}

// ---- embeddings, pointed shapes, kappa -------------------------------------

struct Embedding {
    BimodOp op;
    VSet distinguished;
};

inline std::vector<int> leaves_not_above(const Shape& s, const VSet& V) {
    std::vector<int> out;
    for (int l : s.leaves) {
        bool above = false;
        for (int x = s.e[l].lower; x >= 0; x = s.v[x].parent)
            if (V.count(x)) above = true;
        if (!above) out.push_back(l);
    }
    return out;
}

inline WhiteTree normalised(const WhiteTree& wt, std::vector<int>* remap = nullptr) {
    auto nz = normalise(wt.level, wt.tree, wt.whites);
    if (remap) {
        for (int& x : *remap)
            if (x >= 0) x = nz.new_id[x];
    }
    return {wt.level, nz.tree, nz.whites};
}

// (b, V) in B_{m-1,n} to an element of B_{m,n} with V distinguished.
inline Embedding embed_lower(int m, int n, const WhiteTree& bv) {
    if (m < 1 || m > n || bv.level != n) throw input_error("embed_lower needs 1 <= m <= n at the tree's level");
    if (m < n - 2) throw capability_error("embedding is only constructed for n-2 <= m");
    Embedding r;
    r.op.m = m;
    if (m == n) {
        r.op.wt = {n, bv.tree, all_vertices(bv.tree)};
        r.distinguished = bv.whites;
        return r;
    }
    if (m == n - 1) {
        Shape s = shape_of(bv.tree);
        auto ins = insert_unaries(n, bv.tree, leaves_not_above(s, bv.whites));
        VSet w;
        for (int v : bv.whites) {
            w.insert(ins.new_of_old[v]);
            r.distinguished.insert(ins.new_of_old[v]);
        }
        for (int t : ins.inserted) w.insert(t);
        r.op.wt = {n, ins.tree, w};
        return r;
    }
    auto d = down(bv);
    Shape sd = shape_of(d.down.tree);
    auto ti = insert_trunks(bv, leaves_not_above(sd, d.down.whites));
    std::vector<int> ids;
    for (int v : bv.whites) ids.push_back(ti.new_of_old[v]);
    r.op.wt = normalised(ti.wt, &ids);
    r.distinguished = VSet(ids.begin(), ids.end());
    return r;
}

inline Op kappa(int m, int n, const Op& i) {
    if (m < 1 || m > n) throw input_error("kappa needs 0 < m <= n");
    Op e = bare(m, i);
    for (int k = m + 1; k <= n; ++k) e = unit(k, e);
    return target(e);
}

struct PartitionShape {
    BimodOp op;
    VSet minus, middle, plus;
};

inline bool shape_partitions(const PartitionShape& sh) {
    VSet u;
    size_t total = sh.minus.size() + sh.middle.size() + sh.plus.size();
    u.insert(sh.minus.begin(), sh.minus.end());
    u.insert(sh.middle.begin(), sh.middle.end());
    u.insert(sh.plus.begin(), sh.plus.end());
    return u.size() == total && u == sh.op.wt.whites;
}

inline std::optional<VSet> pointed_shape_valid(const PartitionShape& sh) {
    if (!shape_partitions(sh)) throw input_error("shape does not partition the whites");
    const WhiteTree& wt = sh.op.wt;
    int m = sh.op.m;
    if (m < 1) return std::nullopt;
    std::vector<int> rest;
    for (int w : wt.whites)
        if (!sh.middle.count(w)) rest.push_back(w);
    std::vector<long> masks;
    for (long mask = 0; mask < (1L << rest.size()); ++mask) masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(),
                     [](long a, long b) { return __builtin_popcountl(a) < __builtin_popcountl(b); });
    for (long mask : masks) {
        VSet U = sh.middle;
        for (size_t i = 0; i < rest.size(); ++i)
            if (mask >> i & 1) U.insert(rest[i]);
        if (!is_m_dimensional({wt.level, wt.tree, U}, m - 1)) continue;
        try {
            auto [mi, pl] = split_complement(sh.op, U);
            if (std::includes(sh.minus.begin(), sh.minus.end(), mi.begin(), mi.end()) &&
                std::includes(sh.plus.begin(), sh.plus.end(), pl.begin(), pl.end()))
                return U;
        } catch (const precondition_error&) {
        }
    }
    return std::nullopt;
}

struct PointedRealisation {
    BimodOp op;
    VSet minus, middle, plus;
    std::vector<int> new_of_old;
    VSet added;
};

namespace detail {

// edges running from the minus side (or the root) to the plus side (or a leaf)
inline std::vector<int> crossing_edges(const Shape& s, const VSet& minus, const VSet& plus) {
    std::vector<int> out;
    for (int e = 0; e < (int)s.e.size(); ++e) {
        int l = s.e[e].lower, u = s.e[e].upper;
        bool low = l < 0 || minus.count(l);
        bool high = u < 0 || plus.count(u);
        if (low && high) out.push_back(e);
    }
    return out;
}

}  // namespace detail

inline PointedRealisation pointed_from_units(int m, int n, const PartitionShape& sh) {
    if (!shape_partitions(sh)) throw input_error("shape does not partition the whites");
    if (sh.op.m != m || sh.op.wt.level != n) throw input_error("shape does not live in B_{m,n}");
    if (m < n - 1) throw capability_error("pointed shapes from units are only constructed for m >= n-1");
    PointedRealisation r;
    r.op.m = m;
    const WhiteTree& wt = sh.op.wt;
    auto remap = [&](const VSet& s) {
        VSet o;
        for (int x : s) o.insert(r.new_of_old[x]);
        return o;
    };
    if (m == n) {
        Shape s = shape_of(wt.tree);
        auto edges = detail::crossing_edges(s, sh.minus, sh.plus);
        auto ins = insert_unaries(n, wt.tree, edges);
        r.new_of_old = ins.new_of_old;
        r.op.wt = {n, ins.tree, all_vertices(ins.tree)};
        r.added = VSet(ins.inserted.begin(), ins.inserted.end());
    } else {
        auto d = down(wt);
        VSet mi, pl;
        for (int x : sh.minus) mi.insert(d.correspondence.at(x));
        for (int x : sh.plus) pl.insert(d.correspondence.at(x));
        Shape sd = shape_of(d.down.tree);
        auto ti = insert_trunks(wt, detail::crossing_edges(sd, mi, pl));
        std::vector<int> ids = ti.new_of_old;
        std::vector<int> tr = ti.trunks;
        auto nz = normalise(n, ti.wt.tree, ti.wt.whites);
        for (int& x : ids)
            if (x >= 0) x = nz.new_id[x];
        for (int& x : tr) x = nz.new_id[x];
        r.new_of_old = ids;
        r.op.wt = {n, nz.tree, nz.whites};
        r.added = VSet(tr.begin(), tr.end());
    }
    r.minus = remap(sh.minus);
    r.plus = remap(sh.plus);
    r.middle = remap(sh.middle);
    r.middle.insert(r.added.begin(), r.added.end());
    return r;
}

}  // namespace opetopic
