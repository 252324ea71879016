#pragma once
#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "bimodules.hpp"
#include "fincat.hpp"
#include "polymonad.hpp"

namespace opetopic {

// Planar trees are level-2 operations. Edges are numbered in preorder with
// the root edge 0; vertices in depth-first order.
using PlanarTree = Op;

struct PlanarInfo {
    Op tree;
    Shape s;
    std::vector<int> span_end;     // edges [e, span_end[e]) are e and everything above it
    std::vector<int> leaves_left;  // leaves strictly to the left of e
    std::vector<int> leaves_above;
    std::vector<int> leaf_index;   // -1 unless e is a leaf

    explicit PlanarInfo(const Op& t) : tree(t), s(shape_of(t)) {
        if (t->level != 2) throw input_error("planar trees are level-2 operations");
        int ne = (int)s.e.size();
        span_end.assign(ne, 0);
        leaf_index.assign(ne, -1);
        for (int i = 0; i < (int)s.leaves.size(); ++i) leaf_index[s.leaves[i]] = i;
        for (int e = ne - 1; e >= 0; --e) {
            int end = e + 1;
            if (s.e[e].upper >= 0)
                for (int c : s.v[s.e[e].upper].in) end = std::max(end, span_end[c]);
            span_end[e] = end;
        }
        leaves_left.assign(ne, 0);
        leaves_above.assign(ne, 0);
        for (int e = 0; e < ne; ++e)
            for (int l : s.leaves) {
                if (l < e) ++leaves_left[e];
                if (l >= e && l < span_end[e]) ++leaves_above[e];
            }
    }
    int edges() const { return (int)s.e.size(); }
    bool above(int x, int y) const { return x >= y && x < span_end[y]; }  // x at or above y
    bool internal(int e) const { return s.e[e].lower >= 0 && s.e[e].upper >= 0; }
};

namespace detail {

// Per-node cache that keeps the node alive, so addresses stay unique. When
// full it is retired rather than freed, which keeps references handed out
// during the current computation valid.
template <class V>
struct NodeCache {
    using Map = std::unordered_map<const Node*, std::pair<Op, std::unique_ptr<V>>>;
    Map live, retired;
    size_t limit;
    explicit NodeCache(size_t l) : limit(l) {}
    template <class Make>
    const V& get(const Op& t, Make make) {
        if (auto it = live.find(t.get()); it != live.end()) return *it->second.second;
        if (live.size() >= limit) {
            retired = std::move(live);
            live = Map();
        }
        auto& slot = live[t.get()];
        slot = {t, std::make_unique<V>(make())};
        return *slot.second;
    }
};

}  // namespace detail

inline const PlanarInfo& planar_info(const Op& t) {
    thread_local detail::NodeCache<PlanarInfo> cache(100000);
    return cache.get(t, [&] { return PlanarInfo(t); });
}

struct OmegaMorphism {
    Op source, target;
    std::vector<int> edges;  // image of each source edge
    std::vector<std::string> word;

    bool operator==(const OmegaMorphism& o) const {
        return same(source, o.source) && same(target, o.target) && edges == o.edges;
    }
    std::string key() const {
        std::string k = source->key + ">" + target->key + ":";
        for (int e : edges) k += std::to_string(e) + ",";
        return k;
    }
};

inline OmegaMorphism identity_morphism(const Op& t) {
    OmegaMorphism f{t, t, {}, {}};
    for (int e = 0; e < (int)shape_of(t).e.size(); ++e) f.edges.push_back(e);
    return f;
}

// g after f
inline OmegaMorphism compose(const OmegaMorphism& g, const OmegaMorphism& f) {
    if (!same(f.target, g.source)) throw input_error("morphisms are not composable");
    OmegaMorphism r{f.source, g.target, {}, f.word};
    for (int e : f.edges) r.edges.push_back(g.edges[e]);
    r.word.insert(r.word.end(), g.word.begin(), g.word.end());
    return r;
}

// the list L is an ordered antichain strictly above r covering every leaf above r
inline bool is_cut_above(const PlanarInfo& t, int r, const std::vector<int>& L) {
    if (t.s.e[r].upper < 0) return false;
    for (size_t i = 0; i < L.size(); ++i) {
        if (L[i] < 0 || L[i] >= t.edges() || L[i] == r || !t.above(L[i], r)) return false;
        if (i && (L[i] < L[i - 1] || t.above(L[i], L[i - 1]))) return false;
    }
    for (int l : t.s.leaves) {
        if (!t.above(l, r)) continue;
        bool covered = false;
        for (int x : L) covered = covered || t.above(l, x);
        if (!covered) return false;
    }
    return true;
}

inline bool is_valid_morphism(const OmegaMorphism& f) {
    const PlanarInfo& S = planar_info(f.source);
    const PlanarInfo& T = planar_info(f.target);
    if ((int)f.edges.size() != S.edges()) return false;
    for (int e : f.edges)
        if (e < 0 || e >= T.edges()) return false;
    for (const auto& v : S.s.v) {
        int a0 = f.edges[v.out];
        std::vector<int> ins;
        for (int c : v.in) ins.push_back(f.edges[c]);
        if (ins.size() == 1 && ins[0] == a0) continue;
        if (!is_cut_above(T, a0, ins)) return false;
    }
    return true;
}

namespace detail {

using Cuts = std::vector<std::vector<int>>;

inline Cuts cut_product(const std::vector<const Cuts*>& parts) {
    Cuts acc{{}};
    for (const Cuts* p : parts) {
        Cuts next;
        for (const auto& a : acc)
            for (const auto& b : *p) {
                auto c = a;
                c.insert(c.end(), b.begin(), b.end());
                next.push_back(std::move(c));
            }
        acc = std::move(next);
    }
    return acc;
}

// boundaries of regions hanging from each edge, and strict cuts above each edge
struct CutTable {
    std::vector<Cuts> from, strict;
    explicit CutTable(const PlanarInfo& t) {
        int ne = t.edges();
        from.resize(ne);
        strict.resize(ne);
        for (int e = ne - 1; e >= 0; --e) {
            int u = t.s.e[e].upper;
            if (u >= 0) {
                std::vector<const Cuts*> parts;
                for (int c : t.s.v[u].in) parts.push_back(&from[c]);
                strict[e] = cut_product(parts);
            }
            from[e] = {{e}};
            from[e].insert(from[e].end(), strict[e].begin(), strict[e].end());
        }
    }
};

inline const CutTable& cut_table(const Op& t) {
    thread_local NodeCache<CutTable> cache(20000);
    return cache.get(t, [&] { return CutTable(planar_info(t)); });
}

}  // namespace detail

// all morphisms S -> T
inline std::vector<OmegaMorphism> hom(const Op& S, const Op& T) {
    const PlanarInfo& si = planar_info(S);
    const PlanarInfo& ti = planar_info(T);
    const detail::CutTable& cuts = detail::cut_table(T);
    std::vector<OmegaMorphism> out;
    std::vector<int> f(si.edges(), -1);
    std::function<void(int)> go = [&](int v) {
        if (v == (int)si.s.v.size()) {
            out.push_back({S, T, f, {}});
            return;
        }
        const auto& vx = si.s.v[v];
        int a0 = f[vx.out];
        if (vx.in.size() == 1) {
            f[vx.in[0]] = a0;
            go(v + 1);
        }
        for (const auto& L : cuts.strict[a0]) {
            if (L.size() != vx.in.size()) continue;
            for (size_t j = 0; j < L.size(); ++j) f[vx.in[j]] = L[j];
            go(v + 1);
        }
        for (int c : vx.in) f[c] = -1;
    };
    for (int r = 0; r < ti.edges(); ++r) {
        f[0] = r;
        go(0);
    }
    return out;
}

inline bool is_active(const OmegaMorphism& f) {
    const PlanarInfo& S = planar_info(f.source);
    const PlanarInfo& T = planar_info(f.target);
    if (f.edges[0] != 0 || S.s.leaves.size() != T.s.leaves.size()) return false;
    for (size_t i = 0; i < S.s.leaves.size(); ++i)
        if (f.edges[S.s.leaves[i]] != T.s.leaves[i]) return false;
    return true;
}

inline bool is_inert(const OmegaMorphism& f) {
    const PlanarInfo& S = planar_info(f.source);
    const PlanarInfo& T = planar_info(f.target);
    for (const auto& v : S.s.v) {
        int a0 = f.edges[v.out];
        int u = T.s.e[a0].upper;
        if (u < 0 || T.s.v[u].in.size() != v.in.size()) return false;
        for (size_t j = 0; j < v.in.size(); ++j)
            if (f.edges[v.in[j]] != T.s.v[u].in[j]) return false;
    }
    return true;
}

// ---- tree surgery with edge tracking ----------------------------------------

struct TrackedTree {
    Op tree;
    std::vector<int> origin;  // for each edge of tree, the edge it comes from
};

// the subtree of T with root edge r and leaf edges L
inline TrackedTree region(const PlanarInfo& T, int r, const std::vector<int>& L) {
    std::set<int> leafset(L.begin(), L.end());
    if (!leafset.count(r) && !is_cut_above(T, r, L)) throw input_error("not a subtree boundary");
    if (leafset.count(r) && L.size() != 1) throw input_error("not a subtree boundary");
    TrackedTree out;
    std::function<Op(int)> go = [&](int e) -> Op {
        out.origin.push_back(e);
        if (leafset.count(e)) return planar_leaf();
        std::vector<Op> ch;
        for (int c : T.s.v[T.s.e[e].upper].in) ch.push_back(go(c));
        return planar_node(std::move(ch));
    };
    out.tree = go(r);
    return out;
}

// T with the subtree (r, L) replaced by one vertex; a unary vertex is inserted
// when the subtree is a single edge. Returns the tree and the new vertex.
inline std::pair<Op, int> contract_region(const PlanarInfo& T, int r, const std::vector<int>& L) {
    int vcount = 0, found = -1;
    std::set<int> leafset(L.begin(), L.end());
    std::function<Op(int, bool)> go = [&](int e, bool skip_region) -> Op {
        if (e == r && !skip_region) {
            found = vcount++;
            std::vector<Op> ch;
            for (int l : L) ch.push_back(go(l, true));
            return planar_node(std::move(ch));
        }
        int u = T.s.e[e].upper;
        if (u < 0) return planar_leaf();
        vcount++;
        std::vector<Op> ch;
        for (int c : T.s.v[u].in) ch.push_back(go(c, false));
        return planar_node(std::move(ch));
    };
    Op t = go(0, false);
    return {t, found};
}

// Replace each vertex v of host by guests[v] (with as many leaves as v has
// inputs); a bare guest at a unary vertex removes the vertex.
struct TrackedGraft {
    Op tree;
    std::vector<int> host_edge;
    std::vector<std::vector<int>> guest_edge;
};

inline TrackedGraft graft_tracked(const Op& host, const std::vector<Op>& guests) {
    const PlanarInfo& H = planar_info(host);
    if (guests.size() != H.s.v.size()) throw input_error("one guest per vertex is required");
    TrackedGraft r;
    r.host_edge.assign(H.edges(), -1);
    r.guest_edge.resize(guests.size());
    for (size_t v = 0; v < guests.size(); ++v) {
        if (guests[v]->level != 2) throw input_error("guests are planar trees");
        if (guests[v]->nleaves != (int)H.s.v[v].in.size())
            throw input_error("guest leaf count differs from vertex arity");
    }
    int ctr = 0;
    std::function<Op(int, int)> host_walk = [&](int e, int id) -> Op {
        if (id < 0) id = ctr++;
        r.host_edge[e] = id;
        int v = H.s.e[e].upper;
        if (v < 0) return planar_leaf();
        const Op& g = guests[v];
        int leafctr = 0;
        std::function<Op(const Op&, int)> guest_walk = [&](const Op& gn, int gid) -> Op {
            r.guest_edge[v].push_back(gid);
            if (gn->bare()) return host_walk(H.s.v[v].in[leafctr++], gid);
            std::vector<Op> ch;
            for (const Op& c : gn->children) ch.push_back(guest_walk(c, ctr++));
            return planar_node(std::move(ch));
        };
        return guest_walk(g, id);
    };
    r.tree = host_walk(0, -1);
    return r;
}

// ---- generators ---------------------------------------------------------------

enum class GeneratorKind { InnerFace, OuterFace, Degeneracy, EdgeInclusion };

inline TrackedTree contract_edge(const PlanarInfo& T, int e) {
    if (!T.internal(e)) throw input_error("inner faces need an internal edge");
    TrackedTree out;
    std::function<void(int, std::vector<Op>&)> emit;
    std::function<Op(int)> go = [&](int x) -> Op {
        out.origin.push_back(x);
        int u = T.s.e[x].upper;
        if (u < 0) return planar_leaf();
        std::vector<Op> ch;
        emit(u, ch);
        return planar_node(std::move(ch));
    };
    emit = [&](int u, std::vector<Op>& ch) {
        for (int c : T.s.v[u].in) {
            if (c == e)
                emit(T.s.e[c].upper, ch);
            else
                ch.push_back(go(c));
        }
    };
    out.tree = go(0);
    return out;
}

inline OmegaMorphism inner_face(const Op& T, int e) {
    const PlanarInfo& t = planar_info(T);
    auto c = contract_edge(t, e);
    return {c.tree, T, c.origin, {"d_e" + std::to_string(e)}};
}

inline OmegaMorphism outer_face(const Op& T, int v) {
    const PlanarInfo& t = planar_info(T);
    if (v < 0 || v >= (int)t.s.v.size()) throw input_error("vertex out of range");
    const auto& vx = t.s.v[v];
    std::vector<int> inner;
    if (vx.out != 0) inner.push_back(vx.out);
    for (int c : vx.in)
        if (t.s.e[c].upper >= 0) inner.push_back(c);
    if (inner.size() != 1) throw input_error("outer faces remove a vertex with exactly one inner edge");
    TrackedTree r;
    if (vx.out == 0) {
        int c = inner[0];
        std::vector<int> L;
        for (int l : t.s.leaves)
            if (t.above(l, c)) L.push_back(l);
        r = region(t, c, L);
    } else {
        std::vector<int> L{vx.out};
        for (int l : t.s.leaves)
            if (!t.above(l, vx.out)) L.push_back(l);
        std::sort(L.begin(), L.end());
        r = region(t, 0, L);
    }
    return {r.tree, T, r.origin, {"d_v" + std::to_string(v)}};
}

inline OmegaMorphism degeneracy(const Op& T, int v) {
    const PlanarInfo& t = planar_info(T);
    if (v < 0 || v >= (int)t.s.v.size() || t.s.v[v].in.size() != 1)
        throw input_error("degeneracies remove a unary vertex");
    int below = t.s.v[v].out, above = t.s.v[v].in[0];
    TrackedTree out;
    std::function<Op(int)> go = [&](int e) -> Op {
        out.origin.push_back(e);
        int u = t.s.e[e].upper;
        if (u == v) {
            e = above;
            u = t.s.e[e].upper;
        }
        if (u < 0) return planar_leaf();
        std::vector<Op> ch;
        for (int x : t.s.v[u].in) ch.push_back(go(x));
        return planar_node(std::move(ch));
    };
    Op target = go(0);
    std::vector<int> img(t.edges(), -1);
    for (int i = 0; i < (int)out.origin.size(); ++i) img[out.origin[i]] = i;
    img[above] = img[below];
    return {T, target, img, {"s_v" + std::to_string(v)}};
}

// the inclusion of the edge e as a map from the bare edge
inline OmegaMorphism edge_inclusion(const Op& T, int e) {
    const PlanarInfo& t = planar_info(T);
    if (e < 0 || e >= t.edges()) throw input_error("edge out of range");
    return {planar_leaf(), T, {e}, {"i_e" + std::to_string(e)}};
}

inline OmegaMorphism apply_generator(GeneratorKind kind, const Op& T, int site) {
    switch (kind) {
        case GeneratorKind::InnerFace: return inner_face(T, site);
        case GeneratorKind::OuterFace: return outer_face(T, site);
        case GeneratorKind::Degeneracy: return degeneracy(T, site);
        default: return edge_inclusion(T, site);
    }
}

// ---- inert-active factorisation ---------------------------------------------

struct Factorisation {
    OmegaMorphism active, inert;
};

inline Factorisation factor_inert_active(const OmegaMorphism& f) {
    const PlanarInfo& S = planar_info(f.source);
    const PlanarInfo& T = planar_info(f.target);
    std::vector<int> L;
    for (int l : S.s.leaves) L.push_back(f.edges[l]);
    auto reg = region(T, f.edges[0], L);
    std::map<int, int> back;
    for (int i = 0; i < (int)reg.origin.size(); ++i) back[reg.origin[i]] = i;
    OmegaMorphism active{f.source, reg.tree, {}, {"active"}};
    for (int e : f.edges) {
        auto it = back.find(e);
        if (it == back.end()) throw invariant_error("image leaves the generated subtree");
        active.edges.push_back(it->second);
    }
    OmegaMorphism inert{reg.tree, f.target, reg.origin, {"inert"}};
    return {active, inert};
}

// every inert map into T, one per subtree boundary (r, L)
inline std::vector<OmegaMorphism> inert_maps_into(const Op& T) {
    const PlanarInfo& t = planar_info(T);
    const auto& cuts = detail::cut_table(T);
    std::vector<OmegaMorphism> out;
    for (int r = 0; r < t.edges(); ++r)
        for (const auto& L : cuts.from[r]) {
            auto reg = region(t, r, L);
            out.push_back({reg.tree, T, reg.origin, {"inert"}});
        }
    return out;
}

// Brute force over all inert maps into the target; the factorisation is
// unique when exactly one is returned.
inline std::vector<Factorisation> all_factorisations(const OmegaMorphism& f, const std::vector<OmegaMorphism>& inerts) {
    std::vector<Factorisation> out;
    for (const auto& i : inerts) {
        if (!same(i.target, f.target)) continue;
        std::map<int, int> back;
        for (int k = 0; k < (int)i.edges.size(); ++k) back[i.edges[k]] = k;
        OmegaMorphism a{f.source, i.source, {}, {"active"}};
        bool inside = true;
        for (int e : f.edges) {
            auto it = back.find(e);
            if (it == back.end()) {
                inside = false;
                break;
            }
            a.edges.push_back(it->second);
        }
        if (inside && is_valid_morphism(a) && is_active(a)) out.push_back({a, i});
    }
    return out;
}

// ---- strata -----------------------------------------------------------------

struct StratumIndex {
    Op tree;
    int index = 0;
};

inline std::vector<StratumIndex> strata(const Op& T) {
    std::vector<StratumIndex> out;
    for (int k = 0; k <= T->nleaves; ++k) out.push_back({T, k});
    return out;
}

// strata act along a morphism: the stratum left of a source leaf goes to the
// stratum left of its image, the last one to the stratum right of the image of the root
inline int alpha(const OmegaMorphism& f, int k) {
    const PlanarInfo& S = planar_info(f.source);
    const PlanarInfo& T = planar_info(f.target);
    int n = (int)S.s.leaves.size();
    if (k < 0 || k > n) throw input_error("stratum out of range");
    if (k < n) return T.leaves_left[f.edges[S.s.leaves[k]]];
    int r = f.edges[0];
    return T.leaves_left[r] + T.leaves_above[r];
}

// ---- planar tree enumeration by vertices and leaves ------------------------

inline const std::vector<Op>& planar_trees(int v, int l) {
    static std::map<std::pair<int, int>, std::vector<Op>> memo;
    auto key = std::pair{v, l};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<Op> out;
    if (v == 0) {
        if (l == 1) out.push_back(planar_leaf());
    } else if (v > 0 && l >= 0) {
        std::vector<Op> ch;
        std::function<void(int, int)> forest = [&](int vr, int lr) {
            if (vr == 0 && lr == 0) out.push_back(planar_node(ch));
            // an extra child needs a vertex or a leaf
            for (int cv = 0; cv <= vr; ++cv)
                for (int cl = 0; cl <= lr; ++cl) {
                    if (cv == 0 && cl != 1) continue;
                    for (const Op& c : planar_trees(cv, cl)) {
                        ch.push_back(c);
                        forest(vr - cv, lr - cl);
                        ch.pop_back();
                    }
                }
        };
        forest(v - 1, l);
    }
    return memo[key] = out;
}

inline std::vector<Op> planar_universe(int max_vertices, int max_leaves) {
    std::vector<Op> out;
    for (int v = 0; v <= max_vertices; ++v)
        for (int l = 0; l <= max_leaves; ++l)
            for (const Op& t : planar_trees(v, l)) out.push_back(t);
    return out;
}

// ---- morphisms as elements of B_{0,3} ---------------------------------------

inline Op bare3(const Op& colour) { return bare(3, colour); }

inline Op black_vertex(const Op& P) {
    std::vector<Op> kids;
    for (int q = 0; q < arity(P); ++q) kids.push_back(bare3(source(P, q)));
    return node(3, P, kids);
}

inline WhiteTree b03_from_morphism(const OmegaMorphism& f) {
    auto [act, inert] = factor_inert_active(f);
    const PlanarInfo& S = planar_info(f.source);
    const PlanarInfo& Tp = planar_info(act.target);
    const PlanarInfo& T = planar_info(f.target);
    std::vector<Op> kids;
    for (int v = 0; v < (int)S.s.v.size(); ++v) {
        const auto& vx = S.s.v[v];
        int a0 = act.edges[vx.out];
        std::vector<int> ins;
        for (int c : vx.in) ins.push_back(act.edges[c]);
        if (ins.size() == 1 && ins[0] == a0) {
            kids.push_back(node(3, planar_leaf(), {}));
            continue;
        }
        Op Pv = region(Tp, a0, ins).tree;
        kids.push_back(Pv->nvert == 1 ? bare3(source(f.source, v)) : black_vertex(Pv));
    }
    Op w = node(3, f.source, kids);
    if (same(act.target, f.target)) return {3, w, {0}};
    std::vector<int> L;
    for (int l : Tp.s.leaves) L.push_back(inert.edges[l]);
    auto [P, p] = contract_region(T, inert.edges[0], L);
    std::vector<Op> pk;
    for (int q = 0; q < P->nvert; ++q) pk.push_back(q == p ? w : bare3(source(P, q)));
    return {3, node(3, P, pk), {1}};
}

inline OmegaMorphism b03_to_morphism(const WhiteTree& x) {
    if (x.level != 3 || x.whites.size() != 1) throw input_error("an element of B_{0,3} has one white vertex");
    const Op& root = x.tree;
    if (root->bare()) throw input_error("an element of B_{0,3} has a vertex");
    Op w, P;
    int p = -1;
    if (*x.whites.begin() == 0) {
        w = root;
    } else {
        if (*x.whites.begin() != 1) throw input_error("the white vertex must sit on the black root");
        P = root->deco;
        for (int q = 0; q < (int)root->children.size(); ++q) {
            if (root->children[q]->bare()) continue;
            if (p >= 0) throw input_error("black root carries more than one vertex");
            p = q;
        }
        if (p < 0) throw input_error("missing white vertex");
        w = root->children[p];
    }
    const Op& S = w->deco;
    std::vector<Op> guests;
    for (int v = 0; v < (int)w->children.size(); ++v) {
        const Op& c = w->children[v];
        if (c->bare()) {
            guests.push_back(corolla(arity(source(S, v))));
            continue;
        }
        for (const Op& k : c->children)
            if (!k->bare()) throw input_error("black vertices above the white one must be topmost");
        guests.push_back(c->deco);
    }
    auto inner = graft_tracked(S, guests);
    OmegaMorphism f{S, inner.tree, inner.host_edge, {}};
    if (P) {
        std::vector<Op> gs;
        for (int q = 0; q < P->nvert; ++q) gs.push_back(q == p ? inner.tree : corolla(arity(source(P, q))));
        auto outer = graft_tracked(P, gs);
        OmegaMorphism i{inner.tree, outer.tree, outer.guest_edge[p], {}};
        f = compose(i, f);
    }
    if (!same(f.target, target(x.tree))) throw invariant_error("morphism target differs from the tree's target");
    return f;
}

// Elements of B_{0,3} whose white vertex carries S and whose target has at
// most max_vertices vertices and max_leaves leaves, built directly from
// black fillings and evaluated.
inline std::vector<WhiteTree> b03_elements(const Op& S, int max_vertices, int max_leaves) {
    std::vector<WhiteTree> out;
    const PlanarInfo& si = planar_info(S);
    int nv = (int)si.s.v.size();
    std::vector<Op> kids(nv);
    auto emit = [&](int used) {
        Op w = node(3, S, kids);
        if (used <= max_vertices && S->nleaves <= max_leaves) out.push_back({3, w, {0}});
        for (int pv = 2; pv <= max_vertices - used + 1; ++pv)
            for (int pl = 0; pl <= max_leaves; ++pl)
                for (const Op& P : planar_trees(pv, pl))
                    for (int q = 0; q < P->nvert; ++q) {
                        if (arity(source(P, q)) != S->nleaves) continue;
                        std::vector<Op> pk;
                        for (int x = 0; x < P->nvert; ++x) pk.push_back(x == q ? w : bare3(source(P, x)));
                        out.push_back({3, node(3, P, pk), {1}});
                    }
    };
    std::function<void(int, int)> go = [&](int v, int used) {
        if (used > max_vertices) return;
        if (v == nv) {
            emit(used);
            return;
        }
        int k = (int)si.s.v[v].in.size();
        kids[v] = bare3(source(S, v));
        go(v + 1, used + 1);
        if (k == 1) {
            kids[v] = node(3, planar_leaf(), {});
            go(v + 1, used);
        }
        for (int pv = 2; pv <= max_vertices - used; ++pv)
            for (const Op& Pv : planar_trees(pv, k)) {
                thread_local std::map<const Node*, Op> blacks;  // planar_trees results are never freed
                auto& b = blacks[Pv.get()];
                if (!b) b = black_vertex(Pv);
                kids[v] = b;
                go(v + 1, used + pv);
            }
    };
    go(0, 0);
    return out;
}

inline std::vector<WhiteTree> b03_elements(const Op& S, const Op& T) {
    std::vector<WhiteTree> out;
    for (auto& x : b03_elements(S, T->nvert, T->nleaves))
        if (same(target(x.tree), T)) out.push_back(x);
    return out;
}

// ---- the categories C[n] ----------------------------------------------------

struct CIndexObject {
    char label = 'A';
    unsigned subset = 0;  // bit i set when i is in S

    bool operator==(const CIndexObject& o) const { return label == o.label && subset == o.subset; }
    bool operator<(const CIndexObject& o) const { return std::pair(label, subset) < std::pair(o.label, o.subset); }
};

inline std::string c_name(const CIndexObject& o) {
    std::string s(1, o.label);
    s += "{";
    bool first = true;
    for (int i = 0; i < 32; ++i)
        if (o.subset >> i & 1) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
    return s + "}";
}

inline int max_of(unsigned s) {
    int m = -1;
    for (int i = 0; i < 32; ++i)
        if (s >> i & 1) m = i;
    return m;
}

inline std::vector<CIndexObject> c_objects(int n) {
    if (n < 0 || n > 16) throw input_error("C[n] needs 0 <= n <= 16");
    std::vector<CIndexObject> out;
    for (int i = 0; i <= n; ++i) out.push_back({'A', (2u << i) - 1});
    for (char l : {'B', 'C'})
        for (unsigned s = 1; s < (2u << n); ++s) out.push_back({l, s});
    out.push_back({'D', 0});
    return out;
}

// arrows of the zigzag A <- B -> C <- D
inline bool c_label_leq(char a, char b) {
    return a == b || (a == 'B' && (b == 'A' || b == 'C')) || (a == 'D' && b == 'C');
}

inline bool c_leq(const CIndexObject& x, const CIndexObject& y) {
    return c_label_leq(x.label, y.label) && (x.subset & ~y.subset) == 0;
}

inline FinCat c_category(int n) {
    auto objs = c_objects(n);
    std::vector<std::string> names;
    for (auto& o : objs) names.push_back(c_name(o));
    std::vector<std::vector<bool>> leq(objs.size(), std::vector<bool>(objs.size()));
    for (size_t x = 0; x < objs.size(); ++x)
        for (size_t y = 0; y < objs.size(); ++y) leq[x][y] = c_leq(objs[x], objs[y]);
    auto c = thin_category(names, leq);
    c.check_laws();
    return c;
}

inline std::vector<Q> c_simplex_map(int n, const CIndexObject& o) {
    std::vector<Q> p(n + 2, 0);
    int size = __builtin_popcount(o.subset);
    switch (o.label) {
        case 'A':
            if (o.subset != (2u << max_of(o.subset)) - 1) throw input_error("A objects carry an initial segment");
            p[max_of(o.subset)] = 1;
            break;
        case 'B':
        case 'C': {
            if (!size) throw input_error("B and C objects carry a non-empty subset");
            Q w = o.label == 'B' ? Q(2, 3 * size) : Q(1, 3 * size);
            for (int i = 0; i <= n; ++i)
                if (o.subset >> i & 1) p[i] = w;
            p[n + 1] = o.label == 'B' ? Q(1, 3) : Q(2, 3);
            break;
        }
        case 'D':
            if (o.subset) throw input_error("D carries the empty subset");
            p[n + 1] = 1;
            break;
        default: throw input_error("labels are A, B, C, D");
    }
    if (max_of(o.subset) > n) throw input_error("subset exceeds [n]");
    return p;
}

// ---- chains in the category of trees with a chosen stratum ------------------

struct PointedTree {
    Op tree;
    int stratum = 0;
};

struct Chain {
    std::vector<PointedTree> objects;
    std::vector<OmegaMorphism> maps;  // maps[i]: objects[i] -> objects[i+1]

    int n() const { return (int)objects.size() - 1; }
    OmegaMorphism between(int i, int j) const {
        OmegaMorphism f = identity_morphism(objects[i].tree);
        for (int k = i; k < j; ++k) f = compose(maps[k], f);
        return f;
    }
};

inline void check_chain(const Chain& c) {
    if (c.objects.empty() || c.maps.size() + 1 != c.objects.size()) throw input_error("malformed chain");
    for (auto& o : c.objects)
        if (o.stratum < 0 || o.stratum > o.tree->nleaves) throw input_error("stratum out of range");
    for (int i = 0; i < (int)c.maps.size(); ++i) {
        const auto& f = c.maps[i];
        if (!same(f.source, c.objects[i].tree) || !same(f.target, c.objects[i + 1].tree))
            throw input_error("chain maps are not composable");
        if (!is_valid_morphism(f)) throw input_error("chain map is not a morphism");
        if (alpha(f, c.objects[i].stratum) != c.objects[i + 1].stratum)
            throw input_error("chain map does not respect the chosen strata");
    }
}

// An edge of an extended tree is named by (layer, role) where role -1 is the
// root of the layer's tree and role b >= 0 its leaf b; the added trunk is (-1, -1).
using EdgeName = std::pair<int, int>;
inline constexpr EdgeName trunk_name{-1, -1};

struct NamedTree {
    Op tree;
    std::vector<std::vector<EdgeName>> names;  // per edge, preorder

    int edge_named(const EdgeName& n) const {
        for (int e = 0; e < (int)names.size(); ++e)
            for (auto& x : names[e])
                if (x == n) return e;
        throw invariant_error("no edge carries the requested name");
    }
};

namespace detail {

struct NNode {
    std::vector<EdgeName> names;
    bool vertex = false;
    bool innermost = false;
    std::vector<NNode> kids;
};

inline Op to_op(const NNode& n, std::vector<std::vector<EdgeName>>& names) {
    names.push_back(n.names);
    if (!n.vertex) return planar_leaf();
    std::vector<Op> ch;
    for (const auto& k : n.kids) ch.push_back(to_op(k, names));
    return planar_node(std::move(ch));
}

inline NamedTree to_named(const NNode& n) {
    NamedTree t;
    t.tree = to_op(n, t.names);
    return t;
}

inline void append(std::vector<EdgeName>& a, const std::vector<EdgeName>& b) { a.insert(a.end(), b.begin(), b.end()); }

// The layered tree for s_0 < ... < s_k in S: the top tree with every internal
// edge contracted unless it bounds the image of some lower layer. When the
// innermost image is a single edge a unary vertex stands in for it.
inline NNode layered(const Chain& c, const std::vector<int>& S) {
    int k = (int)S.size() - 1;
    const PlanarInfo& T = planar_info(c.objects[S[k]].tree);
    std::vector<int> roots(k + 1);
    std::vector<std::vector<int>> leaves(k + 1);
    std::set<int> kept{0};
    for (int l : T.s.leaves) kept.insert(l);
    for (int t = 0; t <= k; ++t) {
        OmegaMorphism g = t == k ? identity_morphism(T.tree) : c.between(S[t], S[k]);
        const PlanarInfo& src = planar_info(g.source);
        roots[t] = g.edges[0];
        for (int l : src.s.leaves) leaves[t].push_back(g.edges[l]);
        kept.insert(roots[t]);
        kept.insert(leaves[t].begin(), leaves[t].end());
    }
    int r0 = roots[0];
    bool placeholder = leaves[0].size() == 1 && leaves[0][0] == r0;

    auto lower_names = [&](int e) {
        std::vector<EdgeName> n;
        for (int t = 0; t <= k; ++t)
            if (roots[t] == e) n.push_back({t, -1});
        return n;
    };
    auto upper_names = [&](int e) {
        std::vector<EdgeName> n;
        for (int t = 0; t <= k; ++t)
            for (int b = 0; b < (int)leaves[t].size(); ++b)
                if (leaves[t][b] == e) n.push_back({t, b});
        return n;
    };
    std::function<NNode(int)> edge;
    std::function<void(int, std::vector<NNode>&)> frontier = [&](int u, std::vector<NNode>& out) {
        for (int x : T.s.v[u].in) {
            if (kept.count(x))
                out.push_back(edge(x));
            else
                frontier(T.s.e[x].upper, out);
        }
    };
    auto above = [&](int e) {
        std::vector<NNode> out;
        if (T.s.e[e].upper >= 0) frontier(T.s.e[e].upper, out);
        return out;
    };
    edge = [&](int e) -> NNode {
        bool has_vertex = T.s.e[e].upper >= 0;
        if (e == r0 && placeholder) {
            NNode up{upper_names(e), has_vertex, false, above(e)};
            return NNode{lower_names(e), true, true, {std::move(up)}};
        }
        auto names = lower_names(e);
        append(names, upper_names(e));
        return NNode{std::move(names), has_vertex, e == r0, above(e)};
    };
    return edge(0);
}

inline bool insert_trunk(NNode& n, int gap) {
    if (n.vertex && n.innermost) {
        if (gap < 0 || gap > (int)n.kids.size()) throw invariant_error("stratum gap out of range");
        n.kids.insert(n.kids.begin() + gap, NNode{{trunk_name}, true, false, {}});
        return true;
    }
    for (auto& k : n.kids)
        if (insert_trunk(k, gap)) return true;
    return false;
}

inline std::vector<int> elements(unsigned s) {
    std::vector<int> v;
    for (int i = 0; i < 32; ++i)
        if (s >> i & 1) v.push_back(i);
    return v;
}

}  // namespace detail

struct ExtendedChain {
    Chain chain;
    std::vector<CIndexObject> objects;
    std::vector<NamedTree> trees;
    std::vector<int> strata;
    std::map<std::pair<int, int>, OmegaMorphism> maps;  // for every x <= y in C[n]

    int index_of(const CIndexObject& o) const {
        for (int i = 0; i < (int)objects.size(); ++i)
            if (objects[i] == o) return i;
        throw input_error("object not in C[n]");
    }
    const NamedTree& at(const CIndexObject& o) const { return trees[index_of(o)]; }
    const OmegaMorphism& map(const CIndexObject& x, const CIndexObject& y) const {
        return maps.at({index_of(x), index_of(y)});
    }
};

inline NamedTree named_identity(const Op& t) {
    NamedTree n{t, {}};
    for (int e = 0; e < (int)shape_of(t).e.size(); ++e) n.names.push_back({});
    return n;
}

inline ExtendedChain extend_chain(const Chain& c) {
    check_chain(c);
    int n = c.n();
    ExtendedChain x;
    x.chain = c;
    x.objects = c_objects(n);
    for (auto& o : x.objects) {
        auto S = detail::elements(o.subset);
        switch (o.label) {
            case 'A':
                x.trees.push_back(named_identity(c.objects[max_of(o.subset)].tree));
                x.strata.push_back(c.objects[max_of(o.subset)].stratum);
                break;
            case 'B':
            case 'C': {
                auto nn = detail::layered(c, S);
                if (o.label == 'C') detail::insert_trunk(nn, c.objects[S[0]].stratum);
                x.trees.push_back(detail::to_named(nn));
                x.strata.push_back(c.objects[S.back()].stratum);
                break;
            }
            default: {
                NamedTree t{trunk(), {{trunk_name}}};
                x.trees.push_back(t);
                x.strata.push_back(0);
            }
        }
    }
    for (int a = 0; a < (int)x.objects.size(); ++a)
        for (int b = 0; b < (int)x.objects.size(); ++b) {
            const auto& X = x.objects[a];
            const auto& Y = x.objects[b];
            if (!c_leq(X, Y)) continue;
            const NamedTree& src = x.trees[a];
            const NamedTree& tgt = x.trees[b];
            OmegaMorphism f{src.tree, tgt.tree, {}, {c_name(X) + "->" + c_name(Y)}};
            if (X.label == 'A') {
                f.edges = c.between(max_of(X.subset), max_of(Y.subset)).edges;
            } else if (X.label == 'D') {
                f.edges = {tgt.edge_named(trunk_name)};
            } else {
                auto SX = detail::elements(X.subset);
                auto SY = detail::elements(Y.subset);
                auto translate = [&](const EdgeName& nm) -> int {
                    if (nm == trunk_name) return tgt.edge_named(trunk_name);
                    int s = SX[nm.first];
                    if (Y.label == 'A') {
                        OmegaMorphism g = c.between(s, max_of(Y.subset));
                        const PlanarInfo& gi = planar_info(g.source);
                        return nm.second < 0 ? g.edges[0] : g.edges[gi.s.leaves[nm.second]];
                    }
                    int t = (int)(std::find(SY.begin(), SY.end(), s) - SY.begin());
                    return tgt.edge_named({t, nm.second});
                };
                for (const auto& names : src.names) {
                    if (names.empty()) throw invariant_error("unnamed edge in an extended tree");
                    int e = translate(names[0]);
                    for (const auto& nm : names)
                        if (translate(nm) != e) throw invariant_error("edge names disagree under a map");
                    f.edges.push_back(e);
                }
            }
            x.maps.emplace(std::pair{a, b}, f);
        }
    return x;
}

struct ChainReport {
    long morphisms = 0, composable_pairs = 0, failures = 0;
    std::vector<std::string> problems;
    bool pass() const { return failures == 0; }
};

inline bool is_trunk_blowup(const OmegaMorphism& f) {
    const PlanarInfo& T = planar_info(f.target);
    for (int e = 0; e < T.edges(); ++e) {
        if (!T.internal(e) || !T.s.v[T.s.e[e].upper].in.empty()) continue;
        if (inner_face(f.target, e) == f) return true;
    }
    return false;
}

// validity, strata, functoriality on all composable pairs, trunk blowups and D
inline ChainReport check_extension(const ExtendedChain& x) {
    ChainReport r;
    auto fail = [&](const std::string& s) {
        ++r.failures;
        if (r.problems.size() < 20) r.problems.push_back(s);
    };
    for (auto& [ab, f] : x.maps) {
        ++r.morphisms;
        if (!is_valid_morphism(f)) fail("not a morphism: " + f.word[0]);
        else if (alpha(f, x.strata[ab.first]) != x.strata[ab.second]) fail("strata not respected: " + f.word[0]);
    }
    int no = (int)x.objects.size();
    for (int a = 0; a < no; ++a)
        for (int b = 0; b < no; ++b) {
            auto fab = x.maps.find({a, b});
            if (fab == x.maps.end()) continue;
            for (int c = 0; c < no; ++c) {
                auto fbc = x.maps.find({b, c});
                if (fbc == x.maps.end()) continue;
                ++r.composable_pairs;
                if (!(compose(fbc->second, fab->second).edges == x.maps.at({a, c}).edges))
                    fail("not functorial: " + fab->second.word[0] + " then " + fbc->second.word[0]);
            }
        }
    for (int a = 0; a < no; ++a) {
        const auto& o = x.objects[a];
        if (o.label == 'B' && !is_trunk_blowup(x.map(o, {'C', o.subset}))) fail("tau is not a trunk blowup at " + c_name(o));
        if (o.label == 'D' && !same(x.trees[a].tree, trunk())) fail("D is not the trunk");
    }
    return r;
}

struct Zigzag {
    OmegaMorphism upsilon, tau, sigma;  // trunk -> C[n] <- B[n] -> T(n)
};

inline Zigzag zigzag(const Chain& c) {
    auto x = extend_chain(c);
    unsigned all = (2u << c.n()) - 1;
    return {x.map({'D', 0}, {'C', all}), x.map({'B', all}, {'C', all}), x.map({'B', all}, {'A', all})};
}

// all morphisms (S,s) -> (T,t) between pointed trees
inline std::vector<OmegaMorphism> pointed_hom(const PointedTree& a, const PointedTree& b) {
    std::vector<OmegaMorphism> out;
    for (auto& f : hom(a.tree, b.tree))
        if (alpha(f, a.stratum) == b.stratum) out.push_back(f);
    return out;
}

inline std::vector<PointedTree> pointed_universe(const std::vector<Op>& trees) {
    std::vector<PointedTree> out;
    for (const Op& t : trees)
        for (int s = 0; s <= t->nleaves; ++s) out.push_back({t, s});
    return out;
}

}  // namespace opetopic
