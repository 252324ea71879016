#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dendroidal.hpp"

namespace opetopic {

using Vec = std::vector<Q>;

// Unit direction vectors x_ij for i < j on the points 0..n-1; x_ji = -x_ij.
struct DirectionMatrix {
    int dim = 2;
    int points = 0;
    std::vector<Vec> entries;  // row-major over pairs i < j

    DirectionMatrix() = default;
    DirectionMatrix(int m, int n) : dim(m), points(n), entries((size_t)n * (n - 1) / 2, Vec(m)) {
        if (m < 2) throw domain_error("the ambient dimension must be at least 2");
        if (n < 0) throw input_error("negative point count");
    }

    int pair_index(int i, int j) const { return i * points - i * (i + 1) / 2 + (j - i - 1); }

    Vec get(int i, int j) const {
        check(i, j);
        if (i < j) return entries[pair_index(i, j)];
        Vec v = entries[pair_index(j, i)];
        for (auto& c : v) c = -c;
        return v;
    }
    void set(int i, int j, Vec v) {
        check(i, j);
        if ((int)v.size() != dim) throw input_error("vector has the wrong dimension");
        if (i > j) {
            for (auto& c : v) c = -c;
            std::swap(i, j);
        }
        entries[pair_index(i, j)] = std::move(v);
    }
    bool operator==(const DirectionMatrix& o) const {
        return dim == o.dim && points == o.points && entries == o.entries;
    }

private:
    void check(int i, int j) const {
        if (i < 0 || j < 0 || i >= points || j >= points || i == j) throw input_error("invalid index pair");
    }
};

inline Q norm2(const Vec& v) {
    Q s = 0;
    for (auto& c : v) s += c * c;
    return s;
}

inline bool is_unit_everywhere(const DirectionMatrix& x) {
    for (auto& v : x.entries)
        if (norm2(v) != 1) return false;
    return true;
}

inline Vec basis_vector(int m, int k) {
    Vec v(m, Q(0));
    v.at(k) = 1;
    return v;
}

inline std::optional<Q> exact_sqrt(const Q& q) {
    using boost::multiprecision::cpp_int;
    if (q < 0) return std::nullopt;
    cpp_int n = numerator(q), d = denominator(q);
    cpp_int rn = sqrt(n), rd = sqrt(d);
    if (rn * rn != n || rd * rd != d) return std::nullopt;
    return Q(rn, rd);
}

// Needs rational pairwise distances, so every direction is exact.
inline DirectionMatrix from_configuration(const std::vector<Vec>& pts) {
    if (pts.empty()) return DirectionMatrix(2, 0);
    int m = (int)pts[0].size();
    for (auto& p : pts)
        if ((int)p.size() != m) throw input_error("points live in different dimensions");
    DirectionMatrix x(m, (int)pts.size());
    for (int i = 0; i < x.points; ++i)
        for (int j = i + 1; j < x.points; ++j) {
            Vec d(m);
            for (int k = 0; k < m; ++k) d[k] = pts[j][k] - pts[i][k];
            Q n2 = norm2(d);
            if (n2 == 0) throw input_error("coincident points");
            auto r = exact_sqrt(n2);
            if (!r) throw domain_error("distance between points " + std::to_string(i) + " and " + std::to_string(j) +
                                       " is irrational");
            for (auto& c : d) c /= *r;
            x.set(i, j, d);
        }
    return x;
}

// y's points replace point i of x, in place; with no points in y this deletes i.
inline DirectionMatrix compose_partial(const DirectionMatrix& x, int i, const DirectionMatrix& y) {
    if (i < 0 || i >= x.points) throw input_error("composition index out of range");
    if (y.points > 0 && x.dim != y.dim) throw input_error("dimensions differ");
    int k = y.points;
    DirectionMatrix r(x.dim, x.points - 1 + k);
    auto from = [&](int p) -> std::pair<bool, int> {  // (in y, index)
        if (p < i) return {false, p};
        if (p < i + k) return {true, p - i};
        return {false, p - k + 1};
    };
    for (int p = 0; p < r.points; ++p)
        for (int q = p + 1; q < r.points; ++q) {
            auto [py, a] = from(p);
            auto [qy, b] = from(q);
            if (py && qy)
                r.set(p, q, y.get(a, b));
            else
                r.set(p, q, x.get(py ? i : a, qy ? i : b));
        }
    return r;
}

inline DirectionMatrix point_element(int m, int n) {
    DirectionMatrix x(m, n);
    for (auto& v : x.entries) v = basis_vector(m, 0);
    return x;
}

// result_pq = x_{perm[p] perm[q]}
inline DirectionMatrix relabel(const DirectionMatrix& x, const std::vector<int>& perm) {
    if ((int)perm.size() != x.points) throw input_error("permutation has the wrong size");
    DirectionMatrix r(x.dim, x.points);
    for (int p = 0; p < r.points; ++p)
        for (int q = p + 1; q < r.points; ++q) r.set(p, q, x.get(perm[p], perm[q]));
    return r;
}

// Inverse stereographic projection of a random rational point of R^{m-1}.
template <class Rng>
Vec random_unit_vector(int m, Rng& rng) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    Vec t(m - 1);
    for (auto& c : t) c = Q(num(rng), den(rng));
    Q s = norm2(t);
    Vec v(m);
    for (int k = 0; k + 1 < m; ++k) v[k] = 2 * t[k] / (1 + s);
    v[m - 1] = (s - 1) / (1 + s);
    return v;
}

template <class Rng>
DirectionMatrix random_element(int m, int n, Rng& rng) {
    DirectionMatrix x(m, n);
    for (auto& v : x.entries) v = random_unit_vector(m, rng);
    return x;
}

// ---- the hyperoperad ------------------------------------------------------------

struct HyperElement {
    PlanarTree shape;
    DirectionMatrix value;
};

inline HyperElement base_point(const PlanarTree& T, int m) {
    const PlanarInfo& t = planar_info(T);
    int n = (int)t.s.v.size();
    HyperElement h{T, DirectionMatrix(m, n)};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            // depth-first order: a later vertex is either above or to the right
            h.value.set(i, j, basis_vector(m, t.s.below(i, j) ? 0 : 1));
    return h;
}

// Evaluate a level-3 tree whose vertex u carries an element on the vertices of
// its decoration. Two target vertices take the entry of the first decoration
// where their paths from the root part.
inline DirectionMatrix hyper_compose(const Op& b, const std::vector<DirectionMatrix>& decos, int m) {
    if (b->level != 3) throw input_error("hyperoperad composites are level-3 trees");
    if (b->bare()) return DirectionMatrix(m, 1);
    Shape s = shape_of(b);
    if (decos.size() != s.v.size()) throw input_error("one element per vertex is needed");
    for (size_t u = 0; u < s.v.size(); ++u) {
        if (decos[u].points != s.v[u].node->deco->nvert) throw input_error("element does not fit its vertex");
        if (decos[u].points > 1 && decos[u].dim != m) throw input_error("dimensions differ");
    }
    const Op& T = b->target;
    int n = T->nvert;
    std::vector<std::vector<std::pair<int, int>>> path(n);
    for (int f = 0; f < n; ++f) {
        int e = s.leaves[b->leaf_of[f]];
        std::vector<std::pair<int, int>> p{{s.e[e].lower, s.e[e].slot}};
        for (int u = s.e[e].lower; s.v[u].parent >= 0; u = s.v[u].parent) p.push_back({s.v[u].parent, s.v[u].slot});
        path[f].assign(p.rbegin(), p.rend());
    }
    DirectionMatrix r(m, n);
    for (int f = 0; f < n; ++f)
        for (int g = f + 1; g < n; ++g) {
            size_t d = 0;
            while (path[f][d] == path[g][d]) ++d;
            r.set(f, g, decos[path[f][d].first].get(path[f][d].second, path[g][d].second));
        }
    return r;
}

// Realise f through the (0,3)-bimodule correspondence and fill the black
// vertices with base points.
inline HyperElement presheaf_map(const OmegaMorphism& f, const HyperElement& y) {
    if (!same(f.source, y.shape)) throw input_error("element shape differs from the morphism source");
    int m = y.value.dim;
    WhiteTree w = b03_from_morphism(f);
    Shape s = shape_of(w.tree);
    std::vector<DirectionMatrix> decos;
    for (int u = 0; u < (int)s.v.size(); ++u)
        decos.push_back(w.whites.count(u) ? y.value : base_point(s.v[u].node->deco, m).value);
    if (!same(w.tree->target, f.target)) throw invariant_error("correspondence lands on the wrong tree");
    return {f.target, hyper_compose(w.tree, decos, m)};
}

// the vertex above a trunk-blowup edge
inline int trunk_vertex(const PlanarTree& T, int e) {
    const PlanarInfo& t = planar_info(T);
    if (e < 0 || e >= t.edges() || !t.internal(e)) throw precondition_error("not an internal edge");
    int v = t.s.e[e].upper;
    if (!t.s.v[v].in.empty()) throw precondition_error("the vertex above the edge has inputs");
    return v;
}

inline HyperElement retraction(const PlanarTree& T, int e, const HyperElement& z) {
    if (!same(T, z.shape)) throw input_error("element shape differs from the tree");
    int v = trunk_vertex(T, e);
    return {inner_face(T, e).source, compose_partial(z.value, v, DirectionMatrix(z.value.dim, 0))};
}

// h/e : S/e -> T/e, when h carries the trunk edge e alone onto a trunk edge
inline std::optional<OmegaMorphism> quotient_morphism(const OmegaMorphism& h, int e) {
    trunk_vertex(h.source, e);
    int he = h.edges[e];
    const PlanarInfo& T = planar_info(h.target);
    if (!T.internal(he) || !T.s.v[T.s.e[he].upper].in.empty()) return std::nullopt;
    for (int x = 0; x < (int)h.edges.size(); ++x)
        if (x != e && h.edges[x] == he) return std::nullopt;
    auto ds = inner_face(h.source, e);
    auto dt = inner_face(h.target, he);
    std::vector<int> back(T.edges(), -1);
    for (int y = 0; y < (int)dt.edges.size(); ++y) back[dt.edges[y]] = y;
    OmegaMorphism q{ds.source, dt.source, {}, {"h/e"}};
    for (int x : ds.edges) q.edges.push_back(back[h.edges[x]]);
    if (!is_valid_morphism(q)) return std::nullopt;
    return q;
}

// ---- checks -----------------------------------------------------------------------

struct KontsevichReport {
    long checks = 0, failures = 0;
    std::vector<std::string> problems;
    bool pass() const { return failures == 0; }
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failures;
        if (problems.size() < 20) problems.push_back(what);
    }
};

// associativity, unit and interchange on every index configuration of size <= max_points
inline KontsevichReport operad_laws(int max_points, int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    KontsevichReport r;
    auto one = DirectionMatrix(m, 1);
    for (int a = 0; a <= max_points; ++a) {
        auto x = random_element(m, a, rng);
        for (int i = 0; i < a; ++i) {
            r.expect(compose_partial(x, i, one) == x, "right unit");
            for (int b = 0; b <= max_points; ++b) {
                auto y = random_element(m, b, rng);
                for (int c = 0; c <= max_points; ++c) {
                    auto z = random_element(m, c, rng);
                    for (int j = 0; j < b; ++j)
                        r.expect(compose_partial(compose_partial(x, i, y), i + j, z) ==
                                     compose_partial(x, i, compose_partial(y, j, z)),
                                 "associativity");
                    for (int j = i + 1; j < a; ++j)
                        r.expect(compose_partial(compose_partial(x, i, y), j - 1 + b, z) ==
                                     compose_partial(compose_partial(x, j, z), i, y),
                                 "interchange");
                }
            }
        }
        if (a > 0) r.expect(compose_partial(one, 0, x) == x, "left unit");
    }
    return r;
}

// Substituting base points into base points, over substitutions whose
// trees all have at most max_vertices vertices and max_leaves leaves.
inline KontsevichReport base_point_multiplicativity(int max_vertices, int max_leaves, int m) {
    KontsevichReport r;
    for (const Op& P : planar_universe(max_vertices, max_leaves))
        for (int v = 0; v < P->nvert; ++v) {
            int k = source(P, v)->nvert;
            for (int q = 0; q <= max_vertices && P->nvert - 1 + q <= max_vertices; ++q)
                for (const Op& Qt : planar_trees(q, k)) {
                    std::vector<Op> kids;
                    for (int u = 0; u < P->nvert; ++u) kids.push_back(u == v ? black_vertex(Qt) : bare3(source(P, u)));
                    Op b = node(3, P, kids);
                    auto got = hyper_compose(b, {base_point(P, m).value, base_point(Qt, m).value}, m);
                    r.expect(got == base_point(b->target, m).value,
                             planar_string(P) + " at vertex " + std::to_string(v) + " with " + planar_string(Qt));
                }
        }
    return r;
}

struct TrunkSample {
    OmegaMorphism h;
    int e;
};

inline std::vector<TrunkSample> trunk_samples(const std::vector<Op>& universe) {
    std::vector<TrunkSample> out;
    for (const Op& S : universe) {
        const PlanarInfo& s = planar_info(S);
        for (int e = 0; e < s.edges(); ++e) {
            if (!s.internal(e) || !s.s.v[s.s.e[e].upper].in.empty()) continue;
            for (const Op& T : universe)
                for (auto& h : hom(S, T))
                    if (quotient_morphism(h, e)) out.push_back({h, e});
        }
    }
    return out;
}

// r o K(d_e) = id on every trunk blowup of the universe, then the naturality
// square on `samples` seeded picks of (h, e, element).
inline KontsevichReport retraction_checks(const std::vector<Op>& universe, int samples, int m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    KontsevichReport r;
    for (const Op& T : universe) {
        const PlanarInfo& t = planar_info(T);
        for (int e = 0; e < t.edges(); ++e) {
            if (!t.internal(e) || !t.s.v[t.s.e[e].upper].in.empty()) continue;
            auto d = inner_face(T, e);
            HyperElement y{d.source, random_element(m, d.source->nvert, rng)};
            auto back = retraction(T, e, presheaf_map(d, y));
            r.expect(back.value == y.value, "retraction fails on " + planar_string(T) + " edge " + std::to_string(e));
        }
    }
    auto pool = trunk_samples(universe);
    if (pool.empty()) return r;
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    for (int k = 0; k < samples; ++k) {
        const auto& [h, e] = pool[pick(rng)];
        HyperElement y{h.source, random_element(m, h.source->nvert, rng)};
        auto he = *quotient_morphism(h, e);
        auto left = presheaf_map(he, retraction(h.source, e, y));
        auto right = retraction(h.target, h.edges[e], presheaf_map(h, y));
        r.expect(left.value == right.value, "naturality fails for " + planar_string(h.source) + " -> " +
                                                planar_string(h.target) + " at edge " + std::to_string(e));
    }
    return r;
}

}  // namespace opetopic
