#pragma once
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bimodules.hpp"

namespace opetopic {

using Q = boost::multiprecision::cpp_rational;

struct FinCat {
    struct Mor {
        int src, tgt;
        std::string name;
    };
    std::vector<std::string> objects;
    std::vector<Mor> mors;
    std::vector<int> identity;
    std::map<std::pair<int, int>, int> table;  // (g, f) -> g o f

    int size() const { return (int)objects.size(); }
    bool is_identity(int f) const { return identity[mors[f].src] == f; }

    int compose(int g, int f) const {
        auto it = table.find({g, f});
        if (it == table.end()) throw input_error("morphisms are not composable");
        return it->second;
    }

    std::vector<std::vector<int>> out_of() const {
        std::vector<std::vector<int>> r(objects.size());
        for (int f = 0; f < (int)mors.size(); ++f) r[mors[f].src].push_back(f);
        return r;
    }

    void check_laws() const {
        if (identity.size() != objects.size()) throw invariant_error("missing identities");
        for (int f = 0; f < (int)mors.size(); ++f) {
            const auto& m = mors[f];
            if (compose(f, identity[m.src]) != f || compose(identity[m.tgt], f) != f)
                throw invariant_error("identity law fails at " + m.name);
        }
        auto out = out_of();
        for (int f = 0; f < (int)mors.size(); ++f)
            for (int g : out[mors[f].tgt])
                for (int h : out[mors[g].tgt])
                    if (compose(h, compose(g, f)) != compose(compose(h, g), f))
                        throw invariant_error("associativity fails");
    }

    // non-identity morphisms that are not composites of two non-identities
    std::vector<int> generating() const {
        std::vector<bool> dec(mors.size(), false);
        for (auto& [gf, h] : table)
            if (!is_identity(gf.first) && !is_identity(gf.second)) dec[h] = true;
        std::vector<int> r;
        for (int f = 0; f < (int)mors.size(); ++f)
            if (!is_identity(f) && !dec[f]) r.push_back(f);
        return r;
    }
};

// The thin category of a preorder given by leq[x][y] (x <= y).
inline FinCat thin_category(const std::vector<std::string>& names, const std::vector<std::vector<bool>>& leq) {
    int n = (int)names.size();
    FinCat c;
    c.objects = names;
    c.identity.assign(n, -1);
    std::map<std::pair<int, int>, int> id;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (leq[x][y]) {
                id[{x, y}] = (int)c.mors.size();
                c.mors.push_back({x, y, names[x] + "->" + names[y]});
                if (x == y) c.identity[x] = id[{x, y}];
            }
    for (int x = 0; x < n; ++x)
        if (c.identity[x] < 0) throw invariant_error("preorder is not reflexive");
    for (auto& [xy, f] : id)
        for (int z = 0; z < n; ++z)
            if (leq[xy.second][z]) {
                auto it = id.find({xy.first, z});
                if (it == id.end()) throw invariant_error("preorder is not transitive");
                c.table[{id[{xy.second, z}], f}] = it->second;
            }
    return c;
}

// Thin category generated by arrows between the given objects.
inline FinCat generated_thin_category(const std::vector<std::string>& names,
                                      const std::vector<std::pair<int, int>>& arrows) {
    int n = (int)names.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int x = 0; x < n; ++x) leq[x][x] = true;
    for (auto [a, b] : arrows) leq[a][b] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (leq[i][k])
                for (int j = 0; j < n; ++j)
                    if (leq[k][j]) leq[i][j] = true;
    return thin_category(names, leq);
}

inline FinCat terminal_category() { return thin_category({"*"}, {{true}}); }

// ---- nerves and homology ---------------------------------------------------

struct NerveTrunc {
    int max_dim = 0;
    // simplices[k]: dimension k; a 0-simplex is {object}, a k-simplex the
    // chain of its k non-identity morphisms
    std::vector<std::vector<std::vector<int>>> simplices;
    const FinCat* cat = nullptr;
};

inline NerveTrunc nerve(const FinCat& c, int d) {
    NerveTrunc n;
    n.max_dim = d;
    n.cat = &c;
    n.simplices.resize(d + 1);
    for (int x = 0; x < c.size(); ++x) n.simplices[0].push_back({x});
    auto out = c.out_of();
    if (d >= 1)
        for (int f = 0; f < (int)c.mors.size(); ++f)
            if (!c.is_identity(f)) n.simplices[1].push_back({f});
    for (int k = 2; k <= d; ++k)
        for (const auto& s : n.simplices[k - 1])
            for (int g : out[c.mors[s.back()].tgt])
                if (!c.is_identity(g)) {
                    auto t = s;
                    t.push_back(g);
                    n.simplices[k].push_back(t);
                }
    return n;
}

namespace detail {

using SparseCol = std::vector<std::pair<int, Q>>;  // sorted by row

inline SparseCol axpy(const SparseCol& a, const Q& s, const SparseCol& b) {  // a - s*b
    SparseCol r;
    size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            r.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            r.push_back({b[j].first, -s * b[j].second});
            ++j;
        } else {
            Q v = a[i].second - s * b[j].second;
            if (v != 0) r.push_back({a[i].first, v});
            ++i;
            ++j;
        }
    }
    return r;
}

inline int rank_of(std::vector<SparseCol> cols) {
    std::map<int, SparseCol> pivots;
    int rank = 0;
    for (auto& c : cols) {
        while (!c.empty()) {
            auto it = pivots.find(c.back().first);
            if (it == pivots.end()) break;
            Q s = c.back().second / it->second.back().second;
            c = axpy(c, s, it->second);
        }
        if (!c.empty()) {
            pivots.emplace(c.back().first, c);
            ++rank;
        }
    }
    return rank;
}

}  // namespace detail

// rank of the boundary map from dimension k to k-1 of the normalised chain complex
inline int boundary_rank(const NerveTrunc& n, int k) {
    if (k < 1 || k > n.max_dim) return 0;
    const FinCat& c = *n.cat;
    std::map<std::vector<int>, int> index;
    for (int i = 0; i < (int)n.simplices[k - 1].size(); ++i) index[n.simplices[k - 1][i]] = i;
    std::vector<detail::SparseCol> cols;
    for (const auto& s : n.simplices[k]) {
        std::map<int, Q> col;
        if (k == 1) {
            col[index.at({c.mors[s[0]].tgt})] += 1;
            col[index.at({c.mors[s[0]].src})] -= 1;
        } else {
            for (int i = 0; i <= k; ++i) {
                std::vector<int> face;
                bool degenerate = false;
                for (int j = 0; j < k; ++j) {
                    if (i == 0 && j == 0) continue;
                    if (i == k && j == k - 1) continue;
                    if (i > 0 && i < k && j == i) continue;
                    if (i > 0 && i < k && j == i - 1) {
                        int h = c.compose(s[i], s[i - 1]);
                        if (c.is_identity(h)) degenerate = true;
                        face.push_back(h);
                    } else {
                        face.push_back(s[j]);
                    }
                }
                if (degenerate) continue;
                col[index.at(face)] += (i % 2 ? -1 : 1);
            }
        }
        detail::SparseCol sc;
        for (auto& [r, v] : col)
            if (v != 0) sc.push_back({r, v});
        cols.push_back(std::move(sc));
    }
    return detail::rank_of(std::move(cols));
}

inline std::vector<long> betti(const NerveTrunc& n, int d) {
    if (d >= n.max_dim) throw input_error("betti degree must be below the truncation");
    std::vector<int> ranks(d + 2, 0);
    for (int k = 1; k <= d + 1; ++k) ranks[k] = boundary_rank(n, k);
    std::vector<long> b;
    for (int k = 0; k <= d; ++k) b.push_back((long)n.simplices[k].size() - ranks[k] - ranks[k + 1]);
    return b;
}

inline long euler_characteristic(const NerveTrunc& n) {
    long chi = 0;
    for (int k = 0; k <= n.max_dim; ++k) chi += (k % 2 ? -1 : 1) * (long)n.simplices[k].size();
    return chi;
}

// longest chain of non-identity morphisms, or -1 if unbounded
inline int nerve_dimension(const FinCat& c) {
    int n = c.size();
    auto out = c.out_of();
    std::vector<int> depth(n, -2);  // -2 unvisited, -3 in progress
    std::function<int(int)> go = [&](int x) -> int {
        if (depth[x] == -3) return -1;
        if (depth[x] >= 0) return depth[x];
        depth[x] = -3;
        int best = 0;
        for (int f : out[x]) {
            if (c.is_identity(f)) continue;
            int r = go(c.mors[f].tgt);
            if (r < 0) return -1;
            best = std::max(best, r + 1);
        }
        return depth[x] = best;
    };
    int best = 0;
    for (int x = 0; x < n; ++x) {
        int r = go(x);
        if (r < 0) return -1;
        best = std::max(best, r);
    }
    return best;
}

enum class CertificateKind { TerminalObject, InitialObject, HomologyEvidence };

struct Certificate {
    CertificateKind kind = CertificateKind::HomologyEvidence;
    bool positive = false;
    int witness = -1;
    std::vector<long> betti;
};

inline std::string kind_name(CertificateKind k) {
    switch (k) {
        case CertificateKind::TerminalObject: return "TerminalObject";
        case CertificateKind::InitialObject: return "InitialObject";
        default: return "HomologyEvidence";
    }
}

inline std::optional<int> terminal_object(const FinCat& c) {
    for (int t = 0; t < c.size(); ++t) {
        std::vector<int> count(c.size(), 0);
        for (auto& m : c.mors)
            if (m.tgt == t) ++count[m.src];
        if (std::all_of(count.begin(), count.end(), [](int k) { return k == 1; })) return t;
    }
    return std::nullopt;
}

inline std::optional<int> initial_object(const FinCat& c) {
    for (int t = 0; t < c.size(); ++t) {
        std::vector<int> count(c.size(), 0);
        for (auto& m : c.mors)
            if (m.src == t) ++count[m.tgt];
        if (std::all_of(count.begin(), count.end(), [](int k) { return k == 1; })) return t;
    }
    return std::nullopt;
}

inline Certificate certify_contractible(const FinCat& c, int d = 3) {
    Certificate r;
    if (c.size() == 0) return r;
    if (auto t = terminal_object(c)) {
        r.kind = CertificateKind::TerminalObject;
        r.positive = true;
        r.witness = *t;
        return r;
    }
    if (auto t = initial_object(c)) {
        r.kind = CertificateKind::InitialObject;
        r.positive = true;
        r.witness = *t;
        return r;
    }
    r.kind = CertificateKind::HomologyEvidence;
    r.betti = betti(nerve(c, d + 1), d);
    r.positive = r.betti[0] == 1 && std::all_of(r.betti.begin() + 1, r.betti.end(), [](long b) { return b == 0; });
    return r;
}

// ---- label categories ------------------------------------------------------

struct Labelled {
    FinCat cat;
    std::vector<std::string> labels;  // per object, one letter per vertex
    std::vector<std::pair<int, int>> generators;
};

namespace detail {

inline bool relabels_to(const std::string& a, const std::string& b) {
    int diff = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        if (b[i] != 'C' || a[i] == 'C') return false;
        ++diff;
    }
    return diff == 1;
}

inline Labelled labelled_from(const std::vector<std::string>& objs) {
    Labelled r;
    r.labels = objs;
    for (int x = 0; x < (int)objs.size(); ++x)
        for (int y = 0; y < (int)objs.size(); ++y)
            if (relabels_to(objs[x], objs[y])) r.generators.push_back({x, y});
    r.cat = generated_thin_category(objs, r.generators);
    r.cat.check_laws();
    return r;
}

inline std::vector<std::string> labelings_from_constraints(int nv, const std::vector<std::pair<VSet, VSet>>& cons) {
    std::vector<std::string> objs;
    long total = 1;
    for (int i = 0; i < nv; ++i) total *= 3;
    for (long code = 0; code < total; ++code) {
        std::string l(nv, 'A');
        long c = code;
        for (int i = 0; i < nv; ++i) {
            l[i] = "ABC"[c % 3];
            c /= 3;
        }
        for (auto& [lo, hi] : cons) {
            bool ok = true;
            for (int x : lo) ok = ok && l[x] == 'A';
            for (int x : hi) ok = ok && l[x] == 'B';
            if (ok) {
                objs.push_back(l);
                break;
            }
        }
    }
    std::sort(objs.begin(), objs.end());
    return objs;
}

}  // namespace detail

// C(b): labelings of the vertices of b by A, B, C admitting an
// (m-1)-dimensional U with the vertices below U labelled A and those above
// labelled B; arrows turn one A or B into C.
inline Labelled label_category(const Op& b) {
    int m = b->level;
    if (m < 1) throw input_error("label categories need a tree of level >= 1");
    int nv = b->nvert;
    if (nv == 0) return detail::labelled_from({""});
    Shape s = shape_of(b);
    std::vector<std::pair<VSet, VSet>> cons;
    for (auto& U : vertex_subsets(b)) {
        if (!is_m_dimensional({m, b, U}, m - 1)) continue;
        VSet lo, hi;
        for (int x = 0; x < nv; ++x)
            for (int u : U) {
                if (s.below(x, u)) lo.insert(x);
                if (s.below(u, x)) hi.insert(x);
            }
        cons.push_back({lo, hi});
    }
    return detail::labelled_from(detail::labelings_from_constraints(nv, cons));
}

// The full subcategory of the product order {A -> C <- B}^V on the same objects.
inline FinCat product_order_category(const std::vector<std::string>& objs) {
    int n = (int)objs.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            bool ok = true;
            for (size_t i = 0; i < objs[x].size(); ++i)
                ok = ok && (objs[x][i] == objs[y][i] || objs[y][i] == 'C');
            leq[x][y] = ok;
        }
    return thin_category(objs, leq);
}

// Lifting category over x_1 with one white labelled `label`, above y0 in B_{m,n}.
inline Labelled lifting_category(const BimodOp& y0, char label) {
    if (label == 'A' || label == 'B') return detail::labelled_from({std::string(1, label)});
    if (label != 'C') throw input_error("labels are A, B or C");
    const WhiteTree& wt = y0.wt;
    if (wt.whites.empty()) return detail::labelled_from({""});
    std::vector<int> ws(wt.whites.begin(), wt.whites.end());
    std::map<int, int> pos;
    for (int i = 0; i < (int)ws.size(); ++i) pos[ws[i]] = i;
    std::vector<std::pair<VSet, VSet>> cons;
    for (long mask = 0; mask < (1L << ws.size()); ++mask) {
        VSet U;
        for (size_t i = 0; i < ws.size(); ++i)
            if (mask >> i & 1) U.insert(ws[i]);
        if (y0.m < 1 || !is_m_dimensional({wt.level, wt.tree, U}, y0.m - 1)) continue;
        auto [mi, pl] = split_complement(y0, U, false);
        VSet lo, hi;
        for (int x : mi) lo.insert(pos[x]);
        for (int x : pl) hi.insert(pos[x]);
        cons.push_back({lo, hi});
    }
    return detail::labelled_from(detail::labelings_from_constraints((int)ws.size(), cons));
}

// b' obtained by iterating the down construction n-m times, with the
// induced bijection from the whites of y0 to the vertices of b'.
inline std::pair<Op, std::map<int, int>> reduce_to_level_m(const BimodOp& y0) {
    WhiteTree cur = y0.wt;
    std::map<int, int> corr;
    for (int w : cur.whites) corr[w] = w;
    for (int i = 0; i < y0.wt.level - y0.m; ++i) {
        auto d = down(cur);
        for (auto& [w, x] : corr) x = d.correspondence.at(x);
        cur = d.down;
    }
    return {cur.tree, corr};
}

// ---- nested trees and classifier hom-sets ----------------------------------

struct NestedTree {
    BimodOp target;
    std::vector<WhiteTree> nests;  // one per white of target, in increasing order
};

struct NestInsertion {
    BimodOp source;
    // for each white of source: (white index of target, white of its nest)
    std::map<int, std::pair<int, int>> origin;
};

inline NestInsertion insert_nests(const NestedTree& nt) {
    const auto& t = nt.target;
    int n = t.wt.level;
    std::vector<int> ws(t.wt.whites.begin(), t.wt.whites.end());
    if (nt.nests.size() != ws.size()) throw input_error("one nest per white vertex is required");
    BimodOp cur = t;
    std::map<int, std::pair<int, int>> origin;  // current white -> (k, nest white) or (k, -1) if not yet replaced
    for (int k = 0; k < (int)ws.size(); ++k) origin[ws[k]] = {k, -1};
    for (int k = 0; k < (int)ws.size(); ++k) {
        int here = -1;
        for (auto& [w, o] : origin)
            if (o.first == k && o.second == -1) here = w;
        auto c = compose_bimod(t.m, n, cur, here, {t.m, nt.nests[k]});
        std::map<int, std::pair<int, int>> next;
        for (auto& [w, o] : origin)
            if (w != here) next[c.host_whites.at(w)] = o;
        for (auto& [q, nw] : c.guest_whites) next[nw] = {k, q};
        origin = std::move(next);
        cur = c.op;
    }
    return {cur, origin};
}

struct NestBound {
    int max_vertices = 3;
    int max_size = 8;
};

inline std::vector<NestedTree> classifier_hom(int m, int n, const BimodOp& source, const BimodOp& target,
                                              NestBound bound = {}) {
    std::vector<WhiteTree> pool = enumerate_Bmn(m, n, bound.max_vertices, bound.max_size);
    std::vector<int> ws(target.wt.whites.begin(), target.wt.whites.end());
    std::vector<std::vector<const WhiteTree*>> cand(ws.size());
    for (size_t k = 0; k < ws.size(); ++k)
        for (const auto& p : pool)
            if (same(opetopic::target(p.tree), opetopic::source(target.wt.tree, ws[k]))) cand[k].push_back(&p);
    std::vector<NestedTree> out;
    NestedTree nt{target, std::vector<WhiteTree>(ws.size())};
    size_t want = source.wt.whites.size();
    std::string key = source.wt.key();
    std::function<void(size_t, size_t)> go = [&](size_t k, size_t whites) {
        if (whites > want) return;
        if (k == ws.size()) {
            if (whites == want && insert_nests(nt).source.wt.key() == key) out.push_back(nt);
            return;
        }
        for (const WhiteTree* p : cand[k]) {
            nt.nests[k] = *p;
            go(k + 1, whites + p->whites.size());
        }
    };
    go(0, 0);
    return out;
}

// g after f, where f: x -> y and g: y -> z
inline NestedTree compose_nested(const NestedTree& g, const NestedTree& f) {
    auto gi = insert_nests(g);
    if (gi.source.wt.key() != f.target.wt.key()) throw input_error("nested trees are not composable");
    std::vector<int> yws(f.target.wt.whites.begin(), f.target.wt.whites.end());
    NestedTree r{g.target, {}};
    for (int k = 0; k < (int)g.nests.size(); ++k) {
        const WhiteTree& nest = g.nests[k];
        std::vector<int> qs(nest.whites.begin(), nest.whites.end());
        std::vector<WhiteTree> inner;
        for (int q : qs)
            for (int i = 0; i < (int)yws.size(); ++i)
                if (gi.origin.at(yws[i]) == std::pair{k, q}) inner.push_back(f.nests[i]);
        r.nests.push_back(insert_nests({{g.target.m, nest}, inner}).source.wt);
    }
    return r;
}

}  // namespace opetopic
