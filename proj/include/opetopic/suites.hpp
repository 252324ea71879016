#pragma once
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "io.hpp"

namespace opetopic {

inline constexpr int report_schema_version = 1;

struct CheckResult {
    std::string name;
    bool pass = true;
    long instances = 0;
    std::vector<std::string> counterexamples;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckResult> checks;
    json bounds = json::object();
    double seconds = 0;

    bool pass() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    CheckResult& add(std::string name, bool ok, long instances = 1, std::vector<std::string> cex = {}) {
        if (cex.size() > 20) cex.resize(20);
        checks.push_back({std::move(name), ok, instances, std::move(cex)});
        return checks.back();
    }
    json to_json() const {
        json cs = json::array();
        for (auto& c : checks)
            cs.push_back({{"name", c.name},
                          {"status", c.pass ? "pass" : "fail"},
                          {"instances", c.instances},
                          {"counterexamples", c.counterexamples}});
        return json{{"schema", report_schema_version},
                    {"suite", suite},
                    {"status", pass() ? "pass" : "fail"},
                    {"bounds", bounds},
                    {"checks", std::move(cs)},
                    {"seconds", seconds}};
    }
};

struct SuiteOptions {
    std::optional<int> max_vertices, max_leaves, level, m, n, dim, size;
    std::uint64_t seed = 20240601;
    int samples = 100;
};

namespace detail {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

// size bounds that keep the exhaustive sweeps at a few seconds each
inline int default_size(int level, int max_vertices) {
    switch (level) {
        case 0:
        case 1: return max_vertices;
        case 2: return 7;
        default: return 9;
    }
}

inline std::string chain_string(const Chain& c) {
    std::string s;
    for (auto& o : c.objects) s += (s.empty() ? "" : " -> ") + planar_string(o.tree) + "@" + std::to_string(o.stratum);
    return s;
}

}  // namespace detail

// ---- suites -------------------------------------------------------------------------

inline VerificationReport verify_monad_laws(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"monad-laws"};
    int V = o.max_vertices.value_or(4);
    r.bounds = {{"max_vertices", V}};
    int lo = o.level.value_or(0), hi = o.level.value_or(max_level);
    for (int lvl = lo; lvl <= hi; ++lvl) {
        int S = o.size.value_or(detail::default_size(lvl, V));
        auto ops = enumerate_ops(lvl, V, S);
        auto rep = check_monad_laws(OpetopicLevel(lvl), ops);
        r.add("level " + std::to_string(lvl) + " (size <= " + std::to_string(S) + ")", rep.pass(),
              rep.unit_checks + rep.sequential_checks + rep.parallel_checks, rep.counterexamples);
        for (int m = 0; m <= lvl; ++m) {
            if (o.m && *o.m != m) continue;
            auto bops = enumerate_Bmn(m, lvl, V, S);
            auto b = check_monad_laws(BimodMonad(m, lvl), bops);
            r.add("Bimod(" + std::to_string(m) + "," + std::to_string(lvl) + ") (size <= " + std::to_string(S) + ")",
                  b.pass(), b.unit_checks + b.sequential_checks + b.parallel_checks, b.counterexamples);
        }
    }
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_counting(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"counting"};
    int K = o.max_vertices.value_or(8);
    int Vmax = std::min(K, 7);
    r.bounds = {{"level1_max_vertices", K}, {"level2_max_vertices", Vmax}};
    std::vector<std::string> bad;
    for (int k = 0; k <= K; ++k) {
        long got = (long)enumerate_ops(1, k, k).size();
        if (got != k + 1) bad.push_back("level 1, k=" + std::to_string(k) + ": " + std::to_string(got));
    }
    r.add("level-1 operations with <= k vertices number k+1", bad.empty(), K + 1, bad);
    bad.clear();
    for (int v = 1; v <= Vmax; ++v) {
        Enumerator e(2, 2 * v - 1);
        long got = 0;
        for (auto& t : e.all())
            if (t->nvert == v && t->nleaves == 0) ++got;
        if (got != (long)catalan(v - 1) || got != (long)ordered_tree_count(v))
            bad.push_back("v=" + std::to_string(v) + ": " + std::to_string(got) + " vs " + std::to_string(catalan(v - 1)));
    }
    r.add("leafless planar trees with v vertices number Catalan(v-1)", bad.empty(), Vmax, bad);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_calibration(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"calibration"};
    int V = o.max_vertices.value_or(5);
    r.bounds = {{"max_vertices", V}};
    for (int n = 2; n <= 3; ++n) {
        if (o.level && *o.level != n) continue;
        int S = o.size.value_or(n == 2 ? 2 * V + 1 : 9);
        long tot = 0;
        std::vector<std::string> bad;
        for (auto& t : enumerate_ops(n, V, S))
            for (auto& w : vertex_subsets(t)) {
                WhiteTree wt{n, t, w};
                for (int m : {0, n - 1, n}) {
                    ++tot;
                    if (is_m_dimensional(wt, m) != dimension_by_paths(wt, m))
                        bad.push_back(show(t) + " m=" + std::to_string(m) + " whites " + wt.key());
                }
            }
        r.add("path descriptions agree at level " + std::to_string(n) + " (size <= " + std::to_string(S) + ")",
              bad.empty(), tot, bad);
    }
    auto d = down({2, parse_planar("(((||)(||))())"), {2, 4}});
    bool ok = d.down.tree->nvert == 4 && d.down.tree->level == 1 && d.down.whites == VSet{0, 3};
    r.add("worked example: four vertices, first and last white", ok);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_bijection_chain(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"bijection-chain"};
    int V = o.max_vertices.value_or(4);
    r.bounds = {{"max_vertices", V}};
    long tot = 0;
    std::vector<std::string> bad;
    for (int n = 1; n <= max_level; ++n) {
        if (o.level && *o.level != n) continue;
        int S = o.size.value_or(detail::default_size(n, V));
        for (auto& t : enumerate_ops(n, V, S))
            for (auto& w : vertex_subsets(t))
                for (int m = 0; m <= n; ++m) {
                    WhiteTree cur{n, t, w};
                    if (!is_m_dimensional(cur, m)) continue;
                    ++tot;
                    for (int i = 0; i < n - m; ++i) {
                        auto d = down(cur);
                        VSet image;
                        for (auto& [a, b] : d.correspondence) image.insert(b);
                        if (image.size() != cur.whites.size() || image != d.down.whites) {
                            bad.push_back(show(t) + " whites " + cur.key() + " m=" + std::to_string(m));
                            break;
                        }
                        cur = d.down;
                    }
                }
    }
    r.add("every correspondence of an m-dimensional instance is a bijection", bad.empty(), tot, bad);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_label_contractibility(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"label-contractibility"};
    int V = o.max_vertices.value_or(4);
    int S = o.size.value_or(11);
    r.bounds = {{"max_vertices", V}, {"level2_size", S}};
    for (int lvl = 1; lvl <= 2; ++lvl) {
        long tot = 0;
        std::vector<std::string> bad;
        for (auto& b : enumerate_ops(lvl, V, lvl == 1 ? V : S)) {
            auto C = label_category(b);
            C.cat.check_laws();
            auto bt = betti(nerve(C.cat, 3), 2);
            ++tot;
            if (bt != std::vector<long>{1, 0, 0}) bad.push_back(show(b));
        }
        r.add("C(b) has Betti (1,0,0) for level-" + std::to_string(lvl) + " b", bad.empty(), tot, bad);
    }
    auto one = label_category(corolla(2)).cat;
    bool cospan = one.size() == 3 && one.mors.size() == 5 && terminal_object(one).has_value() &&
                  !initial_object(one).has_value();
    r.add("one vertex gives the cospan A -> C <- B", cospan);
    auto bare_edge = label_category(planar_leaf()).cat;
    r.add("bare edge gives the terminal category", bare_edge.size() == 1 && bare_edge.mors.size() == 1);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_b03_bijection(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"b03-bijection"};
    int V = o.max_vertices.value_or(4), L = o.max_leaves.value_or(3);
    r.bounds = {{"max_vertices", V}, {"max_leaves", L}};
    auto U = planar_universe(V, L);
    std::map<std::string, long> elements_into, morphisms_into;
    long pairs = 0, inst = 0;
    std::vector<std::string> count_bad, inverse_bad;
    for (auto& S : U) {
        std::map<std::string, std::vector<WhiteTree>> by;
        for (auto& x : b03_elements(S, V, L)) by[target(x.tree)->key].push_back(x);
        for (auto& T : U) {
            auto H = hom(S, T);
            const auto& B = by[T->key];
            elements_into[T->key] += (long)B.size();
            morphisms_into[T->key] += (long)H.size();
            ++pairs;
            if (B.size() != H.size())
                count_bad.push_back(planar_string(S) + " -> " + planar_string(T) + ": " + std::to_string(B.size()) +
                                    " elements, " + std::to_string(H.size()) + " morphisms");
            for (auto& h : H) {
                ++inst;
                if (!(b03_to_morphism(b03_from_morphism(h)) == h)) inverse_bad.push_back("morphism " + h.key());
            }
            for (auto& x : B) {
                ++inst;
                if (!(b03_from_morphism(b03_to_morphism(x)) == x)) inverse_bad.push_back("element " + x.key());
            }
        }
    }
    bool per_target = elements_into == morphisms_into;
    r.add("element and morphism counts agree for every (source, target)", count_bad.empty(), pairs, count_bad);
    r.add("element and morphism counts agree for every target", per_target, (long)U.size());
    r.add("the two maps are mutually inverse", inverse_bad.empty(), inst, inverse_bad);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_factorisation(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"factorisation"};
    int V = o.max_vertices.value_or(4), L = o.max_leaves.value_or(3);
    r.bounds = {{"max_vertices", V}, {"max_leaves", L}};
    auto U = planar_universe(V, L);
    long n = 0;
    std::vector<std::string> bad;
    for (auto& T : U) {
        auto inerts = inert_maps_into(T);
        for (auto& S : U)
            for (auto& f : hom(S, T)) {
                ++n;
                auto all = all_factorisations(f, inerts);
                auto g = factor_inert_active(f);
                bool ok = all.size() == 1 && all[0].active == g.active && all[0].inert == g.inert &&
                          compose(g.inert, g.active) == f;
                if (!ok) bad.push_back(f.key() + " has " + std::to_string(all.size()) + " factorisations");
            }
    }
    r.add("every morphism factors as inert after active, uniquely", bad.empty(), n, bad);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_strata(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"strata"};
    int V = o.max_vertices.value_or(8), L = o.max_leaves.value_or(3);
    r.bounds = {{"max_vertices", V}, {"max_leaves", L}};
    long n = 0;
    std::vector<std::string> bad;
    for (auto& T : planar_universe(V, L)) {
        ++n;
        if ((int)strata(T).size() != T->nleaves + 1) bad.push_back(planar_string(T));
    }
    r.add("|strata(T)| = leaves(T) + 1", bad.empty(), n, bad);
    r.add("the three-leaf example has four strata", strata(parse_planar("((||)|)")).size() == 4);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_c_category(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"c-category"};
    int N = o.n.value_or(4), NB = std::min(N, 3);
    r.bounds = {{"max_n", N}, {"betti_max_n", NB}};
    std::vector<std::string> bad;
    for (int n = 0; n <= N; ++n) {
        long expect = (n + 1) + 2 * ((1L << (n + 1)) - 1) + 1;
        if ((long)c_objects(n).size() != expect) bad.push_back("n=" + std::to_string(n));
    }
    r.add("object count (n+1) + 2(2^(n+1)-1) + 1", bad.empty(), N + 1, bad);
    r.add("C[1] has 9 objects", c_objects(1).size() == 9);
    bad.clear();
    for (int n = 0; n <= NB; ++n) {
        auto C = c_category(n);
        auto bt = betti(nerve(C, 4), 3);
        if (bt != std::vector<long>{1, 0, 0, 0}) bad.push_back("n=" + std::to_string(n));
    }
    r.add("N(C[n]) has Betti (1,0,0,0)", bad.empty(), NB + 1, bad);
    bad.clear();
    for (int n = 0; n <= N; ++n) {
        std::set<std::vector<Q>> seen;
        for (auto& obj : c_objects(n)) {
            auto p = c_simplex_map(n, obj);
            Q sum = 0;
            bool nonneg = true;
            for (auto& c : p) {
                sum += c;
                if (c < 0) nonneg = false;
            }
            if (sum != 1 || !nonneg || (int)p.size() != n + 2) bad.push_back(c_name(obj) + " is not barycentric");
            if (!seen.insert(p).second) bad.push_back(c_name(obj) + " collides");
        }
    }
    r.add("simplex map injective, barycentric, sums to 1", bad.empty(), N + 1, bad);
    r.seconds = sw.seconds();
    return r;
}

// the worked three-tree chain and its seven layered trees
inline Chain worked_chain() {
    Chain c;
    c.objects = {{corolla(4), 0}, {parse_planar("((||(||))(|||))"), 0}, {parse_planar("(((||)(||))((||)(||)))"), 0}};
    c.maps = {{c.objects[0].tree, c.objects[1].tree, {0, 2, 3, 4, 7}, {"f01"}},
              {c.objects[1].tree, c.objects[2].tree, {0, 1, 3, 4, 5, 6, 7, 8, 9, 13, 14}, {"f12"}}};
    return c;
}

inline std::map<unsigned, std::string> worked_chain_layers() {
    return {{0b001, "(||||)"},        {0b010, "(|||||||)"},      {0b100, "(||||||||)"},
            {0b011, "(||(||)(|||))"}, {0b110, "(||||(||)||)"},   {0b101, "(||(||)(||||))"},
            {0b111, "(||(||)((||)||))"}};
}

inline VerificationReport verify_chain_extension(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"chain-extension"};
    // exhaustive universes per chain length; beyond them, seeded samples over the full bound
    int V = o.max_vertices.value_or(4), L = o.max_leaves.value_or(3);
    std::vector<std::pair<int, int>> exhaustive = {{V, L}, {std::min(V, 3), std::min(L, 2)}, {std::min(V, 2), std::min(L, 2)}};
    int N = o.n.value_or(2);
    r.bounds = {{"max_n", N}, {"max_vertices", V}, {"max_leaves", L}, {"samples", o.samples * 3}, {"seed", o.seed}};
    auto run = [&](const Chain& c, std::vector<std::string>& bad) {
        try {
            auto rep = check_extension(extend_chain(c));
            if (!rep.pass()) bad.push_back(detail::chain_string(c) + ": " + rep.problems[0]);
        } catch (const std::exception& e) {
            bad.push_back(detail::chain_string(c) + ": " + e.what());
        }
    };
    for (int n = 0; n <= N && n < (int)exhaustive.size(); ++n) {
        auto [v, l] = exhaustive[n];
        auto P = pointed_universe(planar_universe(v, l));
        long count = 0;
        std::vector<std::string> bad;
        std::function<void(Chain&)> go = [&](Chain& c) {
            if (c.n() == n) {
                ++count;
                run(c, bad);
                return;
            }
            for (auto& x : P)
                for (auto& f : pointed_hom(c.objects.back(), x)) {
                    c.objects.push_back(x);
                    c.maps.push_back(f);
                    go(c);
                    c.objects.pop_back();
                    c.maps.pop_back();
                }
        };
        for (auto& x : P) {
            Chain c;
            c.objects = {x};
            go(c);
        }
        r.add("n=" + std::to_string(n) + " exhaustive over <= " + std::to_string(v) + " vertices, <= " +
                  std::to_string(l) + " leaves",
              bad.empty(), count, bad);
    }
    std::mt19937_64 rng(o.seed);
    auto P = pointed_universe(planar_universe(V, L));
    for (int n = 1; n <= N; ++n) {
        long count = 0;
        std::vector<std::string> bad;
        std::uniform_int_distribution<size_t> pick(0, P.size() - 1);
        for (int k = 0; k < o.samples * 3 / N; ++k) {
            Chain c;
            c.objects = {P[pick(rng)]};
            while (c.n() < n) {
                std::vector<std::pair<const PointedTree*, OmegaMorphism>> next;
                for (auto& x : P)
                    for (auto& f : pointed_hom(c.objects.back(), x)) next.push_back({&x, f});
                std::uniform_int_distribution<size_t> step(0, next.size() - 1);
                auto& [x, f] = next[step(rng)];
                c.objects.push_back(*x);
                c.maps.push_back(f);
            }
            ++count;
            run(c, bad);
        }
        r.add("n=" + std::to_string(n) + " sampled over <= " + std::to_string(V) + " vertices, <= " +
                  std::to_string(L) + " leaves",
              bad.empty(), count, bad);
    }
    auto x = extend_chain(worked_chain());
    std::vector<std::string> bad;
    for (auto& [mask, expect] : worked_chain_layers()) {
        auto got = planar_string(x.at({'B', mask}).tree);
        if (got != expect) bad.push_back("layer " + std::to_string(mask) + ": " + got + " instead of " + expect);
    }
    r.add("worked three-tree chain gives the seven expected layered trees", bad.empty() && check_extension(x).pass(),
          7, bad);
    r.seconds = sw.seconds();
    return r;
}

inline VerificationReport verify_kontsevich(const SuiteOptions& o) {
    detail::Stopwatch sw;
    VerificationReport r{"kontsevich"};
    int m = o.dim.value_or(3), V = o.max_vertices.value_or(4), L = o.max_leaves.value_or(4);
    r.bounds = {{"dim", m}, {"max_points", 4}, {"max_vertices", V}, {"max_leaves", L},
                {"samples", o.samples}, {"seed", o.seed}};
    auto laws = operad_laws(4, m, o.seed);
    r.add("operad associativity, unit and interchange", laws.pass(), laws.checks, laws.problems);
    auto mult = base_point_multiplicativity(V, L, m);
    r.add("base points are multiplicative", mult.pass(), mult.checks, mult.problems);
    auto ret = retraction_checks(planar_universe(V, std::min(L, 3)), o.samples, m, o.seed);
    r.add("retraction identity and naturality", ret.pass(), ret.checks, ret.problems);
    r.seconds = sw.seconds();
    return r;
}

struct Suite {
    std::string description;
    std::function<VerificationReport(const SuiteOptions&)> run;
};

inline const std::map<std::string, Suite>& suites() {
    static const std::map<std::string, Suite> s = {
        {"monad-laws", {"unit and associativity for every level and every Bimod(m,n)", verify_monad_laws}},
        {"counting", {"operation counts against independent recursions", verify_counting}},
        {"calibration", {"dimension by iterated down against the path descriptions", verify_calibration}},
        {"bijection-chain", {"white correspondences of m-dimensional instances are bijections", verify_bijection_chain}},
        {"label-contractibility", {"label categories C(b) are contractible", verify_label_contractibility}},
        {"b03-bijection", {"B(0,3) against morphisms of the planar dendroidal category", verify_b03_bijection}},
        {"factorisation", {"inert-active factorisation exists and is unique", verify_factorisation}},
        {"strata", {"stratum counts", verify_strata}},
        {"c-category", {"the categories C[n] and their simplex maps", verify_c_category}},
        {"chain-extension", {"extension of chains to C[n]", verify_chain_extension}},
        {"kontsevich", {"the Kontsevich model: operad laws, base points, retractions", verify_kontsevich}},
    };
    return s;
}

}  // namespace opetopic
