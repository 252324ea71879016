#include <gtest/gtest.h>

#include <opetopic/opetopic.hpp>

using namespace opetopic;

namespace {
Op P(const char* s) { return parse_planar(s); }

Chain single(const char* s, int k) {
    Chain c;
    c.objects = {{P(s), k}};
    return c;
}
}  // namespace

TEST(Generators, InnerFaceContractsToCorolla) {
    auto f = apply_generator(GeneratorKind::InnerFace, P("((||)|)"), 1);
    EXPECT_TRUE(same(f.source, corolla(3)));
    EXPECT_TRUE(is_valid_morphism(f));
    EXPECT_TRUE(is_active(f));
}

TEST(Generators, OuterFaceRemovesTopVertex) {
    auto f = apply_generator(GeneratorKind::OuterFace, P("((||)|)"), 1);
    EXPECT_TRUE(same(f.source, corolla(2)));
    EXPECT_EQ(f.edges, (std::vector<int>{0, 1, 4}));
    EXPECT_TRUE(is_inert(f));
}

TEST(Generators, OuterFaceAtTheRoot) {
    auto f = outer_face(P("((||)|)"), 0);
    EXPECT_TRUE(same(f.source, corolla(2)));
    EXPECT_EQ(f.edges, (std::vector<int>{1, 2, 3}));
}

TEST(Generators, DegeneracyMergesUnaryVertex) {
    auto f = apply_generator(GeneratorKind::Degeneracy, P("((|)|)"), 1);
    EXPECT_TRUE(same(f.target, corolla(2)));
    EXPECT_EQ(f.edges, (std::vector<int>{0, 1, 1, 2}));
}

TEST(Generators, InvalidSitesAreInputErrors) {
    EXPECT_THROW(outer_face(P("((||)(||))"), 0), input_error);
    EXPECT_THROW(degeneracy(corolla(2), 0), input_error);
    EXPECT_THROW(edge_inclusion(corolla(2), 7), input_error);
}

TEST(Generators, DegeneracyAfterFaceOnInsertedUnaryIsIdentity) {
    Op T = P("((|)|)");
    auto s = degeneracy(T, 1);
    auto d = inner_face(T, 1);  // contracting the edge below the unary vertex
    EXPECT_EQ(compose(s, d), identity_morphism(corolla(2)));
}

TEST(Factorisation, IdentityFactorsTrivially) {
    Op T = P("((||)|)");
    auto f = factor_inert_active(identity_morphism(T));
    EXPECT_EQ(f.active, identity_morphism(T));
    EXPECT_EQ(f.inert, identity_morphism(T));
}

TEST(Factorisation, InnerFacesAreActive) {
    Op T = P("(((||))|)");
    auto f = compose(inner_face(T, 1), inner_face(inner_face(T, 1).source, 1));
    auto g = factor_inert_active(f);
    EXPECT_EQ(g.active, f);
    EXPECT_EQ(g.inert, identity_morphism(T));
}

TEST(Factorisation, ExistsAndIsUniqueOnSmallTrees) {
    auto U = planar_universe(3, 3);
    for (const Op& T : U) {
        auto inerts = inert_maps_into(T);
        for (const Op& S : U)
            for (auto& f : hom(S, T)) {
                auto all = all_factorisations(f, inerts);
                ASSERT_EQ(all.size(), 1u) << f.key();
                auto g = factor_inert_active(f);
                EXPECT_EQ(compose(g.inert, g.active), f);
                EXPECT_TRUE(is_active(g.active));
                EXPECT_TRUE(is_inert(g.inert));
            }
    }
}

TEST(Strata, CountIsLeavesPlusOne) {
    EXPECT_EQ(strata(P("((||)|)")).size(), 4u);
    EXPECT_EQ(strata(planar_leaf()).size(), 2u);
    EXPECT_EQ(strata(trunk()).size(), 1u);
    for (const Op& T : planar_universe(5, 4)) EXPECT_EQ((int)strata(T).size(), T->nleaves + 1);
}

TEST(Strata, AlphaIsFunctorial) {
    auto U = planar_universe(2, 2);
    for (const Op& A : U)
        for (const Op& B : U)
            for (auto& f : hom(A, B))
                for (const Op& C : U)
                    for (auto& g : hom(B, C))
                        for (int k = 0; k <= A->nleaves; ++k) EXPECT_EQ(alpha(compose(g, f), k), alpha(g, alpha(f, k)));
}

TEST(B03, WhiteCorollaIsIdentity) {
    for (const Op& S : planar_universe(3, 3)) {
        std::vector<Op> kids;
        for (int v = 0; v < S->nvert; ++v) kids.push_back(bare3(source(S, v)));
        WhiteTree x{3, node(3, S, kids), {0}};
        EXPECT_EQ(b03_to_morphism(x), identity_morphism(S)) << planar_string(S);
    }
}

TEST(B03, BlackRootGivesInert) {
    Op T = P("((||)|)");
    auto f = outer_face(T, 1);
    auto x = b03_from_morphism(f);
    EXPECT_EQ(x.whites, (VSet{1}));
    EXPECT_TRUE(is_inert(b03_to_morphism(x)));
}

TEST(B03, CountsAgreeAndMapsAreInverse) {
    auto U = planar_universe(3, 3);
    for (const Op& S : U)
        for (const Op& T : U) {
            auto H = hom(S, T);
            auto B = b03_elements(S, T);
            EXPECT_EQ(B.size(), H.size()) << planar_string(S) << " -> " << planar_string(T);
            for (auto& h : H) EXPECT_EQ(b03_to_morphism(b03_from_morphism(h)), h);
            for (auto& x : B) EXPECT_EQ(b03_from_morphism(b03_to_morphism(x)), x);
        }
}

TEST(B03, MalformedElementIsRejected) {
    EXPECT_THROW(b03_to_morphism({3, unit(3, corolla(2)), {}}), input_error);
}

TEST(CCategory, ObjectCounts) {
    EXPECT_EQ(c_category(0).size(), 4);
    EXPECT_EQ(c_category(1).size(), 9);
    EXPECT_EQ(c_category(2).size(), 18);
    for (int n = 0; n <= 4; ++n) EXPECT_EQ((long)c_objects(n).size(), (n + 1) + 2 * ((1L << (n + 1)) - 1) + 1);
}

TEST(CCategory, ZeroIsAZigzag) {
    auto c = c_category(0);
    auto gens = c.generating();
    EXPECT_EQ(gens.size(), 3u);
    EXPECT_EQ(betti(nerve(c, 3), 2), (std::vector<long>{1, 0, 0}));
}

TEST(CCategory, NervesAreAcyclic) {
    for (int n = 0; n <= 2; ++n) EXPECT_EQ(betti(nerve(c_category(n), 4), 3), (std::vector<long>{1, 0, 0, 0}));
}

TEST(SimplexMap, WorkedValues) {
    EXPECT_EQ(c_simplex_map(1, {'A', 0b11}), (std::vector<Q>{0, 1, 0}));
    EXPECT_EQ(c_simplex_map(1, {'B', 0b11}), (std::vector<Q>{Q(1, 3), Q(1, 3), Q(1, 3)}));
    EXPECT_EQ(c_simplex_map(1, {'D', 0}), (std::vector<Q>{0, 0, 1}));
}

TEST(SimplexMap, InvalidObjectsAreRejected) {
    EXPECT_THROW(c_simplex_map(1, {'A', 0b10}), input_error);
    EXPECT_THROW(c_simplex_map(1, {'B', 0}), input_error);
    EXPECT_THROW(c_simplex_map(1, {'D', 1}), input_error);
}

TEST(SimplexMap, MaximalChainsAreAffinelyIndependent) {
    for (int n = 0; n <= 2; ++n) {
        auto objs = c_objects(n);
        auto c = c_category(n);
        int N = (int)objs.size();
        auto leq = [&](int a, int b) { return c_leq(objs[a], objs[b]); };
        // longest chains by depth-first search over strict relations
        std::vector<int> chain;
        std::function<void(int)> go = [&](int a) {
            chain.push_back(a);
            bool extended = false;
            for (int b = 0; b < N; ++b)
                if (b != a && leq(a, b)) {
                    extended = true;
                    go(b);
                }
            if (!extended && (int)chain.size() == n + 2) {
                // rank of the difference vectors must be n+1
                std::vector<std::vector<Q>> rows;
                auto p0 = c_simplex_map(n, objs[chain[0]]);
                for (size_t k = 1; k < chain.size(); ++k) {
                    auto p = c_simplex_map(n, objs[chain[k]]);
                    for (size_t i = 0; i < p.size(); ++i) p[i] -= p0[i];
                    rows.push_back(p);
                }
                int rank = 0;
                for (size_t col = 0; col < p0.size() && rank < (int)rows.size(); ++col) {
                    int piv = -1;
                    for (int r = rank; r < (int)rows.size(); ++r)
                        if (rows[r][col] != 0) piv = r;
                    if (piv < 0) continue;
                    std::swap(rows[rank], rows[piv]);
                    for (int r = 0; r < (int)rows.size(); ++r)
                        if (r != rank && rows[r][col] != 0) {
                            Q s = rows[r][col] / rows[rank][col];
                            for (size_t i = 0; i < p0.size(); ++i) rows[r][i] -= s * rows[rank][i];
                        }
                    ++rank;
                }
                EXPECT_EQ(rank, n + 1);
            }
            EXPECT_LE((int)chain.size(), n + 2);
            chain.pop_back();
        };
        for (int a = 0; a < N; ++a) go(a);
        (void)c;
    }
}

TEST(ChainExtension, SingleTreeContractsToCorolla) {
    for (const Op& T : planar_universe(3, 3))
        for (int k = 0; k <= T->nleaves; ++k) {
            Chain c;
            c.objects = {{T, k}};
            auto x = extend_chain(c);
            EXPECT_TRUE(same(x.at({'B', 1}).tree, corolla(T->nleaves))) << planar_string(T);
            EXPECT_TRUE(check_extension(x).pass());
        }
}

TEST(ChainExtension, WorkedChainReproducesTheLayers) {
    auto x = extend_chain(worked_chain());
    for (auto& [mask, s] : worked_chain_layers()) EXPECT_EQ(planar_string(x.at({'B', mask}).tree), s) << mask;
    auto rep = check_extension(x);
    EXPECT_TRUE(rep.pass()) << (rep.problems.empty() ? "" : rep.problems[0]);
    EXPECT_TRUE(same(x.at({'D', 0}).tree, trunk()));
}

TEST(ChainExtension, TauIsATrunkBlowup) {
    auto x = extend_chain(worked_chain());
    for (auto& o : x.objects)
        if (o.label == 'B') EXPECT_TRUE(is_trunk_blowup(x.map(o, {'C', o.subset}))) << c_name(o);
}

TEST(ChainExtension, DegenerateChainsAreFunctorial) {
    Chain c;
    c.objects = {{planar_leaf(), 0}, {P("(|)"), 0}, {planar_leaf(), 0}};
    c.maps = {edge_inclusion(P("(|)"), 0), degeneracy(P("(|)"), 0)};
    EXPECT_TRUE(check_extension(extend_chain(c)).pass());
}

TEST(ChainExtension, NonComposableChainIsRejected) {
    Chain c;
    c.objects = {{corolla(2), 0}, {corolla(3), 0}};
    c.maps = {identity_morphism(corolla(2))};
    EXPECT_THROW(extend_chain(c), input_error);
}

TEST(ChainExtension, RestrictionToAnInitialSegment) {
    auto full = worked_chain();
    Chain front;
    front.objects = {full.objects[0], full.objects[1]};
    front.maps = {full.maps[0]};
    auto x = extend_chain(full);
    auto y = extend_chain(front);
    for (unsigned s = 1; s < 4; ++s) {
        EXPECT_TRUE(same(x.at({'B', s}).tree, y.at({'B', s}).tree)) << s;
        EXPECT_TRUE(same(x.at({'C', s}).tree, y.at({'C', s}).tree)) << s;
        EXPECT_EQ(x.map({'B', s}, {'C', s}), y.map({'B', s}, {'C', s}));
    }
}

TEST(Zigzag, TrunkAtItsOnlyStratum) {
    auto z = zigzag(single("()", 0));
    EXPECT_EQ(z.sigma, identity_morphism(trunk()));
    EXPECT_TRUE(is_trunk_blowup(z.tau));
    EXPECT_TRUE(same(z.upsilon.source, trunk()));
}

TEST(Zigzag, TwoLeafCorollaMiddleStratum) {
    auto z = zigzag(single("(||)", 1));
    EXPECT_EQ(planar_string(z.tau.target), "(|()|)");
    EXPECT_TRUE(is_trunk_blowup(z.tau));
    EXPECT_EQ(z.sigma, identity_morphism(corolla(2)));
    EXPECT_EQ(z.upsilon.edges, (std::vector<int>{2}));
}
