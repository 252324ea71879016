#include <gtest/gtest.h>

#include <opetopic/polymonad.hpp>

using namespace opetopic;

TEST(Unit, LevelOneUnitIsOneVertexChain) {
    Op u = unit_op(opetopic_level(1), star());
    EXPECT_EQ(u->nvert, 1);
    EXPECT_TRUE(same(u, chain(1)));
    // neutral for substitution on both sides
    for (int k = 1; k <= 4; ++k) {
        EXPECT_TRUE(same(insert(1, chain(k), 0, u), chain(k)));
        EXPECT_TRUE(same(insert(1, u, 0, chain(k)), chain(k)));
    }
}

TEST(Unit, LevelTwoUnitOnArityTwoIsCorolla) {
    Op u = unit_op(opetopic_level(2), chain(2));
    EXPECT_TRUE(same(u, corolla(2)));
    EXPECT_TRUE(same(target(u), chain(2)));
}

TEST(Unit, LevelZeroHasOneOperation) {
    EXPECT_TRUE(same(unit_op(opetopic_level(0), star()), star()));
    EXPECT_EQ(enumerate_ops(0, 4, 4).size(), 1u);
}

TEST(Unit, WrongColourIsRejected) {
    EXPECT_THROW(unit_op(opetopic_level(2), corolla(2)), input_error);
}

TEST(Evaluate, OneVertexTreeGivesItsDecoration) {
    for (const Op& b : enumerate_ops(2, 3, 7)) {
        if (b->bare()) continue;
        Op c = unit(3, b);
        EXPECT_EQ(c->nvert, 1);
        EXPECT_TRUE(same(evaluate(c).op, b)) << show(b);
    }
}

TEST(Evaluate, PlanarTreeCountsLeaves) {
    EXPECT_TRUE(same(evaluate(corolla(3)).op, chain(3)));
    EXPECT_TRUE(same(evaluate(parse_planar("((||)|)")).op, chain(3)));
    EXPECT_TRUE(same(evaluate(trunk()).op, chain(0)));
}

TEST(Evaluate, BareEdgeGivesUnit) {
    EXPECT_TRUE(same(evaluate(planar_leaf()).op, unit(1, star())));
    Op e = bare(3, chain(2));
    EXPECT_TRUE(same(evaluate(e).op, unit(2, chain(2))));
}

TEST(Evaluate, LevelZeroIsADomainError) { EXPECT_THROW(evaluate(star()), domain_error); }

// substitution commutes with taking targets, level 2 and 3
TEST(Evaluate, AgreesWithStepwiseSubstitution) {
    for (int lvl = 2; lvl <= 3; ++lvl) {
        auto ops = enumerate_ops(lvl, 3, lvl == 2 ? 6 : 7);
        long n = 0;
        for (const Op& h : ops)
            for (int v = 0; v < arity(h); ++v)
                for (const Op& g : ops) {
                    if (!same(target(g), source(h, v))) continue;
                    Op hg = insert(lvl, h, v, g);
                    ASSERT_TRUE(same(target(hg), target(h))) << show(h) << " " << v << " " << show(g);
                    EXPECT_EQ(hg->nvert, h->nvert - 1 + g->nvert);
                    ++n;
                }
        EXPECT_GT(n, 0);
    }
}

TEST(Insert, UnitDecorationLeavesHostUnchanged) {
    for (const Op& h : enumerate_ops(2, 4, 9))
        for (int v = 0; v < arity(h); ++v) EXPECT_TRUE(same(insert(2, h, v, unit(2, source(h, v))), h)) << show(h);
}

TEST(Insert, MismatchIsASubstitutionError) {
    EXPECT_THROW(insert(2, corolla(2), 0, corolla(3)), substitution_error);
}

TEST(Insert, AssociativeOnPlanarTrees) {
    auto ops = enumerate_ops(2, 3, 7);
    long checked = 0;
    for (const Op& h : ops)
        for (int v = 0; v < arity(h); ++v)
            for (const Op& g : ops) {
                if (!same(target(g), source(h, v))) continue;
                auto hg = substitute(2, h, v, g);
                for (int w = 0; w < arity(g); ++w)
                    for (const Op& k : ops) {
                        if (!same(target(k), source(g, w))) continue;
                        int pos = -1;
                        for (int q = 0; q < (int)hg.origin.size(); ++q)
                            if (hg.origin[q] == std::pair{v, w}) pos = q;
                        ASSERT_GE(pos, 0);
                        Op lhs = insert(2, hg.op, pos, k);
                        Op rhs = insert(2, h, v, insert(2, g, w, k));
                        EXPECT_TRUE(same(lhs, rhs));
                        ++checked;
                    }
            }
    EXPECT_GT(checked, 100);
}

TEST(Counting, LevelOneHasKPlusOneOperations) {
    for (int k = 0; k <= 8; ++k) EXPECT_EQ(enumerate_ops(1, k, k).size(), (size_t)k + 1) << k;
}

TEST(Counting, LevelTwoFollowsCatalan) {
    const std::uint64_t expected[] = {1, 1, 2, 5, 14, 42, 132};
    for (int v = 1; v <= 7; ++v) {
        long got = 0;
        for (const Op& t : enumerate_ops(2, v, 2 * v - 1))
            if (t->nvert == v) ++got;
        EXPECT_EQ((std::uint64_t)got, expected[v - 1]) << v;
        EXPECT_EQ(ordered_tree_count(v), expected[v - 1]);
        EXPECT_EQ(catalan(v - 1), expected[v - 1]);
    }
}

TEST(Counting, FourVertexPlanarTreesNumberFive) { EXPECT_EQ(ordered_tree_count(4), 5u); }

TEST(Levels, LevelThreeOperationsAreCoherent) {
    for (const Op& o : enumerate_ops(3, 3, 8)) {
        EXPECT_EQ(o->level, 3);
        if (o->bare()) continue;
        for (int v = 0; v < o->nvert; ++v) EXPECT_EQ(source(o, v)->level, 2);
        EXPECT_EQ(target(o)->level, 2);
    }
}

TEST(Levels, ColoursAreOperationsOneLevelDown) {
    for (int n = 2; n <= 3; ++n)
        for (const Op& o : enumerate_ops(n, 3, 7)) EXPECT_EQ(target(o)->level, n - 1);
}

TEST(Levels, AboveMaximumIsACapabilityError) { EXPECT_THROW(opetopic_level(max_level + 1), capability_error); }

TEST(Laws, HoldForMonMonAndNop) {
    EXPECT_TRUE(check_monad_laws(opetopic_level(0), enumerate_ops(0, 4, 4)).pass());
    EXPECT_TRUE(check_monad_laws(opetopic_level(1), enumerate_ops(1, 5, 5)).pass());
    EXPECT_TRUE(check_monad_laws(opetopic_level(2), enumerate_ops(2, 4, 6)).pass());
}

TEST(Parse, RoundTripsPlanarStrings) {
    for (const Op& t : enumerate_ops(2, 4, 9)) EXPECT_TRUE(same(parse_planar(planar_string(t)), t));
    EXPECT_THROW(parse_planar("(|"), input_error);
}
