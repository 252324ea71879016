#include <gtest/gtest.h>

#include <opetopic/kontsevich.hpp>

using namespace opetopic;

namespace {
Op P(const char* s) { return parse_planar(s); }
Vec v2(Q a, Q b) { return {a, b}; }
}  // namespace

TEST(Configuration, TwoPointsAlongTheAxis) {
    auto x = from_configuration({v2(0, 0), v2(1, 0)});
    EXPECT_EQ(x.points, 2);
    EXPECT_EQ(x.get(0, 1), v2(1, 0));
    EXPECT_EQ(x.get(1, 0), v2(-1, 0));
}

TEST(Configuration, ThreeFourFive) {
    auto x = from_configuration({v2(0, 0), v2(3, 4), v2(6, 8)});
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) EXPECT_EQ(x.get(i, j), v2(Q(3, 5), Q(4, 5)));
    EXPECT_TRUE(is_unit_everywhere(x));
}

TEST(Configuration, TranslationAndScalingInvariance) {
    std::vector<Vec> pts{v2(0, 0), v2(4, 3), v2(0, 6), v2(8, 6)};
    auto x = from_configuration(pts);
    for (auto& p : pts) {
        p[0] = 7 * p[0] / 2 + Q(5, 3);
        p[1] = 7 * p[1] / 2 - 11;
    }
    EXPECT_EQ(from_configuration(pts), x);
}

TEST(Configuration, CoincidentPointsAreRejected) {
    EXPECT_THROW(from_configuration({v2(1, 1), v2(1, 1)}), input_error);
}

TEST(Configuration, IrrationalDistanceIsADomainError) {
    EXPECT_THROW(from_configuration({v2(0, 0), v2(1, 1)}), domain_error);
}

TEST(Partial, OnePointElementIsAUnit) {
    auto x = from_configuration({v2(0, 0), v2(3, 4), v2(3, 0)});
    DirectionMatrix one(2, 1);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(compose_partial(x, i, one), x);
    EXPECT_EQ(compose_partial(one, 0, x), x);
}

TEST(Partial, EmptyElementDeletesARow) {
    auto x = from_configuration({v2(0, 0), v2(3, 4), v2(3, 0)});
    auto r = compose_partial(x, 1, DirectionMatrix(2, 0));
    ASSERT_EQ(r.points, 2);
    EXPECT_EQ(r.get(0, 1), x.get(0, 2));
}

TEST(Partial, BlockRule) {
    auto x = from_configuration({v2(0, 0), v2(3, 4)});
    auto y = from_configuration({v2(0, 0), v2(0, 1)});
    auto r = compose_partial(x, 0, y);
    ASSERT_EQ(r.points, 3);
    EXPECT_EQ(r.get(0, 1), v2(0, 1));
    EXPECT_EQ(r.get(0, 2), x.get(0, 1));
    EXPECT_EQ(r.get(1, 2), x.get(0, 1));
}

TEST(Partial, InvalidIndexIsRejected) {
    EXPECT_THROW(compose_partial(DirectionMatrix(2, 2), 2, DirectionMatrix(2, 1)), input_error);
}

TEST(Partial, OperadLawsOnSmallIndexSets) {
    auto r = operad_laws(4, 3, 7);
    EXPECT_TRUE(r.pass()) << (r.problems.empty() ? "" : r.problems[0]);
    EXPECT_GT(r.checks, 500);
}

TEST(Partial, RandomElementsAreUnit) {
    std::mt19937_64 rng(1);
    for (int n = 0; n <= 5; ++n) EXPECT_TRUE(is_unit_everywhere(random_element(3, n, rng)));
}

TEST(BasePoint, LinearTreeGoesUp) {
    auto b = base_point(P("((|))"), 2);
    EXPECT_EQ(b.value.get(0, 1), basis_vector(2, 0));
}

TEST(BasePoint, SiblingsGoRight) {
    auto b = base_point(P("((|)(|))"), 2);
    EXPECT_EQ(b.value.get(1, 2), basis_vector(2, 1));
    EXPECT_EQ(b.value.get(0, 1), basis_vector(2, 0));
    EXPECT_EQ(b.value.get(0, 2), basis_vector(2, 0));
}

TEST(BasePoint, EntriesAreBasisVectors) {
    for (const Op& T : planar_universe(4, 3)) {
        auto b = base_point(T, 3);
        for (auto& v : b.value.entries) EXPECT_TRUE(v == basis_vector(3, 0) || v == basis_vector(3, 1));
    }
}

// Substituting (|()) into the root of (()) makes the old top vertex a sibling
// of the new trunk, while the block rule keeps the old "below" direction.
TEST(BasePoint, SubstitutionCanTurnAboveIntoBeside) {
    Op Pt = P("(())"), Qt = P("(|())");
    Op b = node(3, Pt, {black_vertex(Qt), bare3(source(Pt, 1))});
    auto got = hyper_compose(b, {base_point(Pt, 2).value, base_point(Qt, 2).value}, 2);
    auto want = base_point(b->target, 2).value;
    EXPECT_EQ(planar_string(b->target), "(()())");
    EXPECT_NE(got, want);
    EXPECT_FALSE(base_point_multiplicativity(3, 2, 2).pass());
}

TEST(BasePoint, MultiplicativeOnCorollaSubstitutions) {
    // substituting a corolla never changes the relative position of other vertices
    for (const Op& Pt : planar_universe(3, 3))
        for (int v = 0; v < Pt->nvert; ++v) {
            Op C = corolla(source(Pt, v)->nvert);
            std::vector<Op> kids;
            for (int u = 0; u < Pt->nvert; ++u) kids.push_back(u == v ? black_vertex(C) : bare3(source(Pt, u)));
            Op b = node(3, Pt, kids);
            EXPECT_EQ(hyper_compose(b, {base_point(Pt, 2).value, base_point(C, 2).value}, 2),
                      base_point(b->target, 2).value);
        }
}

TEST(Presheaf, IdentityActsTrivially) {
    std::mt19937_64 rng(3);
    for (const Op& T : planar_universe(3, 3)) {
        HyperElement y{T, random_element(3, T->nvert, rng)};
        EXPECT_EQ(presheaf_map(identity_morphism(T), y).value, y.value);
    }
}

TEST(Presheaf, TrunkBlowupAddsAnUpwardPoint) {
    Op T = P("(())");
    auto d = inner_face(T, 1);
    ASSERT_TRUE(same(d.source, trunk()));
    HyperElement y{trunk(), DirectionMatrix(2, 1)};
    auto z = presheaf_map(d, y);
    ASSERT_EQ(z.value.points, 2);
    EXPECT_EQ(z.value.get(0, 1), basis_vector(2, 0));
}

TEST(Presheaf, ShapeMismatchIsRejected) {
    HyperElement y{corolla(2), DirectionMatrix(2, 1)};
    EXPECT_THROW(presheaf_map(identity_morphism(corolla(3)), y), input_error);
}

TEST(Retraction, UndoesTrunkBlowups) {
    auto r = retraction_checks(planar_universe(4, 3), 0, 3, 11);
    EXPECT_TRUE(r.pass()) << (r.problems.empty() ? "" : r.problems[0]);
    EXPECT_GT(r.checks, 10);
}

TEST(Retraction, NaturalOnSeededSamples) {
    auto r = retraction_checks(planar_universe(3, 3), 100, 3, 20240601);
    EXPECT_TRUE(r.pass()) << (r.problems.empty() ? "" : r.problems[0]);
}

TEST(Retraction, TrunkOnlyTreeLosesOnePoint) {
    Op T = P("(())");
    std::mt19937_64 rng(5);
    HyperElement z{T, random_element(3, 2, rng)};
    auto r = retraction(T, 1, z);
    EXPECT_TRUE(same(r.shape, trunk()));
    EXPECT_EQ(r.value.points, 1);
}

TEST(Retraction, NonTrunkEdgeIsAPreconditionError) {
    HyperElement z{P("((||))"), DirectionMatrix(2, 2)};
    EXPECT_THROW(retraction(z.shape, 1, z), precondition_error);
    EXPECT_THROW(retraction(z.shape, 0, z), precondition_error);
}

TEST(Retraction, QuotientNeedsALoneTrunkImage) {
    Op S = P("(())");
    auto q = quotient_morphism(identity_morphism(S), 1);
    ASSERT_TRUE(q);
    EXPECT_EQ(*q, identity_morphism(trunk()));
}
