#include <gtest/gtest.h>

#include <algorithm>
#include <opetopic/dendroidal.hpp>
#include <opetopic/fincat.hpp>

using namespace opetopic;

namespace {
FinCat square() {
    // a -> b <- c -> d <- a
    std::vector<std::vector<bool>> leq(4, std::vector<bool>(4, false));
    for (int i = 0; i < 4; ++i) leq[i][i] = true;
    leq[0][1] = leq[2][1] = leq[2][3] = leq[0][3] = true;
    return thin_category({"a", "b", "c", "d"}, leq);
}
FinCat discrete2() { return thin_category({"x", "y"}, {{true, false}, {false, true}}); }
}  // namespace

TEST(Nerve, TerminalCategoryIsAPoint) {
    auto n = nerve(terminal_category(), 3);
    EXPECT_EQ(n.simplices[0].size(), 1u);
    for (int k = 1; k <= 3; ++k) EXPECT_TRUE(n.simplices[k].empty());
    EXPECT_EQ(betti(n, 2), (std::vector<long>{1, 0, 0}));
}

TEST(Nerve, COneHasNineVertices) { EXPECT_EQ(nerve(c_category(1), 2).simplices[0].size(), 9u); }

TEST(Nerve, TwoVertexLinearLabelCategory) {
    auto n = nerve(label_category(chain(2)).cat, 2);
    EXPECT_EQ(n.simplices[0].size(), 5u);
    EXPECT_EQ(n.simplices[1].size(), 4u);
}

TEST(Betti, SquareBoundaryIsACircle) {
    auto c = square();
    c.check_laws();
    EXPECT_EQ(betti(nerve(c, 3), 1), (std::vector<long>{1, 1}));
    EXPECT_FALSE(certify_contractible(c).positive);
}

TEST(Betti, EulerCharacteristicMatchesAlternatingSum) {
    for (auto c : {square(), c_category(1), c_category(2), label_category(parse_planar("((||)|)")).cat}) {
        int d = nerve_dimension(c);
        auto n = nerve(c, d + 1);
        auto b = betti(n, d);
        long alt = 0;
        for (int k = 0; k <= d; ++k) alt += (k % 2 ? -1 : 1) * b[k];
        EXPECT_EQ(euler_characteristic(n), alt);
    }
}

TEST(Certificate, TerminalObjectPreferred) {
    auto cert = certify_contractible(label_category(corolla(2)).cat);
    EXPECT_TRUE(cert.positive);
    EXPECT_EQ(cert.kind, CertificateKind::TerminalObject);
}

TEST(Certificate, DiscreteTwoObjectsIsNegative) {
    auto cert = certify_contractible(discrete2());
    EXPECT_FALSE(cert.positive);
    EXPECT_EQ(cert.kind, CertificateKind::HomologyEvidence);
    EXPECT_EQ(cert.betti[0], 2);
}

TEST(Certificate, ThreeVertexPlanarTreeByHomology) {
    for (auto s : {"((||)(||))", "(((||)))", "((|)|(|))"}) {
        auto cert = certify_contractible(label_category(parse_planar(s)).cat);
        EXPECT_TRUE(cert.positive) << s;
        if (cert.kind == CertificateKind::HomologyEvidence) EXPECT_EQ(cert.betti, (std::vector<long>{1, 0, 0, 0}));
    }
}

TEST(LabelCategory, BareEdgeIsTerminal) {
    auto c = label_category(planar_leaf()).cat;
    EXPECT_EQ(c.size(), 1);
    EXPECT_EQ(c.mors.size(), 1u);
}

TEST(LabelCategory, OneVertexIsACospan) {
    auto l = label_category(corolla(2));
    EXPECT_EQ(l.cat.size(), 3);
    auto labels = l.labels;
    std::sort(labels.begin(), labels.end());
    EXPECT_EQ(labels, (std::vector<std::string>{"A", "B", "C"}));
    EXPECT_EQ(l.cat.generating().size(), 2u);
    auto t = terminal_object(l.cat);
    ASSERT_TRUE(t);
    EXPECT_EQ(l.labels[*t], "C");
}

TEST(LabelCategory, TwoVertexLinearTree) {
    auto l = label_category(chain(2));
    auto labels = l.labels;
    std::sort(labels.begin(), labels.end());
    EXPECT_EQ(labels, (std::vector<std::string>{"AA", "AB", "AC", "BB", "CB"}));
    EXPECT_EQ(l.cat.generating().size(), 4u);
    EXPECT_TRUE(certify_contractible(l.cat).positive);
}

TEST(LabelCategory, ContractibleUpToFourVertices) {
    for (int lvl = 1; lvl <= 2; ++lvl)
        for (const Op& b : enumerate_ops(lvl, 4, lvl == 1 ? 4 : 9)) {
            auto c = label_category(b).cat;
            c.check_laws();
            EXPECT_EQ(betti(nerve(c, 3), 2), (std::vector<long>{1, 0, 0})) << show(b);
        }
}

TEST(LiftingCategory, OuterLabelsGiveTerminal) {
    BimodOp y{1, {2, parse_planar("((|)(|))"), {1, 2}}};
    EXPECT_EQ(lifting_category(y, 'A').cat.size(), 1);
    EXPECT_EQ(lifting_category(y, 'B').cat.size(), 1);
}

TEST(LiftingCategory, MiddleLabelMatchesReducedTree) {
    for (int m = 1; m <= 2; ++m)
        for (auto& w : enumerate_Bmn(m, 2, 3, 7)) {
            auto lc = lifting_category({m, w}, 'C').cat;
            EXPECT_TRUE(certify_contractible(lc).positive) << w.key();
            auto [b, corr] = reduce_to_level_m({m, w});
            EXPECT_EQ(lc.size(), label_category(b).cat.size()) << w.key();
        }
}

TEST(Classifier, IdentityNestsReproduceTheSource) {
    BimodOp t{2, {2, parse_planar("((|)(||))"), {0, 1, 2}}};
    auto hs = classifier_hom(2, 2, t, t);
    bool found = false;
    for (auto& h : hs) {
        bool all_units = true;
        for (auto& nest : h.nests) all_units = all_units && nest.tree->nvert == 1;
        found = found || all_units;
    }
    EXPECT_TRUE(found);
}

TEST(Classifier, CompositionStaysInTheHomSet) {
    BimodOp z{2, {2, parse_planar("(||)"), {0}}};
    BimodOp y{2, {2, parse_planar("((||))"), {0, 1}}};
    BimodOp x{2, {2, parse_planar("(((||)))"), {0, 1, 2}}};
    auto yz = classifier_hom(2, 2, y, z);
    auto xy = classifier_hom(2, 2, x, y);
    auto xz = classifier_hom(2, 2, x, z);
    ASSERT_FALSE(yz.empty());
    ASSERT_FALSE(xy.empty());
    for (auto& g : yz)
        for (auto& f : xy) {
            auto gf = compose_nested(g, f);
            bool in = std::any_of(xz.begin(), xz.end(), [&](const NestedTree& h) {
                if (h.nests.size() != gf.nests.size()) return false;
                for (size_t k = 0; k < h.nests.size(); ++k)
                    if (!(h.nests[k] == gf.nests[k])) return false;
                return true;
            });
            EXPECT_TRUE(in);
        }
}
