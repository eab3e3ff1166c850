#include <gtest/gtest.h>

#include <random>

#include "pmforge/homlab.hpp"
#include "pmforge/intervals.hpp"
#include "test_support.hpp"

using namespace pmforge;

namespace {

const Field F2 = Field::prime(2);
const Field F5 = Field::prime(5);

PersistenceModule rect1(int a, int b, const Field& f = F2) { return rectangle_module({LatticePoint{a}, LatticePoint{b}}, f); }
PersistenceModule rect2(int x0, int y0, int x1, int y1, const Field& f = F2) {
    return rectangle_module({LatticePoint{x0, y0}, LatticePoint{x1, y1}}, f);
}

void expect_valid_basis(const HomBasis& b, const PersistenceModule& m, const PersistenceModule& n) {
    for (const auto& e : b.elements) {
        auto err = check_homomorphism(e, m, n);
        EXPECT_FALSE(err) << *err;
    }
    // linear independence of the flattened blocks
    std::map<LatticePoint, std::size_t> off;
    std::size_t w = 0;
    for (const auto& [p, d] : m.dims()) {
        off[p] = w;
        w += d * n.dim(p);
    }
    RowEchelon ech(m.field(), w);
    for (const auto& e : b.elements) {
        Vector v(w, m.field().zero());
        for (const auto& [p, blk] : e.blocks)
            for (std::size_t r = 0; r < blk.rows(); ++r)
                for (std::size_t c = 0; c < blk.cols(); ++c) v[off[p] + r * blk.cols() + c] = blk.at(r, c);
        EXPECT_TRUE(ech.insert(v));
    }
}

}  // namespace

TEST(HomBasis, IdentityOfABar) {
    PersistenceModule a = rect1(0, 1);
    HomBasis b = hom_basis(a, a);
    ASSERT_EQ(b.dim(), 1u);
    EXPECT_EQ(b.elements[0], identity_hom(a));
}

TEST(HomBasis, RectangleFormula) {
    EXPECT_EQ(hom_dim(rect1(1, 4), rect1(0, 3)), 1u);
    EXPECT_EQ(hom_dim(rect1(0, 3), rect1(1, 4)), 0u);
    EXPECT_EQ(hom_dim(rect1(0, 1), rect1(0, 3)), 0u);
    EXPECT_EQ(hom_dim(rect1(0, 3), rect1(0, 1)), 1u);
    EXPECT_EQ(hom_dim(rect1(0, 1), rect1(3, 4)), 0u);
}

TEST(HomBasis, AgreesWithNaiveSolverOnRandomModules) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 150; ++t) {
        const Field& f = t % 2 ? F5 : F2;
        std::size_t n = 1 + t % 2;
        PersistenceModule a = testing_support::random_module(f, n, 3, 2, rng);
        PersistenceModule b = testing_support::random_module(f, n, 3, 2, rng);
        HomBasis fast = hom_basis(a, b);
        HomBasis slow = hom_basis_naive(a, b);
        ASSERT_EQ(fast.dim(), slow.dim()) << "instance " << t;
        EXPECT_EQ(hom_dim(a, b), fast.dim());
        expect_valid_basis(fast, a, b);
        expect_valid_basis(slow, a, b);
    }
}

TEST(HomBasis, ThreeDimensionalAgreement) {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 20; ++t) {
        PersistenceModule a = testing_support::random_module(F2, 3, 2, 1, rng, 14);
        PersistenceModule b = testing_support::random_module(F2, 3, 2, 1, rng, 14);
        EXPECT_EQ(hom_dim(a, b), hom_basis_naive(a, b).dim());
        EXPECT_EQ(end_dim(a), hom_basis_naive(a, a).dim());
    }
}

TEST(EndDim, Examples) {
    EXPECT_EQ(end_dim(rect2(0, 0, 2, 1)), 1u);
    EXPECT_EQ(end_dim(direct_sum(rect1(0, 1), rect1(0, 1))), 4u);
    EXPECT_EQ(hom_basis_naive(direct_sum(rect1(0, 1), rect1(0, 1)), direct_sum(rect1(0, 1), rect1(0, 1))).dim(), 4u);
}

TEST(EndDim, InvariantUnderConjugation) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 40; ++t) {
        PersistenceModule m = testing_support::random_module(F5, 2, 3, 2, rng);
        EXPECT_EQ(end_dim(m), end_dim(random_conjugate(m, rng)));
    }
}

TEST(EndDim, DirectSumIsSuperadditive) {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 30; ++t) {
        PersistenceModule a = testing_support::random_module(F2, 2, 3, 1, rng, 6);
        PersistenceModule b = testing_support::random_module(F2, 2, 3, 1, rng, 6);
        EXPECT_GE(end_dim(direct_sum(a, b)), end_dim(a) + end_dim(b));
        PersistenceModule far = shift(b, {10, 10});
        EXPECT_EQ(end_dim(direct_sum(a, far)), end_dim(a) + end_dim(b));
    }
}

TEST(Compose, IdentityZeroAssociativity) {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 30; ++t) {
        PersistenceModule a = testing_support::random_module(F5, 2, 2, 2, rng);
        PersistenceModule b = testing_support::random_module(F5, 2, 2, 2, rng);
        PersistenceModule c = testing_support::random_module(F5, 2, 2, 2, rng);
        auto pick = [&](const PersistenceModule& x, const PersistenceModule& y) {
            HomBasis hb = hom_basis(x, y);
            Vector coeffs(hb.dim());
            for (auto& s : coeffs) s = random_scalar(F5, rng);
            return linear_combination(F5, hb.elements, coeffs);
        };
        HomElement f = pick(a, b), g = pick(b, c), h = pick(c, a);
        EXPECT_EQ(compose(identity_hom(b), f, a, b, b), f);
        EXPECT_TRUE(compose(g, HomElement{}, a, b, c).is_zero());
        HomElement left = compose(h, compose(g, f, a, b, c), a, c, a);
        HomElement right = compose(compose(h, g, b, c, a), f, a, b, a);
        EXPECT_EQ(left, right);
        EXPECT_FALSE(check_homomorphism(compose(g, f, a, b, c), a, c));
    }
}

TEST(Indecomposable, Rectangle) {
    auto v = indecomposable(rect2(0, 0, 1, 1));
    EXPECT_EQ(v.verdict, Verdict::indecomposable_dim1);
}

TEST(Indecomposable, DisjointBarsSplit) {
    auto v = indecomposable(direct_sum(rect1(0, 1), rect1(2, 3)));
    EXPECT_EQ(v.verdict, Verdict::decomposable);
    ASSERT_TRUE(v.support_split);
    EXPECT_EQ(v.support_split->first, (std::vector<LatticePoint>{LatticePoint{0}, LatticePoint{1}}));
    EXPECT_EQ(v.support_split->second, (std::vector<LatticePoint>{LatticePoint{2}, LatticePoint{3}}));
}

TEST(Indecomposable, RepeatedBarHasIdempotent) {
    PersistenceModule m = direct_sum(rect1(0, 1), rect1(0, 1));
    auto v = indecomposable(m);
    EXPECT_EQ(v.verdict, Verdict::decomposable);
    EXPECT_EQ(v.end_dim, 4u);
    ASSERT_TRUE(v.idempotent);
    EXPECT_TRUE(is_nontrivial_idempotent(*v.idempotent, m));
}

TEST(Indecomposable, BudgetExhaustionIsUnknown) {
    // End has dimension 2 and no nontrivial idempotent, so a short search proves nothing
    PersistenceModule m = build_be2_family(2, F5.from_int(2), F5);
    auto small = indecomposable(m, 3);
    EXPECT_EQ(small.end_dim, 2u);
    EXPECT_EQ(small.verdict, Verdict::unknown);
    auto full = indecomposable(m);
    EXPECT_EQ(full.verdict, Verdict::indecomposable_no_idempotent);
}

TEST(Indecomposable, RationalsStopAfterDimension) {
    Field q = Field::rational();
    auto v = indecomposable(direct_sum(rect1(0, 1, q), rect1(0, 1, q)));
    EXPECT_EQ(v.verdict, Verdict::unknown);
    EXPECT_EQ(v.end_dim, 4u);
}

TEST(Isomorphism, SelfAndDimensionMismatch) {
    PersistenceModule m = rect2(0, 0, 1, 2);
    auto r = are_isomorphic(m, m, 10, 1);
    EXPECT_EQ(r.answer, IsoAnswer::yes);
    auto r2 = are_isomorphic(m, rect2(0, 0, 1, 1), 10, 1);
    EXPECT_EQ(r2.answer, IsoAnswer::no);
}

TEST(Isomorphism, ConjugatedSum) {
    std::mt19937_64 rng(36);
    PersistenceModule m = direct_sum(rect1(0, 1, F5), rect1(0, 1, F5));
    PersistenceModule c = random_conjugate(m, rng);
    auto r = are_isomorphic(m, c, 20, 7);
    ASSERT_EQ(r.answer, IsoAnswer::yes);
    EXPECT_FALSE(check_homomorphism(*r.forward, m, c));
    EXPECT_FALSE(check_homomorphism(*r.backward, c, m));
    EXPECT_TRUE(compose(*r.backward, *r.forward, m, c, m) == identity_hom(m));
}

TEST(Isomorphism, ExhaustiveFallbackGivesNo) {
    // equal pointwise dimensions, different barcodes
    PersistenceModule a = direct_sum(rect1(0, 1), rect1(1, 2));
    PersistenceModule b = direct_sum(rect1(0, 2), rect1(1, 1));
    auto r = are_isomorphic(a, b, 0, 3);
    EXPECT_EQ(r.answer, IsoAnswer::no);
}

TEST(Be2Family, ValidatesAndRestrictsToRectangleLayers) {
    for (int lambda : {0, 1}) {
        PersistenceModule m = build_be2_family(1, F2.from_int(lambda), F2);
        EXPECT_TRUE(validate(m).empty());
        EXPECT_EQ(restrict_hyperplane(m, 0), direct_sum(rect1(1, 4), rect1(2, 3)));
        EXPECT_EQ(restrict_hyperplane(m, 1), direct_sum(rect1(0, 3), rect1(1, 2)));
        auto v = indecomposable(m);
        EXPECT_TRUE(v.verdict == Verdict::indecomposable_dim1 || v.verdict == Verdict::indecomposable_no_idempotent);
    }
}

TEST(Be2Family, LambdasAreNotIsomorphic) {
    PersistenceModule m0 = build_be2_family(1, F2.zero(), F2);
    PersistenceModule m1 = build_be2_family(1, F2.one(), F2);
    auto r = are_isomorphic(m0, m1, 50, 11);
    EXPECT_EQ(r.answer, IsoAnswer::no);
}

TEST(Be2Family, LargerBlocksStayIndecomposable) {
    for (std::size_t d : {2u, 3u}) {
        PersistenceModule m = build_be2_family(d, F5.from_int(2), F5);
        EXPECT_TRUE(validate(m).empty());
        auto v = indecomposable(m);
        EXPECT_NE(v.verdict, Verdict::decomposable) << "d=" << d;
    }
}
