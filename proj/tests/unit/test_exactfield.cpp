#include <gtest/gtest.h>

#include <random>

#include "pmforge/exactfield.hpp"

using namespace pmforge;

namespace {

Matrix random_matrix(const Field& f, std::size_t r, std::size_t c, std::mt19937& rng, int range = 5) {
    std::uniform_int_distribution<int> d(-range, range);
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set_int(i, j, d(rng));
    return m;
}

Vector ints(const Field& f, std::initializer_list<int> v) {
    Vector out;
    for (int x : v) out.push_back(f.from_int(x));
    return out;
}

}  // namespace

TEST(Field, RejectsComposite) {
    EXPECT_THROW(Field::prime(4), std::invalid_argument);
    EXPECT_THROW(Field::prime(1), std::invalid_argument);
    EXPECT_NO_THROW(Field::prime(7));
}

TEST(Field, CanonicalRepresentatives) {
    Field f = Field::prime(5);
    EXPECT_EQ(f.from_int(-1), (Scalar{4, 1}));
    EXPECT_EQ(f.from_int(12), (Scalar{2, 1}));
    Field q = Field::rational();
    EXPECT_EQ(q.from_fraction(4, -6), (Scalar{-2, 3}));
    EXPECT_EQ(q.parse("6/4"), (Scalar{3, 2}));
    EXPECT_EQ(q.format(q.from_fraction(-1, 2)), "-1/2");
    EXPECT_THROW(q.parse("1/0"), ParseError);
    EXPECT_THROW(f.parse("x"), ParseError);
}

TEST(Field, AxiomsOnRandomScalars) {
    std::mt19937 rng(11);
    for (Field f : {Field::prime(2), Field::prime(5), Field::prime(7919), Field::rational()}) {
        std::uniform_int_distribution<int> d(-30, 30);
        for (int t = 0; t < 200; ++t) {
            Scalar a = f.from_fraction(d(rng), f.is_prime() ? 1 : (d(rng) == 0 ? 1 : std::abs(d(rng)) + 1));
            Scalar b = f.from_int(d(rng)), c = f.from_int(d(rng));
            EXPECT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            EXPECT_EQ(f.add(a, f.neg(a)), f.zero());
            if (!Field::is_zero(a)) {
                EXPECT_EQ(f.mul(a, f.inv(a)), f.one());
            }
        }
    }
    EXPECT_THROW(Field::prime(3).inv(Scalar{0, 1}), std::domain_error);
}

TEST(Field, RationalOverflowIsReported) {
    Field q = Field::rational();
    Scalar big = q.from_int(std::int64_t(1) << 62);
    EXPECT_THROW(q.mul(big, big), ArithmeticOverflow);
}

TEST(Matrix, IdentityProduct) {
    Field f = Field::prime(2);
    EXPECT_EQ(Matrix::identity(f, 2) * Matrix::identity(f, 2), Matrix::identity(f, 2));
}

TEST(Matrix, CharacteristicTwoCancellation) {
    Field f = Field::prime(2);
    Matrix a = Matrix::from_ints(f, {{1, 1}, {1, 1}});
    Matrix b = Matrix::from_ints(f, {{1}, {1}});
    EXPECT_EQ(a * b, Matrix::from_ints(f, {{0}, {0}}));
}

TEST(Matrix, ProductMatchesNaiveOracle) {
    std::mt19937 rng(3);
    for (Field f : {Field::prime(5), Field::rational()}) {
        for (int t = 0; t < 50; ++t) {
            Matrix a = random_matrix(f, 3, 4, rng), b = random_matrix(f, 4, 2, rng);
            EXPECT_EQ(a * b, naive_multiply(a, b));
        }
    }
}

TEST(Matrix, ShapeAndFieldErrors) {
    Field f = Field::prime(5);
    EXPECT_THROW(Matrix(f, 2, 3) * Matrix(f, 2, 3), ShapeError);
    EXPECT_THROW(Matrix(f, 2, 2) * Matrix(Field::prime(7), 2, 2), MismatchError);
}

TEST(Rank, Examples) {
    Field f = Field::prime(2);
    EXPECT_EQ(rank(Matrix(f, 3, 3)), 0u);
    EXPECT_EQ(rank(Matrix::identity(f, 4)), 4u);
    EXPECT_EQ(rank(Matrix::from_ints(f, {{1, 1}, {1, 1}})), 1u);
}

TEST(Rank, TransposeAndRankNullity) {
    std::mt19937 rng(5);
    for (Field f : {Field::prime(2), Field::prime(5), Field::rational()}) {
        for (int t = 0; t < 100; ++t) {
            std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
            Matrix a = random_matrix(f, r, c, rng, 2);
            EXPECT_EQ(rank(a), rank(a.transpose()));
            auto ns = nullspace_basis(a);
            EXPECT_EQ(c, rank(a) + ns.size());
            for (const auto& x : ns) {
                Vector ax = a.apply(x);
                for (auto s : ax) EXPECT_TRUE(Field::is_zero(s));
            }
        }
    }
}

TEST(Nullspace, Examples) {
    Field f2 = Field::prime(2);
    EXPECT_TRUE(nullspace_basis(Matrix::identity(f2, 3)).empty());
    EXPECT_EQ(nullspace_basis(Matrix(f2, 2, 5)).size(), 5u);
    Field f7 = Field::prime(7);
    Matrix a = Matrix::from_ints(f7, {{1, 2, 3}});
    auto ns = nullspace_basis(a);
    ASSERT_EQ(ns.size(), 2u);
    for (const auto& x : ns) EXPECT_TRUE(Field::is_zero(a.apply(x)[0]));
}

TEST(Solve, Examples) {
    Field f = Field::prime(5);
    auto x = solve(Matrix::identity(f, 2), ints(f, {3, 4}));
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, ints(f, {3, 4}));
    EXPECT_FALSE(solve(Matrix::from_ints(f, {{1}, {1}}), ints(f, {0, 1})));
}

TEST(Solve, RandomConsistentSystems) {
    std::mt19937 rng(9);
    Field f = Field::prime(5);
    for (int t = 0; t < 100; ++t) {
        Matrix a = random_matrix(f, 4, 3, rng);
        Vector x0 = random_matrix(f, 3, 1, rng).col(0);
        Vector b = a.apply(x0);
        auto x = solve(a, b);
        ASSERT_TRUE(x);
        EXPECT_EQ(a.apply(*x), b);
    }
}

TEST(Inverse, RoundTrip) {
    std::mt19937 rng(13);
    Field q = Field::rational();
    int found = 0;
    for (int t = 0; t < 50; ++t) {
        Matrix a = random_matrix(q, 3, 3, rng);
        auto inv = inverse(a);
        if (rank(a) < 3) {
            EXPECT_FALSE(inv);
            continue;
        }
        ASSERT_TRUE(inv);
        EXPECT_TRUE((a * *inv).is_identity());
        ++found;
    }
    EXPECT_GT(found, 0);
}

TEST(RowEchelon, MatchesBatchRank) {
    std::mt19937 rng(17);
    Field f = Field::prime(3);
    for (int t = 0; t < 50; ++t) {
        Matrix a = random_matrix(f, 6, 5, rng, 1);
        RowEchelon e(f, 5);
        for (std::size_t r = 0; r < 6; ++r) e.insert(a.row(r));
        EXPECT_EQ(e.rank(), rank(a));
        for (std::size_t r = 0; r < 6; ++r) EXPECT_TRUE(e.contains(a.row(r)));
        auto ker = e.kernel();
        EXPECT_EQ(ker.size(), 5 - e.rank());
        for (const auto& x : ker) {
            for (auto s : a.apply(x)) EXPECT_TRUE(Field::is_zero(s));
        }
    }
}
