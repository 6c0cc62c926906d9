#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "framec/error.hpp"
#include "framec/linalg.hpp"
#include "support.hpp"

using namespace framec;
using framec::testing::max_abs_diff;
using framec::testing::random_mat;

namespace {

Mat<double> m(Index r, Index c, std::initializer_list<double> v) {
    Mat<double> out(r, c);
    auto it = v.begin();
    for (Index i = 0; i < r; ++i) {
        for (Index j = 0; j < c; ++j) {
            out(i, j) = *it++;
        }
    }
    return out;
}

template <Field T>
Mat<T> identity(Index n) {
    return Mat<T>::Identity(n, n);
}

} // namespace

TEST_CASE("svd of the identity") {
    const auto f = svd<double>(identity<double>(2));
    CHECK(f.sigma == std::vector<double>{1.0, 1.0});
    CHECK(max_abs_diff<double>(f.reconstruct(), identity<double>(2)) < 1e-15);
}

TEST_CASE("svd of a sparse 3x4 frame has singular values sqrt5, 1, 1") {
    const auto f = svd<double>(m(3, 4, {1, 0, 0, 2, 0, 1, 0, 0, 0, 0, 1, 0}));
    REQUIRE(f.sigma.size() == 3);
    CHECK(f.sigma[0] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
    CHECK(f.sigma[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.sigma[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE_TEMPLATE("svd factors are unitary and reconstruct", T, double, Complex) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Index r = framec::testing::random_index(rng, 1, 6);
        const Index c = framec::testing::random_index(rng, r, 10);
        const Mat<T> a = random_mat<T>(rng, r, c);
        const auto f = svd(a);
        CHECK((f.U.adjoint() * f.U - identity<T>(r)).norm() <= 1e-12);
        CHECK((f.V.adjoint() * f.V - identity<T>(c)).norm() <= 1e-12);
        CHECK((f.reconstruct() - a).norm() <= 1e-10 * std::max(1.0, f.sigma.front()));
        CHECK(std::is_sorted(f.sigma.rbegin(), f.sigma.rend()));
        CHECK(f.sigma.back() >= 0.0);
    }
}

TEST_CASE("svd rejects tall input and non-finite entries") {
    CHECK_THROWS_AS(svd<double>(Mat<double>::Ones(3, 2)), Error);
    Mat<double> bad = Mat<double>::Ones(2, 3);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    try {
        svd(bad);
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(numerical_rank(bad), Error);
    CHECK_THROWS_AS(pseudoinverse(bad), Error);
}

TEST_CASE("numerical rank") {
    CHECK(numerical_rank<double>(Mat<double>::Zero(2, 3)) == 0);
    CHECK(numerical_rank<double>(m(2, 2, {-1, -2, -2, -4})) == 1);
    CHECK(numerical_rank<double>(identity<double>(4)) == 4);
    CHECK(numerical_rank<double>(m(2, 2, {1, 0, 0, 1e-3}), 1e-2) == 1);
}

TEST_CASE("pseudoinverse examples") {
    CHECK(max_abs_diff<double>(pseudoinverse<double>(identity<double>(3)), identity<double>(3)) < 1e-15);
    CHECK(max_abs_diff<double>(pseudoinverse<double>(Mat<double>::Zero(2, 2)), Mat<double>::Zero(2, 2)) == 0.0);

    const Mat<double> f = m(2, 4, {1, 2, 3, 4, 4, 3, 2, 1});
    const Mat<double> p = pseudoinverse(f);
    // Frozen from exact rational arithmetic.
    const Mat<double> expected = m(4, 2, {-0.1, 0.2, 0.0, 0.1, 0.1, 0.0, 0.2, -0.1});
    CHECK(max_abs_diff(p, expected) < 1e-14);
    CHECK(max_abs_diff(p, framec::testing::pinv_2row_cramer(f)) < 1e-14);
    CHECK((f * p - identity<double>(2)).norm() <= 1e-12);
}

TEST_CASE("pseudoinverse of random 2-row frames matches Cramer's rule") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const Index k = framec::testing::random_index(rng, 2, 8);
        const Mat<double> f = random_mat<double>(rng, 2, k);
        CHECK(max_abs_diff(pseudoinverse(f), framec::testing::pinv_2row_cramer(f)) < 1e-9);
    }
}

TEST_CASE_TEMPLATE("Penrose identities", T, double, Complex) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const Index r = framec::testing::random_index(rng, 1, 6);
        const Index c = framec::testing::random_index(rng, 1, 10);
        Mat<T> a = random_mat<T>(rng, r, c);
        if (trial % 3 == 0 && r > 1) {
            a.row(0) = a.row(1) * T(2.0); // rank deficient on purpose
        }
        const Mat<T> p = pseudoinverse(a);
        CHECK((a * p * a - a).norm() <= 1e-9);
        CHECK((p * a * p - p).norm() <= 1e-9);
        CHECK(((a * p).adjoint() - a * p).norm() <= 1e-9);
        CHECK(((p * a).adjoint() - p * a).norm() <= 1e-9);
    }
}

TEST_CASE("solve_min_norm examples") {
    SUBCASE("identity") {
        const auto s = solve_min_norm<double>(identity<double>(2), m(2, 1, {1, 2}));
        CHECK(max_abs_diff(s.solution, m(2, 1, {1, 2})) < 1e-15);
        CHECK(s.residual < 1e-15);
        CHECK(s.nullspace.cols() == 0);
        CHECK(s.consistent);
        CHECK(s.rank == 2);
    }
    SUBCASE("homogeneous system with a one-dimensional kernel") {
        const auto s = solve_min_norm<double>(m(2, 3, {1, -1, 1, 0, 1, 2}), Mat<double>::Zero(2, 2));
        CHECK(s.solution.norm() < 1e-15);
        REQUIRE(s.nullspace.cols() == 1);
        Eigen::Vector3d dir(-3, -2, 1);
        dir.normalize();
        CHECK(std::abs(std::abs(s.nullspace.col(0).dot(dir)) - 1.0) < 1e-12);
    }
    SUBCASE("inconsistent system") {
        const auto s = solve_min_norm<double>(m(2, 2, {-1, -2, -2, -4}), m(2, 2, {0, -3, -2, -3}));
        CHECK_FALSE(s.consistent);
        CHECK(s.rank == 1);
        CHECK(s.rank_augmented == 2);
        CHECK(s.residual > 1.0);
    }
    SUBCASE("row mismatch") {
        try {
            solve_min_norm<double>(identity<double>(2), Mat<double>::Zero(3, 1));
            FAIL("expected DimensionMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DimensionMismatch);
        }
    }
}

TEST_CASE_TEMPLATE("solve_min_norm gives the smallest solution", T, double, Complex) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        const Index r = framec::testing::random_index(rng, 1, 4);
        const Index c = framec::testing::random_index(rng, r + 1, 7);
        const Mat<T> a = random_mat<T>(rng, r, c);
        const Mat<T> x0 = random_mat<T>(rng, c, 2);
        const Mat<T> rhs = a * x0;
        const auto s = solve_min_norm(a, rhs);
        REQUIRE(s.consistent);
        CHECK((a * s.nullspace).norm() <= 1e-10);
        CHECK(s.nullspace.cols() == c - r);
        for (int j = 0; j < 5; ++j) {
            const Mat<T> z = random_mat<T>(rng, s.nullspace.cols(), 2);
            const Mat<T> other = s.solution + s.nullspace * z;
            CHECK((a * other - rhs).norm() <= 1e-9);
            CHECK(other.norm() >= s.solution.norm() - 1e-9);
        }
    }
}

TEST_CASE("in_column_span examples") {
    std::mt19937_64 rng(3);
    const Mat<double> a = random_mat<double>(rng, 2, 3);
    CHECK(in_column_span<double>(a, Mat<double>::Zero(2, 2)));

    const Mat<double> f2 = m(2, 2, {-1, -2, -2, -4});
    const Mat<double> f1 = identity<double>(2);
    const Mat<double> h = m(2, 2, {1, 3, 2, 4});
    const Mat<double> rhs = identity<double>(2) - f1 * h.transpose();
    CHECK_FALSE(in_column_span(f2, rhs));

    CHECK(in_column_span<double>(a, random_mat<double>(rng, 2, 2)));
}

TEST_CASE("in_column_span agrees with exact rational rank on integer matrices") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> entry(-2, 2);
    int positives = 0;
    int negatives = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const Index rows = framec::testing::random_index(rng, 1, 4);
        const Index cols = framec::testing::random_index(rng, 1, 4);
        const Index rhs_cols = framec::testing::random_index(rng, 1, 2);
        Mat<double> a(rows, cols);
        Mat<double> c(rows, rhs_cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) {
                a(i, j) = entry(rng);
            }
            for (Index j = 0; j < rhs_cols; ++j) {
                c(i, j) = entry(rng);
            }
        }
        if (trial % 2 == 0 && cols > 1) {
            // Bias half of the cases towards low rank so both answers occur.
            a.col(cols - 1) = a.col(0) * 2.0;
            c.col(0) = a.col(0) - a.col(cols - 1);
        }
        Mat<double> aug(rows, cols + rhs_cols);
        aug << a, c;
        const bool exact = framec::testing::exact_rank(framec::testing::to_rational(a)) ==
                           framec::testing::exact_rank(framec::testing::to_rational(aug));
        CHECK(in_column_span(a, c) == exact);
        (exact ? positives : negatives) += 1;
    }
    CHECK(positives > 50);
    CHECK(negatives > 50);
}

TEST_CASE("eliminate_with_product examples") {
    SUBCASE("sparse 3x4 frame and the one-operation product matrix") {
        const Mat<double> f = m(3, 4, {1, 0, 0, 2, 0, 1, 0, 0, 0, 0, 1, 0});
        const auto e = eliminate_with_product<double>(f.transpose());
        Mat<double> target = Mat<double>::Zero(4, 3);
        target.topRows(3).setIdentity();
        CHECK(e.residual <= 1e-12);
        CHECK((e.P * f.transpose() - target).norm() <= 1e-12);
        CHECK(numerical_rank(e.P) == 4);
        const Mat<double> paper_p = m(4, 4, {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, -2, 0, 0, 1});
        CHECK((paper_p * f.transpose() - target).norm() == 0.0);
    }
    SUBCASE("square identity") {
        const auto e = eliminate_with_product<double>(identity<double>(3));
        CHECK(max_abs_diff(e.P, identity<double>(3)) == 0.0);
    }
    SUBCASE("two-row frame; the printed product matrix also passes") {
        const Mat<double> f = m(2, 4, {1, 2, 3, 4, 4, 3, 2, 1});
        const auto e = eliminate_with_product<double>(f.transpose());
        Mat<double> target = Mat<double>::Zero(4, 2);
        target.topRows(2).setIdentity();
        CHECK((e.P * f.transpose() - target).norm() <= 1e-12);
        const Mat<double> paper_p =
            m(4, 4, {-3, 4, 0, 0, 2, -1, 0, 0, 5, -10, 5, 0, 10, -15, 0, 5}) / 5.0;
        CHECK((paper_p * f.transpose() - target).norm() <= 1e-14);
    }
    SUBCASE("rank deficient input") {
        try {
            eliminate_with_product<double>(m(2, 2, {-1, -2, -2, -4}));
            FAIL("expected RankDeficient");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::RankDeficient);
        }
    }
}

TEST_CASE_TEMPLATE("eliminate_with_product on random frames", T, double, Complex) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = framec::testing::random_index(rng, 1, 6);
        const Index k = framec::testing::random_index(rng, n, 10);
        const Mat<T> f = random_mat<T>(rng, n, k);
        const auto e = eliminate_with_product<T>(f.adjoint());
        Mat<T> target = Mat<T>::Zero(k, n);
        target.topRows(n).setIdentity();
        CHECK((e.P * f.adjoint() - target).norm() <= 1e-9 * std::max(1.0, f.norm()));
        CHECK(e.residual <= 1e-9 * std::max(1.0, f.norm()));
        CHECK(numerical_rank(e.P) == k);
    }
}

TEST_CASE_TEMPLATE("frames have strictly positive singular values", T, double, Complex) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto f = framec::testing::random_frame<T>(rng, 3, 6);
        for (double s : svd(f.mat()).sigma) {
            CHECK(s > 0.0);
        }
    }
}
