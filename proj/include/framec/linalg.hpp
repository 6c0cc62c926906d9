#pragma once

// Dense linear algebra kernels shared by every completion method.
//
// All routines are templated over the field: `double` for real frames and
// `std::complex<double>` for complex ones. Conjugate transposes are used
// throughout, so the real case reduces to plain transposes. Definitions live
// in linalg.cpp and are explicitly instantiated for both fields.

#include <Eigen/Dense>

#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "framec/error.hpp"

namespace framec {

using Complex = std::complex<double>;

template <typename T>
concept Field = std::same_as<T, double> || std::same_as<T, Complex>;

template <Field T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Relative working tolerance used when a caller does not supply one.
inline constexpr double kDefaultTol = 1e-9;

template <Field T>
void require_finite(const Mat<T>& m, std::string_view what);

/// Full SVD M = U * diag(sigma) * V^* of a matrix with rows <= cols.
template <Field T>
struct SvdFactors {
    Mat<T> U;                  // rows x rows, unitary
    std::vector<double> sigma; // rows entries, non-increasing
    Mat<T> V;                  // cols x cols, unitary

    /// rows x cols diagonal embedding of sigma.
    Mat<T> sigma_matrix() const;
    Mat<T> reconstruct() const;
};

/// Invertible k x k product of elementary row operations with P * F^* = [I_n; 0].
template <Field T>
struct Elimination {
    Mat<T> P;
    double residual = 0.0; // ||P * F^* - [I_n; 0]||_F
};

/// Minimum-norm solution of A * X = C together with the data needed to
/// describe every other solution.
template <Field T>
struct LinSolve {
    Mat<T> solution;  // A^+ C
    double residual;  // ||A * solution - C||_F
    Mat<T> nullspace; // orthonormal columns spanning ker(A); may have zero columns
    bool consistent;
    Index rank;           // numerical rank of A
    Index rank_augmented; // numerical rank of [A C]
};

template <Field T>
SvdFactors<T> svd(const Mat<T>& m);

/// Singular values of a matrix of any shape, non-increasing.
template <Field T>
std::vector<double> singular_values(const Mat<T>& m);

/// max(rows, cols) * eps * sigma_1.
template <Field T>
double default_rank_tol(const Mat<T>& m);

/// Number of singular values strictly above `tol` (an absolute threshold).
template <Field T>
Index numerical_rank(const Mat<T>& m, std::optional<double> tol = std::nullopt);

/// Moore-Penrose pseudoinverse; singular values at or below `tol` are
/// treated as zero.
template <Field T>
Mat<T> pseudoinverse(const Mat<T>& m, std::optional<double> tol = std::nullopt);

/// Absolute singular-value cutoff used for rank decisions at relative
/// tolerance `tol`: tol * max(1, sigma_1).
double rank_cutoff(double sigma_max, double tol) noexcept;

/// Solves A * X = C in the minimum Frobenius norm sense. `tol` is relative:
/// rank decisions use rank_cutoff(sigma_1(A), tol) and the system is
/// consistent iff residual <= tol * max(1, ||C||_F).
template <Field T>
LinSolve<T> solve_min_norm(const Mat<T>& a, const Mat<T>& c, double tol = kDefaultTol);

/// ||(I - A A^+) C||_F, the distance of the columns of C from range(A).
template <Field T>
double span_residual(const Mat<T>& a, const Mat<T>& c, double tol = kDefaultTol);

template <Field T>
bool in_column_span(const Mat<T>& a, const Mat<T>& c, double tol = kDefaultTol);

/// Gauss-Jordan elimination with partial pivoting on a k x n matrix of rank n,
/// accumulating the row operations into P. Throws RankDeficient when a pivot
/// falls below `pivot_tol` relative to the largest entry.
template <Field T>
Elimination<T> eliminate_with_product(const Mat<T>& fstar, double pivot_tol = 1e-12);

} // namespace framec
