#pragma once

// Frames, dual pairs and the bookkeeping shared by the completion methods.

#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "framec/linalg.hpp"

namespace framec {

template <Field T>
class Frame;

/// Throws BadShape when k < n and NotAFrame when the rank is below n.
template <Field T>
Frame<T> make_frame(Mat<T> m, double tol = kDefaultTol);

/// An n x k matrix of full row rank (k >= n); its columns f_1..f_k span F^n.
template <Field T>
class Frame {
public:
    const Mat<T>& mat() const noexcept { return mat_; }
    Index n() const noexcept { return mat_.rows(); }
    Index k() const noexcept { return mat_.cols(); }
    /// Relative working tolerance for rank and consistency decisions.
    double tol() const noexcept { return tol_; }

private:
    Frame(Mat<T> m, double tol) : mat_(std::move(m)), tol_(tol) {}

    friend Frame make_frame<T>(Mat<T> m, double tol);

    Mat<T> mat_;
    double tol_;
};

struct FrameBounds {
    double lower; // sigma_n^2
    double upper; // sigma_1^2
};

template <Field T>
FrameBounds frame_bounds(const Frame<T>& f);

template <Field T>
bool is_tight(const Frame<T>& f, double rtol = kDefaultTol);

/// S = F F^*.
template <Field T>
Mat<T> frame_operator(const Frame<T>& f);

/// S^{-1} F, the minimum Frobenius norm dual.
template <Field T>
Mat<T> canonical_dual(const Frame<T>& f);

/// ||F G^* - I_n||_F <= tol. F G^* = I already forces G F^* = I.
template <Field T>
bool is_dual_pair(const Frame<T>& f, const Mat<T>& g, double tol = kDefaultTol);

template <Field T>
double dual_residual(const Frame<T>& f, const Mat<T>& g);

/// Prescribed dual columns: H.col(j) must become column indices[j] of G.
template <Field T>
struct PartialDual {
    Mat<T> H;
    std::vector<Index> indices; // 0-based, strictly increasing

    Index s() const noexcept { return static_cast<Index>(indices.size()); }

    /// H occupies the leading columns 0..s-1.
    static PartialDual leading(Mat<T> h);
    /// Nothing prescribed, for a frame in F^n.
    static PartialDual none(Index n);
};

/// Validates positions against k and sorts them (moving the columns of H
/// along). Throws BadShape on duplicates, out-of-range positions or a column
/// count that differs from the number of positions.
template <Field T>
PartialDual<T> make_partial_dual(Mat<T> h, std::vector<Index> indices, Index k);

/// Throws BadShape unless H is n x s and every position is below k.
template <Field T>
void validate_partial_dual(const Frame<T>& f, const PartialDual<T>& pd);

/// Column order that brings the prescribed positions to the front, followed
/// by the free positions in increasing order.
std::vector<Index> column_order(std::span<const Index> prescribed, Index k);

/// out.col(j) = m.col(order[j]).
template <Field T>
Mat<T> permute_columns(const Mat<T>& m, std::span<const Index> order);

/// Inverse of permute_columns: out.col(order[j]) = m.col(j).
template <Field T>
Mat<T> unpermute_columns(const Mat<T>& m, std::span<const Index> order);

/// Affine set particular + span{basis}. Every element is a dual of the frame
/// that agrees with the prescribed columns.
template <Field T>
struct SolutionFamily {
    Mat<T> particular;
    std::vector<Mat<T>> basis; // orthonormal in the Frobenius inner product
    Index dof = 0;
    PartialDual<T> prescribed;
};

struct Certificate {
    Index rank_free = 0;      // rank of the coefficient matrix
    Index rank_augmented = 0; // rank of [coefficient | right-hand side]
    double projector_residual = 0.0;
};

struct NoCompletion {
    Certificate certificate;
};

template <Field T>
struct Unique {
    Mat<T> G;
};

template <Field T>
struct Family {
    SolutionFamily<T> family;
};

template <Field T>
using CompletionOutcome = std::variant<NoCompletion, Unique<T>, Family<T>>;

enum class Verdict { None, Unique, Family };

template <Field T>
Verdict verdict(const CompletionOutcome<T>& outcome) noexcept {
    return static_cast<Verdict>(outcome.index());
}

/// Orthonormalizes the homogeneous directions and packages the family.
/// Directions must be linearly independent.
template <Field T>
SolutionFamily<T> make_family(Mat<T> particular, const std::vector<Mat<T>>& directions, PartialDual<T> prescribed);

/// Returns Unique when there are no directions, Family otherwise.
template <Field T>
CompletionOutcome<T> unique_or_family(Mat<T> particular, const std::vector<Mat<T>>& directions,
                                      PartialDual<T> prescribed);

template <Field T>
Mat<T> family_sample(const SolutionFamily<T>& fam, std::span<const T> coefficients);

template <Field T>
bool prescribed_columns_match(const Mat<T>& g, const PartialDual<T>& pd, double tol);

template <Field T>
bool family_contains(const Frame<T>& f, const SolutionFamily<T>& fam, const Mat<T>& g, double tol = kDefaultTol);

/// Membership of G in the solution set described by any outcome arm.
template <Field T>
bool outcome_contains(const Frame<T>& f, const CompletionOutcome<T>& outcome, const Mat<T>& g,
                      double tol = kDefaultTol);

/// Deletes frame vectors whose dual partners are zero. The result is again a
/// dual pair. Throws NotZeroColumn or NotAFrame.
template <Field T>
std::pair<Frame<T>, Mat<T>> surgery_remove(const Frame<T>& f, const Mat<T>& g, std::vector<Index> positions);

} // namespace framec
