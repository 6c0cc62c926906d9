#pragma once

// Completion through a product matrix P with P F^* = [I_n; 0]. Every dual is
// G = [I_n A] P for some n x (k-n) matrix A, so prescribing the first s
// columns of G becomes the linear system P_bl^* A^* = H^* - P_tl^*.

#include <optional>

#include "framec/direct.hpp"
#include "framec/frame.hpp"

namespace framec {

/// P split into rows n | k-n and columns s | k-s.
template <Field T>
struct ProductBlocks {
    Mat<T> P;
    Mat<T> tl; // n x s
    Mat<T> tr; // n x (k-s)
    Mat<T> bl; // (k-n) x s
    Mat<T> br; // (k-n) x (k-s)

    static ProductBlocks split(Mat<T> p, Index n, Index s);
    Mat<T> assemble() const;
};

/// G = [I_n A] P where A is n x (k-n).
template <Field T>
Mat<T> dual_from_A(const Mat<T>& p, const Mat<T>& a);

/// Eliminates F^* itself (with the caller's column order) and checks the result.
template <Field T>
Elimination<T> product_matrix(const Frame<T>& f);

template <Field T>
CompletionOutcome<T> complete_via_product(const Frame<T>& f, const PartialDual<T>& pd);

/// Same as above with a caller-supplied P satisfying P F^* = [I_n; 0] for
/// the frame in its original column order. Throws BadShape otherwise.
template <Field T>
CompletionOutcome<T> complete_via_product(const Frame<T>& f, const PartialDual<T>& pd, const Mat<T>& p);

/// Handles P_bl = 0, where the equation for A has a zero left side. `blocks`
/// must be split for the prescribed positions brought to the front (for
/// leading positions this is the plain split of P). Returns nothing when
/// P_bl is nonzero.
template <Field T>
std::optional<CompletionOutcome<T>> rank_zero_shortcut(const Frame<T>& f, const PartialDual<T>& pd,
                                                       const ProductBlocks<T>& blocks);

/// Solves [I_n A] P_1 = H W_H. The returned duals carry the scaled columns
/// h_i w_i at the prescribed positions. Throws ZeroWeight.
template <Field T>
CompletionOutcome<T> complete_via_product_scaled(const Frame<T>& f, const PartialDual<T>& pd, const Weights<T>& w);

} // namespace framec
