#pragma once

// Completion through the SVD F = U Sigma V^*. Every dual is
// G = U [Sigma^{-1} X] V^* for an n x (k-n) matrix X; X = 0 is the canonical dual.

#include "framec/frame.hpp"

namespace framec {

template <Field T>
struct DualParam {
    SvdFactors<T> factors;
    std::vector<double> sigma_inv;
    Mat<T> X; // n x (k-n)
};

/// Factors F and attaches X. Throws BadShape unless X is n x (k-n).
template <Field T>
DualParam<T> make_dual_param(const Frame<T>& f, Mat<T> x);

template <Field T>
Mat<T> dual_from_X(const DualParam<T>& dp);

template <Field T>
CompletionOutcome<T> complete_via_svd(const Frame<T>& f, const PartialDual<T>& pd);

/// ||U^* H - Sigma^{-1} V^*_{n x s}||_F, zero exactly when H consists of the
/// canonical dual's columns at the prescribed positions.
template <Field T>
double canonical_prefix_residual(const Frame<T>& f, const PartialDual<T>& pd);

template <Field T>
bool is_canonical_prefix(const Frame<T>& f, const PartialDual<T>& pd);

} // namespace framec
