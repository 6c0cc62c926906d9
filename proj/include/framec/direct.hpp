#pragma once

// Completion by solving F_free * G_free^* = I - F_pres * H^* directly.

#include <optional>
#include <vector>

#include "framec/frame.hpp"

namespace framec {

/// Diagonal rescaling W_H = diag(w_1..w_s) of the prescribed columns.
template <Field T>
struct Weights {
    std::vector<T> w;
    bool allow_zero = false;
};

/// H * W_H at the same positions. Throws BadShape on a length mismatch and
/// ZeroWeight when a weight vanishes and allow_zero is false.
template <Field T>
PartialDual<T> scale_partial_dual(const PartialDual<T>& pd, const Weights<T>& w);

/// F1 * G1^* = 0 up to tol * max(1, ||F1|| ||G1||), i.e. range(G1^*) lies in ker F1.
template <Field T>
bool kernel_condition_holds(const Mat<T>& f1, const Mat<T>& g1, double tol = kDefaultTol);

/// All G = [G0 G1] dual to [F0 F1] given the dual pair (F0, G0): G1 ranges
/// over matrices with F1 G1^* = 0. Throws NotDualPair.
template <Field T>
CompletionOutcome<T> extend_dual_pair(const Frame<T>& f0, const Mat<T>& g0, const Mat<T>& f1);

/// Family particular solutions are the minimum-norm (pseudoinverse) ones.
template <Field T>
CompletionOutcome<T> complete_direct(const Frame<T>& f, const PartialDual<T>& pd);

template <Field T>
CompletionOutcome<T> complete_direct_scaled(const Frame<T>& f, const PartialDual<T>& pd, const Weights<T>& w);

/// Real weights closest to all-ones that make the scaled problem solvable,
/// or nothing when the least-squares residual stays above tolerance.
template <Field T>
std::optional<Weights<T>> solve_weights(const Frame<T>& f, const PartialDual<T>& pd);

/// Least-squares residual of the weight problem at the weights returned by
/// solve_weights (always computed, feasible or not).
template <Field T>
double weight_residual(const Frame<T>& f, const PartialDual<T>& pd, const std::vector<double>& w);

} // namespace framec
