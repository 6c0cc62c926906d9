#include "framec/product.hpp"

#include <algorithm>
#include <string>

namespace framec {

template <Field T>
ProductBlocks<T> ProductBlocks<T>::split(Mat<T> p, Index n, Index s) {
    const Index k = p.rows();
    ProductBlocks<T> b;
    b.tl = p.topLeftCorner(n, s);
    b.tr = p.topRightCorner(n, k - s);
    b.bl = p.bottomLeftCorner(k - n, s);
    b.br = p.bottomRightCorner(k - n, k - s);
    b.P = std::move(p);
    return b;
}

template <Field T>
Mat<T> ProductBlocks<T>::assemble() const {
    Mat<T> p(tl.rows() + bl.rows(), tl.cols() + tr.cols());
    p << tl, tr, bl, br;
    return p;
}

template <Field T>
Mat<T> dual_from_A(const Mat<T>& p, const Mat<T>& a) {
    const Index k = p.rows();
    const Index n = a.rows();
    if (p.cols() != k || a.cols() != k - n) {
        throw Error(ErrorKind::BadShape, "need a k x k product matrix and an n x (k-n) parameter block");
    }
    return p.topRows(n) + a * p.bottomRows(k - n);
}

namespace {

template <Field T>
Mat<T> stacked_identity(Index k, Index n) {
    Mat<T> target = Mat<T>::Zero(k, n);
    target.topRows(n).setIdentity();
    return target;
}

template <Field T>
double elimination_residual(const Frame<T>& f, const Mat<T>& p) {
    return (p * f.mat().adjoint() - stacked_identity<T>(f.k(), f.n())).norm();
}

// Every basis direction [0 e_r z^*] P for z in the given nullspace.
template <Field T>
std::vector<Mat<T>> product_directions(const Mat<T>& pp, const Mat<T>& nullspace, Index n,
                                       std::span<const Index> order) {
    const Index k = pp.rows();
    std::vector<Mat<T>> dirs;
    dirs.reserve(static_cast<std::size_t>(nullspace.cols() * n));
    for (Index d = 0; d < nullspace.cols(); ++d) {
        const Mat<T> row = nullspace.col(d).adjoint() * pp.bottomRows(k - n);
        for (Index r = 0; r < n; ++r) {
            Mat<T> b = Mat<T>::Zero(n, k);
            b.row(r) = row;
            dirs.push_back(unpermute_columns(b, order));
        }
    }
    return dirs;
}

template <Field T>
std::optional<CompletionOutcome<T>> shortcut_permuted(const Frame<T>& f, const PartialDual<T>& pd,
                                                      const ProductBlocks<T>& blocks, std::span<const Index> order) {
    const Index n = f.n();
    const Index k = f.k();
    const double tol = f.tol();
    if (blocks.bl.norm() > tol * std::max(1.0, blocks.P.norm())) {
        return std::nullopt;
    }
    const double mismatch = (pd.H - blocks.tl).norm();
    if (mismatch > tol * std::max(1.0, pd.H.norm())) {
        const Mat<T> gap = pd.H.adjoint() - blocks.tl.adjoint();
        const Index rank_aug = numerical_rank(gap, rank_cutoff(singular_values(gap).front(), tol));
        return CompletionOutcome<T>{NoCompletion{{0, rank_aug, mismatch}}};
    }
    const Mat<T> identity = Mat<T>::Identity(k - n, k - n);
    return unique_or_family(unpermute_columns<T>(blocks.P.topRows(n), order),
                            product_directions(blocks.P, identity, n, order), pd);
}

template <Field T>
CompletionOutcome<T> solve_product(const Frame<T>& f, const PartialDual<T>& pd, const std::vector<Index>& order,
                                   Mat<T> pp) {
    const Index n = f.n();
    const Index s = pd.s();
    const auto blocks = ProductBlocks<T>::split(std::move(pp), n, s);
    if (auto quick = shortcut_permuted(f, pd, blocks, order)) {
        return *std::move(quick);
    }

    const LinSolve<T> sol = solve_min_norm<T>(blocks.bl.adjoint(), pd.H.adjoint() - blocks.tl.adjoint(), f.tol());
    if (!sol.consistent) {
        return NoCompletion{{sol.rank, sol.rank_augmented, sol.residual}};
    }
    const Mat<T> a = sol.solution.adjoint();
    return unique_or_family(unpermute_columns(dual_from_A(blocks.P, a), order),
                            product_directions(blocks.P, sol.nullspace, n, order), pd);
}

} // namespace

template <Field T>
Elimination<T> product_matrix(const Frame<T>& f) {
    return eliminate_with_product<T>(f.mat().adjoint());
}

template <Field T>
CompletionOutcome<T> complete_via_product(const Frame<T>& f, const PartialDual<T>& pd) {
    validate_partial_dual(f, pd);
    const auto order = column_order(pd.indices, f.k());
    // Columns of F are rows of F^*; eliminating the reordered rows directly
    // gives a P for the permuted frame.
    const Mat<T> fp = permute_columns(f.mat(), order);
    Elimination<T> elim = eliminate_with_product<T>(fp.adjoint());
    return solve_product(f, pd, order, std::move(elim.P));
}

template <Field T>
CompletionOutcome<T> complete_via_product(const Frame<T>& f, const PartialDual<T>& pd, const Mat<T>& p) {
    validate_partial_dual(f, pd);
    if (p.rows() != f.k() || p.cols() != f.k()) {
        throw Error(ErrorKind::BadShape, "product matrix must be k x k");
    }
    require_finite(p, "product matrix");
    if (elimination_residual(f, p) > f.tol() * std::max(1.0, p.norm() * f.mat().norm())) {
        throw Error(ErrorKind::BadShape, "P F^* differs from [I; 0]");
    }
    const auto order = column_order(pd.indices, f.k());
    return solve_product(f, pd, order, permute_columns(p, order));
}

template <Field T>
std::optional<CompletionOutcome<T>> rank_zero_shortcut(const Frame<T>& f, const PartialDual<T>& pd,
                                                       const ProductBlocks<T>& blocks) {
    validate_partial_dual(f, pd);
    const auto order = column_order(pd.indices, f.k());
    return shortcut_permuted(f, pd, blocks, order);
}

template <Field T>
CompletionOutcome<T> complete_via_product_scaled(const Frame<T>& f, const PartialDual<T>& pd, const Weights<T>& w) {
    Weights<T> strict = w;
    strict.allow_zero = false;
    return complete_via_product(f, scale_partial_dual(pd, strict));
}

#define FRAMEC_INSTANTIATE(T)                                                                                   \
    template struct ProductBlocks<T>;                                                                           \
    template Mat<T> dual_from_A<T>(const Mat<T>&, const Mat<T>&);                                               \
    template Elimination<T> product_matrix<T>(const Frame<T>&);                                                 \
    template CompletionOutcome<T> complete_via_product<T>(const Frame<T>&, const PartialDual<T>&);              \
    template CompletionOutcome<T> complete_via_product<T>(const Frame<T>&, const PartialDual<T>&, const Mat<T>&); \
    template std::optional<CompletionOutcome<T>> rank_zero_shortcut<T>(const Frame<T>&, const PartialDual<T>&,  \
                                                                       const ProductBlocks<T>&);                \
    template CompletionOutcome<T> complete_via_product_scaled<T>(const Frame<T>&, const PartialDual<T>&,        \
                                                                 const Weights<T>&);

FRAMEC_INSTANTIATE(double)
FRAMEC_INSTANTIATE(Complex)

#undef FRAMEC_INSTANTIATE

} // namespace framec
