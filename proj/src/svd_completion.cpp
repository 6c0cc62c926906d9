#include "framec/svd_completion.hpp"

#include <algorithm>
#include <string>

namespace framec {

namespace {

template <Field T>
Mat<T> sigma_inv_matrix(const std::vector<double>& sigma_inv) {
    const auto n = static_cast<Index>(sigma_inv.size());
    Mat<T> d = Mat<T>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        d(i, i) = sigma_inv[static_cast<std::size_t>(i)];
    }
    return d;
}

std::vector<double> invert(const std::vector<double>& sigma) {
    std::vector<double> out(sigma.size());
    std::transform(sigma.begin(), sigma.end(), out.begin(), [](double s) { return 1.0 / s; });
    return out;
}

// U^* H - Sigma^{-1} V^*_{n x s} for the frame with the prescribed columns first.
template <Field T>
Mat<T> key_rhs(const SvdFactors<T>& fac, const std::vector<double>& sigma_inv, const Mat<T>& vstar,
               const Mat<T>& h) {
    const Index n = fac.U.rows();
    return fac.U.adjoint() * h - sigma_inv_matrix<T>(sigma_inv) * vstar.topLeftCorner(n, h.cols());
}

} // namespace

template <Field T>
DualParam<T> make_dual_param(const Frame<T>& f, Mat<T> x) {
    if (x.rows() != f.n() || x.cols() != f.k() - f.n()) {
        throw Error(ErrorKind::BadShape, "X must be n x (k-n)");
    }
    auto fac = svd(f.mat());
    auto inv = invert(fac.sigma);
    return {std::move(fac), std::move(inv), std::move(x)};
}

template <Field T>
Mat<T> dual_from_X(const DualParam<T>& dp) {
    const Index n = dp.factors.U.rows();
    const Index k = dp.factors.V.rows();
    if (dp.X.rows() != n || dp.X.cols() != k - n || static_cast<Index>(dp.sigma_inv.size()) != n) {
        throw Error(ErrorKind::BadShape, "parameter blocks do not match the factorization");
    }
    Mat<T> m(n, k);
    m << sigma_inv_matrix<T>(dp.sigma_inv), dp.X;
    return dp.factors.U * m * dp.factors.V.adjoint();
}

template <Field T>
CompletionOutcome<T> complete_via_svd(const Frame<T>& f, const PartialDual<T>& pd) {
    validate_partial_dual(f, pd);
    const Index n = f.n();
    const Index k = f.k();
    const Index s = pd.s();
    const auto order = column_order(pd.indices, k);
    const auto fac = svd(permute_columns(f.mat(), order));
    const auto sigma_inv = invert(fac.sigma);
    const Mat<T> vstar = fac.V.adjoint();

    // X V^*_bl = rhs, solved in the transposed form V^*_bl^* X^* = rhs^*.
    const Mat<T> rhs = key_rhs(fac, sigma_inv, vstar, pd.H);
    const Mat<T> coeff = vstar.bottomLeftCorner(k - n, s).adjoint();
    const LinSolve<T> sol = solve_min_norm<T>(coeff, rhs.adjoint(), f.tol());
    if (!sol.consistent) {
        return NoCompletion{{sol.rank, sol.rank_augmented, sol.residual}};
    }

    DualParam<T> dp{fac, sigma_inv, sol.solution.adjoint()};
    const Mat<T> gp = dual_from_X(dp);

    const Mat<T> v_bottom = vstar.bottomRows(k - n);
    std::vector<Mat<T>> directions;
    directions.reserve(static_cast<std::size_t>(sol.nullspace.cols() * n));
    for (Index d = 0; d < sol.nullspace.cols(); ++d) {
        const Mat<T> row = sol.nullspace.col(d).adjoint() * v_bottom;
        for (Index r = 0; r < n; ++r) {
            directions.push_back(unpermute_columns<T>(fac.U.col(r) * row, order));
        }
    }
    return unique_or_family(unpermute_columns(gp, order), directions, pd);
}

template <Field T>
double canonical_prefix_residual(const Frame<T>& f, const PartialDual<T>& pd) {
    validate_partial_dual(f, pd);
    const auto order = column_order(pd.indices, f.k());
    const auto fac = svd(permute_columns(f.mat(), order));
    const Mat<T> vstar = fac.V.adjoint();
    return key_rhs(fac, invert(fac.sigma), vstar, pd.H).norm();
}

template <Field T>
bool is_canonical_prefix(const Frame<T>& f, const PartialDual<T>& pd) {
    return canonical_prefix_residual(f, pd) <= f.tol() * std::max(1.0, pd.H.norm());
}

#define FRAMEC_INSTANTIATE(T)                                                                   \
    template DualParam<T> make_dual_param<T>(const Frame<T>&, Mat<T>);                          \
    template Mat<T> dual_from_X<T>(const DualParam<T>&);                                        \
    template CompletionOutcome<T> complete_via_svd<T>(const Frame<T>&, const PartialDual<T>&);  \
    template double canonical_prefix_residual<T>(const Frame<T>&, const PartialDual<T>&);       \
    template bool is_canonical_prefix<T>(const Frame<T>&, const PartialDual<T>&);

FRAMEC_INSTANTIATE(double)
FRAMEC_INSTANTIATE(Complex)

#undef FRAMEC_INSTANTIATE

} // namespace framec
