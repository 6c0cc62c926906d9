#include "framec/direct.hpp"

#include <algorithm>
#include <string>

namespace framec {

template <Field T>
PartialDual<T> scale_partial_dual(const PartialDual<T>& pd, const Weights<T>& w) {
    if (static_cast<Index>(w.w.size()) != pd.s()) {
        throw Error(ErrorKind::BadShape, std::to_string(w.w.size()) + " weights for " + std::to_string(pd.s()) +
                                             " prescribed columns");
    }
    PartialDual<T> out = pd;
    for (Index j = 0; j < pd.s(); ++j) {
        const T wj = w.w[static_cast<std::size_t>(j)];
        if (!w.allow_zero && wj == T(0.0)) {
            throw Error(ErrorKind::ZeroWeight, "weight " + std::to_string(j + 1) + " is zero");
        }
        out.H.col(j) *= wj;
    }
    return out;
}

template <Field T>
bool kernel_condition_holds(const Mat<T>& f1, const Mat<T>& g1, double tol) {
    if (f1.rows() != g1.rows() || f1.cols() != g1.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "F1 and G1 must have the same shape");
    }
    return (f1 * g1.adjoint()).norm() <= tol * std::max(1.0, f1.norm() * g1.norm());
}

template <Field T>
CompletionOutcome<T> complete_direct(const Frame<T>& f, const PartialDual<T>& pd) {
    validate_partial_dual(f, pd);
    const Index n = f.n();
    const Index k = f.k();
    const Index s = pd.s();
    const auto order = column_order(pd.indices, k);
    const Mat<T> fp = permute_columns(f.mat(), order);

    const Mat<T> f_free = fp.rightCols(k - s);
    const Mat<T> rhs = Mat<T>::Identity(n, n) - fp.leftCols(s) * pd.H.adjoint();
    const LinSolve<T> sol = solve_min_norm(f_free, rhs, f.tol());
    if (!sol.consistent) {
        return NoCompletion{{sol.rank, sol.rank_augmented, sol.residual}};
    }

    Mat<T> gp(n, k);
    gp << pd.H, sol.solution.adjoint();

    // Each nullspace direction z of F_free may be added to any single row of G_free.
    std::vector<Mat<T>> directions;
    directions.reserve(static_cast<std::size_t>(sol.nullspace.cols() * n));
    for (Index d = 0; d < sol.nullspace.cols(); ++d) {
        for (Index r = 0; r < n; ++r) {
            Mat<T> b = Mat<T>::Zero(n, k);
            b.block(r, s, 1, k - s) = sol.nullspace.col(d).adjoint();
            directions.push_back(unpermute_columns(b, order));
        }
    }
    return unique_or_family(unpermute_columns(gp, order), directions, pd);
}

template <Field T>
CompletionOutcome<T> extend_dual_pair(const Frame<T>& f0, const Mat<T>& g0, const Mat<T>& f1) {
    if (g0.rows() != f0.n() || g0.cols() != f0.k()) {
        throw Error(ErrorKind::NotDualPair, "G0 must have the shape of F0");
    }
    if (f1.rows() != f0.n()) {
        throw Error(ErrorKind::DimensionMismatch, "F1 must live in the same space as F0");
    }
    if (dual_residual(f0, g0) > f0.tol() * std::max(1.0, f0.mat().norm() * g0.norm())) {
        throw Error(ErrorKind::NotDualPair, "F0 G0^* differs from the identity");
    }
    Mat<T> joined(f0.n(), f0.k() + f1.cols());
    joined << f0.mat(), f1;
    const Frame<T> f = make_frame(std::move(joined), f0.tol());
    return complete_direct(f, PartialDual<T>::leading(g0));
}

template <Field T>
CompletionOutcome<T> complete_direct_scaled(const Frame<T>& f, const PartialDual<T>& pd, const Weights<T>& w) {
    return complete_direct(f, scale_partial_dual(pd, w));
}

namespace {

// The weight problem ||Q (I - sum_i w_i f_i h_i^*)||_F with Q the projector onto
// range(F_free)^perp, flattened into a real system M w ~ b.
struct WeightSystem {
    Mat<double> m;
    Eigen::VectorXd b;
};

template <Field T>
WeightSystem weight_system(const Frame<T>& f, const PartialDual<T>& pd) {
    validate_partial_dual(f, pd);
    const Index n = f.n();
    const Index k = f.k();
    const Index s = pd.s();
    const auto order = column_order(pd.indices, k);
    const Mat<T> fp = permute_columns(f.mat(), order);
    const Mat<T> f_free = fp.rightCols(k - s);

    Mat<T> q = Mat<T>::Identity(n, n);
    if (f_free.cols() > 0) {
        const double cut = rank_cutoff(singular_values(f_free).front(), f.tol());
        q -= f_free * pseudoinverse(f_free, cut);
    }

    const Index len = n * n;
    const Index rows = std::same_as<T, double> ? len : 2 * len;
    WeightSystem sys{Mat<double>(rows, s), Eigen::VectorXd(rows)};
    auto flatten = [&](const Mat<T>& x, auto&& out) {
        const auto v = x.reshaped();
        if constexpr (std::same_as<T, double>) {
            out = v;
        } else {
            out.head(len) = v.real();
            out.tail(len) = v.imag();
        }
    };
    flatten(q, sys.b);
    for (Index i = 0; i < s; ++i) {
        const Mat<T> term = q * fp.col(i) * pd.H.col(i).adjoint();
        flatten(term, sys.m.col(i));
    }
    return sys;
}

std::vector<double> closest_to_ones(const WeightSystem& sys, double tol) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.m.cols());
    if (sys.m.cols() == 0) {
        return {};
    }
    const Mat<double> rhs = sys.b - sys.m * ones;
    const LinSolve<double> sol = solve_min_norm<double>(sys.m, rhs, tol);
    const Eigen::VectorXd w = ones + sol.solution.col(0);
    return {w.data(), w.data() + w.size()};
}

} // namespace

template <Field T>
double weight_residual(const Frame<T>& f, const PartialDual<T>& pd, const std::vector<double>& w) {
    const auto sys = weight_system(f, pd);
    if (static_cast<Index>(w.size()) != sys.m.cols()) {
        throw Error(ErrorKind::BadShape, "one weight per prescribed column is required");
    }
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Index>(w.size()));
    return (sys.m * wv - sys.b).norm();
}

template <Field T>
std::optional<Weights<T>> solve_weights(const Frame<T>& f, const PartialDual<T>& pd) {
    const auto sys = weight_system(f, pd);
    const auto w = closest_to_ones(sys, f.tol());
    const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Index>(w.size()));
    const double residual = (sys.m * wv - sys.b).norm();
    if (residual > f.tol() * std::max(1.0, sys.b.norm())) {
        return std::nullopt;
    }
    Weights<T> out;
    out.w.assign(w.begin(), w.end());
    out.allow_zero = std::any_of(w.begin(), w.end(), [](double x) { return x == 0.0; });
    return out;
}

#define FRAMEC_INSTANTIATE(T)                                                                               \
    template PartialDual<T> scale_partial_dual<T>(const PartialDual<T>&, const Weights<T>&);                \
    template bool kernel_condition_holds<T>(const Mat<T>&, const Mat<T>&, double);                          \
    template CompletionOutcome<T> extend_dual_pair<T>(const Frame<T>&, const Mat<T>&, const Mat<T>&);       \
    template CompletionOutcome<T> complete_direct<T>(const Frame<T>&, const PartialDual<T>&);               \
    template CompletionOutcome<T> complete_direct_scaled<T>(const Frame<T>&, const PartialDual<T>&,         \
                                                            const Weights<T>&);                             \
    template std::optional<Weights<T>> solve_weights<T>(const Frame<T>&, const PartialDual<T>&);            \
    template double weight_residual<T>(const Frame<T>&, const PartialDual<T>&, const std::vector<double>&);

FRAMEC_INSTANTIATE(double)
FRAMEC_INSTANTIATE(Complex)

#undef FRAMEC_INSTANTIATE

} // namespace framec
