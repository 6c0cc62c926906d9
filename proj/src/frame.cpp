#include "framec/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace framec {

template <Field T>
Frame<T> make_frame(Mat<T> m, double tol) {
    require_finite(m, "frame");
    if (m.rows() < 1 || m.cols() < m.rows()) {
        throw Error(ErrorKind::BadShape, "a frame for F^n needs k >= n >= 1 vectors, got " +
                                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const auto sv = singular_values(m);
    const Index rank = numerical_rank(m, rank_cutoff(sv.front(), tol));
    if (rank < m.rows()) {
        throw Error(ErrorKind::NotAFrame, "columns span a subspace of dimension " + std::to_string(rank) +
                                              " < " + std::to_string(m.rows()));
    }
    return Frame<T>(std::move(m), tol);
}

template <Field T>
FrameBounds frame_bounds(const Frame<T>& f) {
    const auto sv = singular_values(f.mat());
    return {sv.back() * sv.back(), sv.front() * sv.front()};
}

template <Field T>
bool is_tight(const Frame<T>& f, double rtol) {
    const auto b = frame_bounds(f);
    return b.upper - b.lower <= rtol * b.upper;
}

template <Field T>
Mat<T> frame_operator(const Frame<T>& f) {
    return f.mat() * f.mat().adjoint();
}

template <Field T>
Mat<T> canonical_dual(const Frame<T>& f) {
    const Mat<T> s = frame_operator(f);
    return s.llt().solve(f.mat());
}

template <Field T>
double dual_residual(const Frame<T>& f, const Mat<T>& g) {
    if (g.rows() != f.n() || g.cols() != f.k()) {
        throw Error(ErrorKind::BadShape, "dual candidate is " + std::to_string(g.rows()) + "x" +
                                             std::to_string(g.cols()) + ", frame is " + std::to_string(f.n()) +
                                             "x" + std::to_string(f.k()));
    }
    return (f.mat() * g.adjoint() - Mat<T>::Identity(f.n(), f.n())).norm();
}

template <Field T>
bool is_dual_pair(const Frame<T>& f, const Mat<T>& g, double tol) {
    return dual_residual(f, g) <= tol;
}

template <Field T>
PartialDual<T> PartialDual<T>::leading(Mat<T> h) {
    std::vector<Index> idx(static_cast<std::size_t>(h.cols()));
    std::iota(idx.begin(), idx.end(), Index{0});
    return {std::move(h), std::move(idx)};
}

template <Field T>
PartialDual<T> PartialDual<T>::none(Index n) {
    return {Mat<T>(n, 0), {}};
}

template <Field T>
PartialDual<T> make_partial_dual(Mat<T> h, std::vector<Index> indices, Index k) {
    if (static_cast<Index>(indices.size()) != h.cols()) {
        throw Error(ErrorKind::BadShape, std::to_string(h.cols()) + " prescribed columns but " +
                                             std::to_string(indices.size()) + " positions");
    }
    if (h.cols() > k) {
        throw Error(ErrorKind::BadShape, "more prescribed columns than frame vectors");
    }
    require_finite(h, "prescribed columns");
    std::vector<std::size_t> by_pos(indices.size());
    std::iota(by_pos.begin(), by_pos.end(), std::size_t{0});
    std::sort(by_pos.begin(), by_pos.end(), [&](std::size_t a, std::size_t b) { return indices[a] < indices[b]; });

    PartialDual<T> out{Mat<T>(h.rows(), h.cols()), {}};
    out.indices.reserve(indices.size());
    for (std::size_t j = 0; j < by_pos.size(); ++j) {
        const Index pos = indices[by_pos[j]];
        if (pos < 0 || pos >= k) {
            throw Error(ErrorKind::BadShape, "position " + std::to_string(pos) + " outside 0.." + std::to_string(k - 1));
        }
        if (!out.indices.empty() && out.indices.back() == pos) {
            throw Error(ErrorKind::BadShape, "position " + std::to_string(pos) + " prescribed twice");
        }
        out.indices.push_back(pos);
        out.H.col(static_cast<Index>(j)) = h.col(static_cast<Index>(by_pos[j]));
    }
    return out;
}

template <Field T>
void validate_partial_dual(const Frame<T>& f, const PartialDual<T>& pd) {
    if (pd.H.rows() != f.n() || pd.H.cols() != pd.s()) {
        throw Error(ErrorKind::BadShape, "prescribed block is " + std::to_string(pd.H.rows()) + "x" +
                                             std::to_string(pd.H.cols()) + " for a frame in dimension " +
                                             std::to_string(f.n()) + " with " + std::to_string(pd.s()) +
                                             " positions");
    }
    if (pd.s() > f.k()) {
        throw Error(ErrorKind::BadShape, "more prescribed columns than frame vectors");
    }
    for (std::size_t j = 0; j < pd.indices.size(); ++j) {
        if (pd.indices[j] < 0 || pd.indices[j] >= f.k() || (j > 0 && pd.indices[j] <= pd.indices[j - 1])) {
            throw Error(ErrorKind::BadShape, "prescribed positions must be increasing and below k");
        }
    }
}

std::vector<Index> column_order(std::span<const Index> prescribed, Index k) {
    std::vector<Index> order(prescribed.begin(), prescribed.end());
    std::vector<bool> taken(static_cast<std::size_t>(k), false);
    for (Index p : prescribed) {
        taken[static_cast<std::size_t>(p)] = true;
    }
    for (Index j = 0; j < k; ++j) {
        if (!taken[static_cast<std::size_t>(j)]) {
            order.push_back(j);
        }
    }
    return order;
}

template <Field T>
Mat<T> permute_columns(const Mat<T>& m, std::span<const Index> order) {
    Mat<T> out(m.rows(), static_cast<Index>(order.size()));
    for (std::size_t j = 0; j < order.size(); ++j) {
        out.col(static_cast<Index>(j)) = m.col(order[j]);
    }
    return out;
}

template <Field T>
Mat<T> unpermute_columns(const Mat<T>& m, std::span<const Index> order) {
    Mat<T> out(m.rows(), m.cols());
    for (std::size_t j = 0; j < order.size(); ++j) {
        out.col(order[j]) = m.col(static_cast<Index>(j));
    }
    return out;
}

template <Field T>
SolutionFamily<T> make_family(Mat<T> particular, const std::vector<Mat<T>>& directions, PartialDual<T> prescribed) {
    SolutionFamily<T> fam{std::move(particular), {}, static_cast<Index>(directions.size()), std::move(prescribed)};
    if (directions.empty()) {
        return fam;
    }
    const Index rows = fam.particular.rows();
    const Index cols = fam.particular.cols();
    const Index d = fam.dof;
    Mat<T> stacked(rows * cols, d);
    for (Index i = 0; i < d; ++i) {
        stacked.col(i) = directions[static_cast<std::size_t>(i)].reshaped();
    }
    Eigen::HouseholderQR<Mat<T>> qr(stacked);
    const Mat<T> q = qr.householderQ() * Mat<T>::Identity(rows * cols, d);
    fam.basis.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        fam.basis.push_back(q.col(i).reshaped(rows, cols));
    }
    return fam;
}

template <Field T>
CompletionOutcome<T> unique_or_family(Mat<T> particular, const std::vector<Mat<T>>& directions,
                                      PartialDual<T> prescribed) {
    if (directions.empty()) {
        return Unique<T>{std::move(particular)};
    }
    return Family<T>{make_family(std::move(particular), directions, std::move(prescribed))};
}

template <Field T>
Mat<T> family_sample(const SolutionFamily<T>& fam, std::span<const T> coefficients) {
    if (static_cast<Index>(coefficients.size()) != fam.dof) {
        throw Error(ErrorKind::BadShape, "family has " + std::to_string(fam.dof) + " degrees of freedom, got " +
                                             std::to_string(coefficients.size()) + " coefficients");
    }
    Mat<T> g = fam.particular;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        g += coefficients[i] * fam.basis[i];
    }
    return g;
}

template <Field T>
bool prescribed_columns_match(const Mat<T>& g, const PartialDual<T>& pd, double tol) {
    double err = 0.0;
    for (Index j = 0; j < pd.s(); ++j) {
        err += (g.col(pd.indices[static_cast<std::size_t>(j)]) - pd.H.col(j)).squaredNorm();
    }
    return std::sqrt(err) <= tol * std::max(1.0, pd.H.norm());
}

namespace {

template <Field T>
bool dual_within(const Frame<T>& f, const Mat<T>& g, double tol) {
    return dual_residual(f, g) <= tol * std::max(1.0, f.mat().norm() * g.norm());
}

} // namespace

template <Field T>
bool family_contains(const Frame<T>& f, const SolutionFamily<T>& fam, const Mat<T>& g, double tol) {
    if (g.rows() != fam.particular.rows() || g.cols() != fam.particular.cols()) {
        throw Error(ErrorKind::BadShape, "candidate shape differs from the family's");
    }
    if (!dual_within(f, g, tol) || !prescribed_columns_match(g, fam.prescribed, tol)) {
        return false;
    }
    Mat<T> diff = g - fam.particular;
    for (const auto& b : fam.basis) {
        const T coeff = (b.array().conjugate() * diff.array()).sum();
        diff -= coeff * b;
    }
    return diff.norm() <= tol * std::max(1.0, g.norm());
}

template <Field T>
bool outcome_contains(const Frame<T>& f, const CompletionOutcome<T>& outcome, const Mat<T>& g, double tol) {
    if (const auto* u = std::get_if<Unique<T>>(&outcome)) {
        return g.rows() == u->G.rows() && g.cols() == u->G.cols() &&
               (g - u->G).norm() <= tol * std::max(1.0, u->G.norm());
    }
    if (const auto* fam = std::get_if<Family<T>>(&outcome)) {
        return family_contains(f, fam->family, g, tol);
    }
    return false;
}

template <Field T>
std::pair<Frame<T>, Mat<T>> surgery_remove(const Frame<T>& f, const Mat<T>& g, std::vector<Index> positions) {
    if (g.rows() != f.n() || g.cols() != f.k()) {
        throw Error(ErrorKind::BadShape, "dual must have the frame's shape");
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    const double zero_tol = f.tol() * std::max(1.0, g.norm());
    for (Index p : positions) {
        if (p < 0 || p >= f.k()) {
            throw Error(ErrorKind::BadShape, "position " + std::to_string(p) + " out of range");
        }
        if (g.col(p).norm() > zero_tol) {
            throw Error(ErrorKind::NotZeroColumn, "dual column " + std::to_string(p) + " is not zero");
        }
    }
    const auto order = column_order(positions, f.k());
    const std::span<const Index> keep(order.begin() + static_cast<std::ptrdiff_t>(positions.size()), order.end());
    Mat<T> f_kept = permute_columns(f.mat(), keep);
    Mat<T> g_kept = permute_columns(g, keep);
    if (f_kept.cols() < f.n()) {
        throw Error(ErrorKind::NotAFrame, "too few vectors remain to span F^n");
    }
    return {make_frame(std::move(f_kept), f.tol()), std::move(g_kept)};
}

#define FRAMEC_INSTANTIATE(T)                                                                                      \
    template Frame<T> make_frame<T>(Mat<T>, double);                                                               \
    template FrameBounds frame_bounds<T>(const Frame<T>&);                                                         \
    template bool is_tight<T>(const Frame<T>&, double);                                                            \
    template Mat<T> frame_operator<T>(const Frame<T>&);                                                            \
    template Mat<T> canonical_dual<T>(const Frame<T>&);                                                            \
    template double dual_residual<T>(const Frame<T>&, const Mat<T>&);                                              \
    template bool is_dual_pair<T>(const Frame<T>&, const Mat<T>&, double);                                         \
    template struct PartialDual<T>;                                                                                \
    template PartialDual<T> make_partial_dual<T>(Mat<T>, std::vector<Index>, Index);                               \
    template void validate_partial_dual<T>(const Frame<T>&, const PartialDual<T>&);                                \
    template Mat<T> permute_columns<T>(const Mat<T>&, std::span<const Index>);                                     \
    template Mat<T> unpermute_columns<T>(const Mat<T>&, std::span<const Index>);                                   \
    template SolutionFamily<T> make_family<T>(Mat<T>, const std::vector<Mat<T>>&, PartialDual<T>);                 \
    template CompletionOutcome<T> unique_or_family<T>(Mat<T>, const std::vector<Mat<T>>&, PartialDual<T>);         \
    template Mat<T> family_sample<T>(const SolutionFamily<T>&, std::span<const T>);                                \
    template bool prescribed_columns_match<T>(const Mat<T>&, const PartialDual<T>&, double);                       \
    template bool family_contains<T>(const Frame<T>&, const SolutionFamily<T>&, const Mat<T>&, double);            \
    template bool outcome_contains<T>(const Frame<T>&, const CompletionOutcome<T>&, const Mat<T>&, double);        \
    template std::pair<Frame<T>, Mat<T>> surgery_remove<T>(const Frame<T>&, const Mat<T>&, std::vector<Index>);

FRAMEC_INSTANTIATE(double)
FRAMEC_INSTANTIATE(Complex)

#undef FRAMEC_INSTANTIATE

} // namespace framec
