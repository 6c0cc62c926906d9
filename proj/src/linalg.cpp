#include "framec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace framec {

namespace {

template <Field T>
bool is_finite(T v) {
    if constexpr (std::same_as<T, double>) {
        return std::isfinite(v);
    } else {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    }
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

} // namespace

template <Field T>
void require_finite(const Mat<T>& m, std::string_view what) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (!is_finite(m(i, j))) {
                throw Error(ErrorKind::NonFinite, std::string(what) + " has a non-finite entry at (" +
                                                      std::to_string(i) + ", " + std::to_string(j) + ")");
            }
        }
    }
}

double rank_cutoff(double sigma_max, double tol) noexcept { return tol * std::max(1.0, sigma_max); }

template <Field T>
Mat<T> SvdFactors<T>::sigma_matrix() const {
    Mat<T> s = Mat<T>::Zero(U.rows(), V.rows());
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        s(static_cast<Index>(i), static_cast<Index>(i)) = sigma[i];
    }
    return s;
}

template <Field T>
Mat<T> SvdFactors<T>::reconstruct() const {
    return U * sigma_matrix() * V.adjoint();
}

template <Field T>
SvdFactors<T> svd(const Mat<T>& m) {
    require_finite(m, "svd input");
    if (m.rows() > m.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "svd expects rows <= cols; transpose the input");
    }
    Eigen::JacobiSVD<Mat<T>> dec(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return {dec.matrixU(), to_vector(dec.singularValues()), dec.matrixV()};
}

template <Field T>
std::vector<double> singular_values(const Mat<T>& m) {
    require_finite(m, "matrix");
    if (m.size() == 0) {
        return {};
    }
    Eigen::JacobiSVD<Mat<T>> dec(m);
    return to_vector(dec.singularValues());
}

template <Field T>
double default_rank_tol(const Mat<T>& m) {
    const auto sv = singular_values(m);
    const double s1 = sv.empty() ? 0.0 : sv.front();
    return static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon() * s1;
}

template <Field T>
Index numerical_rank(const Mat<T>& m, std::optional<double> tol) {
    const auto sv = singular_values(m);
    const double cut = tol ? *tol : default_rank_tol(m);
    if (cut < 0.0) {
        throw Error(ErrorKind::DimensionMismatch, "rank tolerance must be nonnegative");
    }
    return static_cast<Index>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

template <Field T>
Mat<T> pseudoinverse(const Mat<T>& m, std::optional<double> tol) {
    require_finite(m, "pseudoinverse input");
    if (m.size() == 0) {
        return Mat<T>::Zero(m.cols(), m.rows());
    }
    Eigen::JacobiSVD<Mat<T>> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = dec.singularValues();
    const double cut = tol ? *tol
                           : static_cast<double>(std::max(m.rows(), m.cols())) *
                                 std::numeric_limits<double>::epsilon() * sv(0);
    Mat<T> v_scaled = dec.matrixV();
    for (Index i = 0; i < sv.size(); ++i) {
        const double inv = sv(i) > cut ? 1.0 / sv(i) : 0.0;
        v_scaled.col(i) *= inv;
    }
    return v_scaled * dec.matrixU().adjoint();
}

template <Field T>
LinSolve<T> solve_min_norm(const Mat<T>& a, const Mat<T>& c, double tol) {
    if (a.rows() != c.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "coefficient has " + std::to_string(a.rows()) +
                                                      " rows but right-hand side has " + std::to_string(c.rows()));
    }
    require_finite(a, "coefficient matrix");
    require_finite(c, "right-hand side");

    LinSolve<T> out;
    const double rhs_norm = c.norm();
    if (a.size() == 0) {
        // No equations or no unknowns: every unknown is free, nothing can be matched.
        out.solution = Mat<T>::Zero(a.cols(), c.cols());
        out.nullspace = Mat<T>::Identity(a.cols(), a.cols());
        out.residual = rhs_norm;
        out.rank = 0;
        out.rank_augmented = c.size() == 0 ? 0 : numerical_rank(c, rank_cutoff(singular_values(c).front(), tol));
        out.consistent = out.residual <= tol * std::max(1.0, rhs_norm);
        return out;
    }

    Eigen::JacobiSVD<Mat<T>> dec(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = dec.singularValues();
    const double cut = rank_cutoff(sv(0), tol);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cut) {
        ++rank;
    }

    const Mat<T>& u = dec.matrixU();
    const Mat<T>& v = dec.matrixV();
    Mat<T> coeff = u.leftCols(rank).adjoint() * c;
    for (Index i = 0; i < rank; ++i) {
        coeff.row(i) /= sv(i);
    }
    out.solution = v.leftCols(rank) * coeff;
    out.nullspace = v.rightCols(a.cols() - rank);
    out.residual = (a * out.solution - c).norm();
    out.rank = rank;

    Mat<T> aug(a.rows(), a.cols() + c.cols());
    aug << a, c;
    const auto aug_sv = singular_values(aug);
    out.rank_augmented = numerical_rank(aug, rank_cutoff(aug_sv.front(), tol));
    out.consistent = out.residual <= tol * std::max(1.0, rhs_norm);
    return out;
}

template <Field T>
double span_residual(const Mat<T>& a, const Mat<T>& c, double tol) {
    if (a.rows() != c.rows()) {
        throw Error(ErrorKind::DimensionMismatch, "span test needs equal row counts");
    }
    if (a.size() == 0) {
        return c.norm();
    }
    const double cut = rank_cutoff(singular_values(a).front(), tol);
    const Mat<T> proj = a * pseudoinverse(a, cut);
    return (c - proj * c).norm();
}

template <Field T>
bool in_column_span(const Mat<T>& a, const Mat<T>& c, double tol) {
    return span_residual(a, c, tol) <= tol * std::max(1.0, c.norm());
}

template <Field T>
Elimination<T> eliminate_with_product(const Mat<T>& fstar, double pivot_tol) {
    require_finite(fstar, "F^*");
    const Index k = fstar.rows();
    const Index n = fstar.cols();
    if (n > k) {
        throw Error(ErrorKind::RankDeficient, "F^* has more columns than rows");
    }

    Mat<T> work = fstar;
    Mat<T> p = Mat<T>::Identity(k, k);
    const double scale = work.size() == 0 ? 0.0 : work.cwiseAbs().maxCoeff();

    for (Index col = 0; col < n; ++col) {
        Index pivot = col;
        double best = std::abs(work(col, col));
        for (Index r = col + 1; r < k; ++r) {
            if (std::abs(work(r, col)) > best) {
                best = std::abs(work(r, col));
                pivot = r;
            }
        }
        if (best <= pivot_tol * scale) {
            throw Error(ErrorKind::RankDeficient, "F^* has rank below " + std::to_string(n) +
                                                      " (column " + std::to_string(col) + " has no usable pivot)");
        }
        if (pivot != col) {
            work.row(col).swap(work.row(pivot));
            p.row(col).swap(p.row(pivot));
        }
        const T inv = T(1.0) / work(col, col);
        work.row(col) *= inv;
        p.row(col) *= inv;
        for (Index r = 0; r < k; ++r) {
            if (r == col) {
                continue;
            }
            const T factor = work(r, col);
            if (factor != T(0.0)) {
                work.row(r) -= factor * work.row(col);
                p.row(r) -= factor * p.row(col);
            }
        }
    }

    Mat<T> target = Mat<T>::Zero(k, n);
    target.topRows(n).setIdentity();
    return {p, (p * fstar - target).norm()};
}

#define FRAMEC_INSTANTIATE(T)                                                                  \
    template void require_finite<T>(const Mat<T>&, std::string_view);                          \
    template struct SvdFactors<T>;                                                             \
    template SvdFactors<T> svd<T>(const Mat<T>&);                                              \
    template std::vector<double> singular_values<T>(const Mat<T>&);                            \
    template double default_rank_tol<T>(const Mat<T>&);                                        \
    template Index numerical_rank<T>(const Mat<T>&, std::optional<double>);                    \
    template Mat<T> pseudoinverse<T>(const Mat<T>&, std::optional<double>);                    \
    template LinSolve<T> solve_min_norm<T>(const Mat<T>&, const Mat<T>&, double);              \
    template double span_residual<T>(const Mat<T>&, const Mat<T>&, double);                    \
    template bool in_column_span<T>(const Mat<T>&, const Mat<T>&, double);                     \
    template Elimination<T> eliminate_with_product<T>(const Mat<T>&, double);

FRAMEC_INSTANTIATE(double)
FRAMEC_INSTANTIATE(Complex)

#undef FRAMEC_INSTANTIATE

} // namespace framec
