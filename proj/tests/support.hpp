#pragma once

// Test-only helpers: random generators and oracles that do not go through the
// library code paths they are used to check.

#include <boost/multiprecision/cpp_int.hpp>

#include <random>
#include <vector>

#include "framec/frame.hpp"

namespace framec::testing {

using Rational = boost::multiprecision::cpp_rational;

template <Field T>
T random_scalar(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    if constexpr (std::same_as<T, double>) {
        return d(rng);
    } else {
        const double re = d(rng);
        return Complex(re, d(rng));
    }
}

template <Field T>
Mat<T> random_mat(std::mt19937_64& rng, Index rows, Index cols, double lo = -2.0, double hi = 2.0) {
    Mat<T> m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = random_scalar<T>(rng, lo, hi);
        }
    }
    return m;
}

template <Field T>
Frame<T> random_frame(std::mt19937_64& rng, Index n, Index k, double tol = kDefaultTol) {
    while (true) {
        try {
            return make_frame(random_mat<T>(rng, n, k), tol);
        } catch (const Error&) {
        }
    }
}

inline Index random_index(std::mt19937_64& rng, Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

/// s distinct positions out of 0..k-1, increasing.
inline std::vector<Index> random_positions(std::mt19937_64& rng, Index k, Index s) {
    std::vector<Index> all(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        all[static_cast<std::size_t>(i)] = i;
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(s));
    std::sort(all.begin(), all.end());
    return all;
}

/// Exact rank over the rationals by fraction-free bookkeeping in cpp_rational.
inline Index exact_rank(std::vector<std::vector<Rational>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) {
            ++pivot;
        }
        if (pivot == rows) {
            continue;
        }
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][c] == 0) {
                continue;
            }
            const Rational factor = m[r][c] / m[rank][c];
            for (std::size_t cc = c; cc < cols; ++cc) {
                m[r][cc] -= factor * m[rank][cc];
            }
        }
        ++rank;
    }
    return static_cast<Index>(rank);
}

inline std::vector<std::vector<Rational>> to_rational(const Mat<double>& m) {
    std::vector<std::vector<Rational>> out(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out[static_cast<std::size_t>(i)].emplace_back(static_cast<long long>(m(i, j)));
        }
    }
    return out;
}

/// F^+ for a full-row-rank 2 x k real F, inverting F F^T by Cramer's rule.
inline Mat<double> pinv_2row_cramer(const Mat<double>& f) {
    const double a = f.row(0).dot(f.row(0));
    const double b = f.row(0).dot(f.row(1));
    const double d = f.row(1).dot(f.row(1));
    const double det = a * d - b * b;
    Mat<double> inv(2, 2);
    inv << d / det, -b / det, -b / det, a / det;
    return f.transpose() * inv;
}

template <Field T>
double max_abs_diff(const Mat<T>& a, const Mat<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace framec::testing
