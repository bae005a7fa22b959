#ifndef TREECF_COVARIANCE_HPP
#define TREECF_COVARIANCE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "treecf/dataset.hpp"
#include "treecf/errors.hpp"

namespace treecf {

// Feature covariance of a training split plus its regularized inverse,
// consumed by the Mahalanobis distance. Both matrices are row-major dim x dim.
struct CovarianceContext {
    std::size_t dim = 0;
    std::vector<double> matrix;
    std::vector<double> inverse;
    double ridge = 0.0;

    double mat(std::size_t i, std::size_t j) const { return matrix[i * dim + j]; }
    double inv(std::size_t i, std::size_t j) const { return inverse[i * dim + j]; }
};

namespace detail {

// In-place Cholesky factor L of a symmetric A (row-major). Returns false when
// A is not positive definite.
inline bool cholesky(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0 || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
        for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
    }
    return true;
}

// Inverse of SPD matrix from its Cholesky factor: solve L L^T X = I.
inline std::vector<double> spd_inverse_from_cholesky(const std::vector<double>& l, std::size_t n) {
    std::vector<double> x(n * n, 0.0);
    std::vector<double> col(n);
    for (std::size_t c = 0; c < n; ++c) {
        // forward substitution L y = e_c
        for (std::size_t i = 0; i < n; ++i) {
            double s = (i == c) ? 1.0 : 0.0;
            for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * col[k];
            col[i] = s / l[i * n + i];
        }
        // back substitution L^T x = y
        for (std::size_t ii = n; ii-- > 0;) {
            double s = col[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * col[k];
            col[ii] = s / l[ii * n + ii];
        }
        for (std::size_t i = 0; i < n; ++i) x[i * n + c] = col[i];
    }
    // symmetrize away roundoff
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (x[i * n + j] + x[j * n + i]);
            x[i * n + j] = v;
            x[j * n + i] = v;
        }
    return x;
}

}  // namespace detail

/// Sample covariance (divisor n-1) of the rows of `train`, with `ridge` added
/// to the diagonal before inversion.
inline CovarianceContext covariance(const Dataset& train, double ridge = 1e-6) {
    const std::size_t n = train.n_rows();
    const std::size_t d = train.n_features();
    if (n < 2) throw DataError("covariance needs at least 2 rows");

    std::vector<double> mean(d, 0.0);
    for (const auto& row : train.rows)
        for (std::size_t i = 0; i < d; ++i) mean[i] += row[i];
    for (auto& m : mean) m /= static_cast<double>(n);

    CovarianceContext ctx;
    ctx.dim = d;
    ctx.ridge = ridge;
    ctx.matrix.assign(d * d, 0.0);
    for (const auto& row : train.rows)
        for (std::size_t i = 0; i < d; ++i) {
            const double di = row[i] - mean[i];
            for (std::size_t j = i; j < d; ++j)
                ctx.matrix[i * d + j] += di * (row[j] - mean[j]);
        }
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const double v = ctx.matrix[i * d + j] / denom;
            ctx.matrix[i * d + j] = v;
            ctx.matrix[j * d + i] = v;
        }

    std::vector<double> reg = ctx.matrix;
    for (std::size_t i = 0; i < d; ++i) reg[i * d + i] += ridge;
    if (!detail::cholesky(reg, d))
        throw DataError("covariance matrix not invertible; raise the ridge parameter");
    ctx.inverse = detail::spd_inverse_from_cholesky(reg, d);
    return ctx;
}

/// Identity covariance of the given dimension (Mahalanobis == Euclidean).
inline CovarianceContext identity_covariance(std::size_t dim) {
    CovarianceContext ctx;
    ctx.dim = dim;
    ctx.ridge = 0.0;
    ctx.matrix.assign(dim * dim, 0.0);
    ctx.inverse.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        ctx.matrix[i * dim + i] = 1.0;
        ctx.inverse[i * dim + i] = 1.0;
    }
    return ctx;
}

}  // namespace treecf

#endif  // TREECF_COVARIANCE_HPP
