#ifndef TREECF_DISTANCE_HPP
#define TREECF_DISTANCE_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "treecf/covariance.hpp"
#include "treecf/errors.hpp"

namespace treecf {

enum class DistanceKind { Euclidean, Cosine, Manhattan, Mahalanobis };

inline const char* to_string(DistanceKind k) {
    switch (k) {
        case DistanceKind::Euclidean: return "euclidean";
        case DistanceKind::Cosine: return "cosine";
        case DistanceKind::Manhattan: return "manhattan";
        case DistanceKind::Mahalanobis: return "mahalanobis";
    }
    return "unknown";
}

inline DistanceKind distance_kind_from_string(const std::string& s) {
    if (s == "euclidean") return DistanceKind::Euclidean;
    if (s == "cosine") return DistanceKind::Cosine;
    if (s == "manhattan") return DistanceKind::Manhattan;
    if (s == "mahalanobis") return DistanceKind::Mahalanobis;
    throw ConfigError("unknown distance kind: " + s);
}

// Distance selector. smooth_eps > 0 smooths the kinks so gradients exist
// everywhere; reported distances are always recomputed with smooth_eps = 0.
struct DistanceSpec {
    DistanceKind kind = DistanceKind::Euclidean;
    std::optional<CovarianceContext> covariance;  // required iff mahalanobis
    double smooth_eps = 1e-10;

    void validate() const {
        if (smooth_eps < 0.0) throw ConfigError("smooth_eps must be >= 0");
        if (kind == DistanceKind::Mahalanobis && !covariance)
            throw ConfigError("mahalanobis distance requires a covariance context");
    }

    DistanceSpec exact() const {
        DistanceSpec s = *this;
        s.smooth_eps = 0.0;
        return s;
    }
};

namespace detail {

inline void check_pair(const std::vector<double>& x, const std::vector<double>& xbar) {
    if (x.size() != xbar.size()) throw DataError("distance arguments differ in dimension");
    if (x.empty()) throw DataError("distance of empty vectors");
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double vi : v) s += vi * vi;
    return std::sqrt(s);
}

inline double quad_form(const CovarianceContext& cov, const std::vector<double>& d) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < d.size(); ++j) row += cov.inv(i, j) * d[j];
        s += d[i] * row;
    }
    return s;
}

}  // namespace detail

/// Distance between x and xbar under `spec`. With smooth_eps = 0 these are
/// exactly: sqrt(sum (x-xbar)^2); 1 - <x,xbar>/(|x||xbar|); sum |x-xbar|;
/// sqrt((x-xbar)^T C^-1 (x-xbar)).
inline double dist(const DistanceSpec& spec, const std::vector<double>& x,
                   const std::vector<double>& xbar) {
    spec.validate();
    detail::check_pair(x, xbar);
    const double eps = spec.smooth_eps;
    switch (spec.kind) {
        case DistanceKind::Euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - xbar[i];
                s += d * d;
            }
            return std::sqrt(s + eps);
        }
        case DistanceKind::Manhattan: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - xbar[i];
                s += std::sqrt(d * d + eps);
            }
            return s;
        }
        case DistanceKind::Cosine: {
            const double nx = detail::norm2(x);
            const double nb = detail::norm2(xbar);
            if (nx == 0.0 || nb == 0.0)
                throw DataError("cosine distance undefined for a zero vector");
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * xbar[i];
            return 1.0 - dot / (nx * nb);
        }
        case DistanceKind::Mahalanobis: {
            if (x.size() != spec.covariance->dim)
                throw DataError("covariance dimension does not match vectors");
            std::vector<double> d(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - xbar[i];
            return std::sqrt(detail::quad_form(*spec.covariance, d) + eps);
        }
    }
    throw ConfigError("unreachable distance kind");
}

/// Analytic gradient of dist with respect to xbar.
inline std::vector<double> dist_gradient(const DistanceSpec& spec, const std::vector<double>& x,
                                         const std::vector<double>& xbar) {
    spec.validate();
    detail::check_pair(x, xbar);
    const double eps = spec.smooth_eps;
    std::vector<double> g(x.size(), 0.0);
    switch (spec.kind) {
        case DistanceKind::Euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = xbar[i] - x[i];
                s += d * d;
            }
            const double r = std::sqrt(s + eps);
            if (r == 0.0)
                throw ConfigError(
                    "euclidean gradient singular at x == xbar; set smooth_eps > 0");
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = (xbar[i] - x[i]) / r;
            return g;
        }
        case DistanceKind::Manhattan: {
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = xbar[i] - x[i];
                const double r = std::sqrt(d * d + eps);
                if (r == 0.0)
                    throw ConfigError(
                        "manhattan gradient singular at a matching coordinate; set smooth_eps > 0");
                g[i] = d / r;
            }
            return g;
        }
        case DistanceKind::Cosine: {
            const double nx = detail::norm2(x);
            const double nb = detail::norm2(xbar);
            if (nx == 0.0 || nb == 0.0)
                throw DataError("cosine distance undefined for a zero vector");
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * xbar[i];
            // d/dxbar [1 - dot/(nx*nb)] = -x/(nx*nb) + dot*xbar/(nx*nb^3)
            for (std::size_t i = 0; i < x.size(); ++i)
                g[i] = -x[i] / (nx * nb) + dot * xbar[i] / (nx * nb * nb * nb);
            return g;
        }
        case DistanceKind::Mahalanobis: {
            if (x.size() != spec.covariance->dim)
                throw DataError("covariance dimension does not match vectors");
            std::vector<double> d(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) d[i] = xbar[i] - x[i];
            const double r = std::sqrt(detail::quad_form(*spec.covariance, d) + eps);
            if (r == 0.0)
                throw ConfigError(
                    "mahalanobis gradient singular at x == xbar; set smooth_eps > 0");
            // d/dxbar sqrt(d^T C^-1 d + eps) = C^-1 d / r  (C^-1 symmetric)
            for (std::size_t i = 0; i < x.size(); ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < x.size(); ++j)
                    row += spec.covariance->inv(i, j) * d[j];
                g[i] = row / r;
            }
            return g;
        }
    }
    throw ConfigError("unreachable distance kind");
}

}  // namespace treecf

#endif  // TREECF_DISTANCE_HPP
