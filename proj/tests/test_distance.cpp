#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "treecf/covariance.hpp"
#include "treecf/distance.hpp"
#include "treecf/errors.hpp"

using namespace treecf;

namespace {

DistanceSpec spec_of(DistanceKind kind, double eps = 0.0) {
    DistanceSpec s;
    s.kind = kind;
    s.smooth_eps = eps;
    if (kind == DistanceKind::Mahalanobis) s.covariance = identity_covariance(2);
    return s;
}

}  // namespace

TEST_CASE("distance kind names round-trip") {
    for (auto k : {DistanceKind::Euclidean, DistanceKind::Cosine, DistanceKind::Manhattan,
                   DistanceKind::Mahalanobis})
        CHECK(distance_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(distance_kind_from_string("chebyshev"), ConfigError);
}

TEST_CASE("exact distances match hand values") {
    CHECK(dist(spec_of(DistanceKind::Euclidean), {1, 2}, {4, 6}) == Catch::Approx(5.0));
    CHECK(dist(spec_of(DistanceKind::Manhattan), {1, 2}, {4, 6}) == Catch::Approx(7.0));
    CHECK(dist(spec_of(DistanceKind::Cosine), {1, 0}, {0, 1}) == Catch::Approx(1.0));
    CHECK(dist(spec_of(DistanceKind::Cosine), {1, 0}, {-1, 0}) == Catch::Approx(2.0));
    CHECK(dist(spec_of(DistanceKind::Mahalanobis), {1, 2}, {4, 6}) == Catch::Approx(5.0));
}

TEST_CASE("cosine distance is scale invariant") {
    const auto spec = spec_of(DistanceKind::Cosine);
    CHECK(dist(spec, {1, 2}, {2, 4}) == Catch::Approx(0.0).margin(1e-15));
    CHECK(dist(spec, {1, 2}, {3, 1}) ==
          Catch::Approx(dist(spec, {10, 20}, {0.3, 0.1})).margin(1e-12));
}

TEST_CASE("cosine rejects zero vectors") {
    const auto spec = spec_of(DistanceKind::Cosine);
    CHECK_THROWS_AS(dist(spec, {0, 0}, {1, 2}), DataError);
    CHECK_THROWS_AS(dist(spec, {1, 2}, {0, 0}), DataError);
    CHECK_THROWS_AS(dist_gradient(spec, {1, 2}, {0, 0}), DataError);
}

TEST_CASE("mahalanobis with identity covariance equals euclidean") {
    const auto maha = spec_of(DistanceKind::Mahalanobis);
    const auto eucl = spec_of(DistanceKind::Euclidean);
    for (const auto& [x, b] : std::vector<std::pair<std::vector<double>, std::vector<double>>>{
             {{0.1, 0.9}, {0.4, 0.2}}, {{5, -3}, {2, 7}}, {{0, 0}, {1, 1}}}) {
        CHECK(std::abs(dist(maha, x, b) - dist(eucl, x, b)) < 1e-12);
    }
}

TEST_CASE("mahalanobis whitens by the inverse covariance") {
    // diag(4, 1) covariance: sqrt(0.25 * 2^2 + 1 * 3^2) = sqrt(10)
    CovarianceContext ctx;
    ctx.dim = 2;
    ctx.matrix = {4.0, 0.0, 0.0, 1.0};
    ctx.inverse = {0.25, 0.0, 0.0, 1.0};
    DistanceSpec spec;
    spec.kind = DistanceKind::Mahalanobis;
    spec.covariance = ctx;
    spec.smooth_eps = 0.0;
    CHECK(dist(spec, {0, 0}, {2, 3}) == Catch::Approx(std::sqrt(10.0)).margin(1e-12));
}

TEST_CASE("smoothing perturbs the value only slightly") {
    auto spec = spec_of(DistanceKind::Euclidean, 0.01);
    CHECK(dist(spec, {1, 2}, {4, 6}) == Catch::Approx(std::sqrt(25.01)).margin(1e-12));
    CHECK(dist(spec.exact(), {1, 2}, {4, 6}) == Catch::Approx(5.0).margin(1e-15));

    // manhattan smooths per coordinate
    auto man = spec_of(DistanceKind::Manhattan, 0.01);
    const double want = std::sqrt(9.0 + 0.01) + std::sqrt(16.0 + 0.01);
    CHECK(dist(man, {1, 2}, {4, 6}) == Catch::Approx(want).margin(1e-12));
}

TEST_CASE("gradients match finite differences away from kinks") {
    const std::vector<double> x{0.3, 0.8};
    const std::vector<double> xbar{0.6, 0.1};
    for (auto kind : {DistanceKind::Euclidean, DistanceKind::Cosine, DistanceKind::Manhattan,
                      DistanceKind::Mahalanobis}) {
        const auto spec = spec_of(kind, 1e-10);
        const auto g = dist_gradient(spec, x, xbar);
        const auto fd = testutil::fd_gradient(
            [&](const std::vector<double>& v) { return dist(spec, x, v); }, xbar);
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(g[i] == Catch::Approx(fd[i]).margin(1e-6));
    }
}

TEST_CASE("mahalanobis gradient with a non-trivial covariance") {
    CovarianceContext ctx;
    ctx.dim = 2;
    ctx.matrix = {2.0, 0.5, 0.5, 1.0};
    // inverse of [[2, .5], [.5, 1]] = (1/1.75) [[1, -.5], [-.5, 2]]
    ctx.inverse = {1.0 / 1.75, -0.5 / 1.75, -0.5 / 1.75, 2.0 / 1.75};
    DistanceSpec spec;
    spec.kind = DistanceKind::Mahalanobis;
    spec.covariance = ctx;
    spec.smooth_eps = 1e-10;

    const std::vector<double> x{0.2, 0.9};
    const std::vector<double> xbar{0.7, 0.4};
    const auto g = dist_gradient(spec, x, xbar);
    const auto fd = testutil::fd_gradient(
        [&](const std::vector<double>& v) { return dist(spec, x, v); }, xbar);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(g[i] == Catch::Approx(fd[i]).margin(1e-6));
}

TEST_CASE("smoothed gradients are defined at the singular point") {
    const std::vector<double> x{0.5, 0.5};
    for (auto kind : {DistanceKind::Euclidean, DistanceKind::Manhattan,
                      DistanceKind::Mahalanobis}) {
        const auto g = dist_gradient(spec_of(kind, 1e-6), x, x);
        for (double v : g) CHECK(v == 0.0);
    }
}

TEST_CASE("unsmoothed gradients at the singular point are rejected") {
    const std::vector<double> x{0.5, 0.5};
    CHECK_THROWS_AS(dist_gradient(spec_of(DistanceKind::Euclidean, 0.0), x, x), ConfigError);
    CHECK_THROWS_AS(dist_gradient(spec_of(DistanceKind::Manhattan, 0.0), x, x), ConfigError);
    CHECK_THROWS_AS(dist_gradient(spec_of(DistanceKind::Mahalanobis, 0.0), x, x), ConfigError);
}

TEST_CASE("distance input validation") {
    CHECK_THROWS_AS(dist(spec_of(DistanceKind::Euclidean), {1.0}, {1.0, 2.0}), DataError);
    CHECK_THROWS_AS(dist(spec_of(DistanceKind::Euclidean), {}, {}), DataError);

    DistanceSpec bad;
    bad.kind = DistanceKind::Mahalanobis;  // no covariance attached
    CHECK_THROWS_AS(dist(bad, {1.0}, {2.0}), ConfigError);

    DistanceSpec neg;
    neg.smooth_eps = -1.0;
    CHECK_THROWS_AS(neg.validate(), ConfigError);
}
