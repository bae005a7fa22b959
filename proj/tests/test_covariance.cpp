#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "treecf/covariance.hpp"
#include "treecf/dataset.hpp"
#include "treecf/errors.hpp"

using namespace treecf;

namespace {

Dataset rows_only(std::vector<std::vector<double>> rows) {
    Dataset ds;
    ds.rows = std::move(rows);
    const std::size_t d = ds.rows.front().size();
    for (std::size_t i = 0; i < d; ++i) ds.feature_names.push_back("f" + std::to_string(i));
    ds.labels.assign(ds.rows.size(), 0);
    ds.n_classes = 2;
    return ds;
}

}  // namespace

// Sample covariance (divisor n-1) of {(0,0),(1,1),(0.5,0.5)}: every entry
// is 0.25, worked out by hand from sum of squared deviations 0.5 over n-1=2.
TEST_CASE("covariance matches the hand-computed example") {
    const auto ctx = covariance(rows_only({{0.0, 0.0}, {1.0, 1.0}, {0.5, 0.5}}), 0.01);
    REQUIRE(ctx.dim == 2);
    CHECK(ctx.mat(0, 0) == Catch::Approx(0.25).margin(1e-12));
    CHECK(ctx.mat(0, 1) == Catch::Approx(0.25).margin(1e-12));
    CHECK(ctx.mat(1, 0) == Catch::Approx(0.25).margin(1e-12));
    CHECK(ctx.mat(1, 1) == Catch::Approx(0.25).margin(1e-12));
    CHECK(ctx.ridge == 0.01);
}

TEST_CASE("diagonal data gives a diagonal covariance and inverse") {
    // x0 has variance 4, x1 has variance 1, zero correlation by symmetry
    const auto ctx = covariance(rows_only({{2.0, 1.0}, {-2.0, -1.0}, {2.0, -1.0}, {-2.0, 1.0}}),
                                0.0);
    const double v0 = 16.0 / 3.0;  // sum of squares 16 over n-1 = 3
    const double v1 = 4.0 / 3.0;
    CHECK(ctx.mat(0, 0) == Catch::Approx(v0).margin(1e-12));
    CHECK(ctx.mat(1, 1) == Catch::Approx(v1).margin(1e-12));
    CHECK(ctx.mat(0, 1) == Catch::Approx(0.0).margin(1e-12));
    CHECK(ctx.inv(0, 0) == Catch::Approx(1.0 / v0).margin(1e-12));
    CHECK(ctx.inv(1, 1) == Catch::Approx(1.0 / v1).margin(1e-12));
    CHECK(ctx.inv(0, 1) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("inverse really inverts the regularized matrix") {
    const double ridge = 1e-3;
    const auto ctx = covariance(
        rows_only({{0.1, 0.9, 0.3}, {0.4, 0.2, 0.8}, {0.7, 0.5, 0.1}, {0.2, 0.6, 0.6},
                   {0.9, 0.1, 0.4}}),
        ridge);
    const std::size_t d = ctx.dim;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double reg = ctx.mat(i, k) + (i == k ? ridge : 0.0);
                s += reg * ctx.inv(k, j);
            }
            CHECK(s == Catch::Approx(i == j ? 1.0 : 0.0).margin(1e-9));
        }
}

TEST_CASE("identity_covariance is the identity") {
    const auto ctx = identity_covariance(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(ctx.mat(i, j) == (i == j ? 1.0 : 0.0));
            CHECK(ctx.inv(i, j) == (i == j ? 1.0 : 0.0));
        }
}

TEST_CASE("singular covariance without ridge is rejected") {
    // two identical columns make the matrix rank-deficient
    const auto ds = rows_only({{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}});
    CHECK_THROWS_AS(covariance(ds, 0.0), DataError);
    CHECK_NOTHROW(covariance(ds, 1e-6));  // the ridge restores invertibility
}

TEST_CASE("covariance needs at least two rows") {
    CHECK_THROWS_AS(covariance(rows_only({{1.0, 2.0}})), DataError);
}
