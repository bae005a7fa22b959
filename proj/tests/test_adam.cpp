#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "treecf/adam.hpp"
#include "treecf/errors.hpp"

using namespace treecf;

TEST_CASE("first adam step is minus alpha times the gradient sign") {
    AdamState st(3);
    const std::vector<double> g{3.0, -2.0, 0.5};
    const auto delta = st.step(g, 0.1);
    REQUIRE(delta.size() == 3);
    // bias correction makes m_hat = g and v_hat = g^2 on step one, so
    // delta_i = -alpha * g_i / (|g_i| + eps) ~ -alpha * sign(g_i)
    CHECK(delta[0] == Catch::Approx(-0.1).margin(1e-8));
    CHECK(delta[1] == Catch::Approx(0.1).margin(1e-8));
    CHECK(delta[2] == Catch::Approx(-0.1).margin(1e-8));
    CHECK(st.steps_taken() == 1);
}

TEST_CASE("zero gradient leaves the iterate unchanged") {
    AdamState st(2);
    const auto delta = st.step({0.0, 0.0}, 0.05);
    CHECK(delta[0] == 0.0);
    CHECK(delta[1] == 0.0);
}

TEST_CASE("constant gradient walks steadily downhill") {
    AdamState st(1);
    double x = 1.0;
    double prev = x;
    for (int i = 0; i < 50; ++i) {
        const auto delta = st.step({2.0}, 0.01);
        x += delta[0];
        CHECK(x < prev);
        prev = x;
    }
    CHECK(st.steps_taken() == 50);
    // with a constant gradient every step stays close to -alpha
    CHECK(x == Catch::Approx(1.0 - 50 * 0.01).margin(1e-4));
}

TEST_CASE("momentum carries over a sign flip") {
    AdamState st(1);
    st.step({1.0}, 0.1);
    // after many positive gradients, one negative gradient does not
    // immediately reverse the step direction (first moment still positive)
    for (int i = 0; i < 9; ++i) st.step({1.0}, 0.1);
    const auto delta = st.step({-0.1}, 0.1);
    CHECK(delta[0] < 0.0);
}

TEST_CASE("adam validates inputs") {
    AdamState st(2);
    CHECK_THROWS_AS(st.step({1.0}, 0.1), ConfigError);  // wrong dimension

    AdamParams bad;
    bad.b1 = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.b2 = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = {};
    bad.eps = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    AdamParams good;
    CHECK_NOTHROW(good.validate());
    CHECK(good.b1 == 0.9);
    CHECK(good.b2 == 0.999);
    CHECK(good.eps == 1e-8);
}
