#include <catch2/catch_amalgamated.hpp>

#include "extremal/legendre.hpp"

using namespace extremal;

namespace {
double logistic(const Vec& x) { return std::log1p(std::exp(-std::abs(x[0]))) + std::max(x[0], 0.0); }
}  // namespace

TEST_CASE("quadratic is nearly self-dual") {
    Box box{{-3.0}, {3.0}};
    const int res = 257;
    ConvexFn g = legendre_transform([](const Vec& x) { return 0.5 * x[0] * x[0]; }, box, res);
    const double h = 6.0 / (res - 1);
    for (double s : {-2.5, -1.0, 0.0, 0.3, 1.7, 2.9})
        CHECK(g({s}) == Catch::Approx(0.5 * s * s).margin(h));
}

TEST_CASE("absolute value dualizes to the indicator of [-1, 1]") {
    Box box{{-3.0}, {3.0}};
    const int res = 301;
    ConvexFn g = legendre_transform([](const Vec& x) { return std::abs(x[0]); }, box, res);
    const double h = 6.0 / res;
    for (double s : {-0.9, -0.5, 0.0, 0.4, 0.95})
        CHECK(g({s}) == Catch::Approx(0.0).margin(h));
    CHECK(g({2.0}) > 2.5);  // outside [-1,1] the value grows with the box
}

TEST_CASE("logistic potential dualizes to the entropy") {
    Box box{{-30.0}, {30.0}};
    ConvexFn g = legendre_transform(logistic, box, 1201);
    const double expected = 0.5 * std::log(0.5) + 0.5 * std::log(0.5);  // -log 2
    CHECK(g({0.5}) == Catch::Approx(expected).margin(0.05));
}

TEST_CASE("transform is order-reversing on the grid") {
    Box box{{-2.0}, {2.0}};
    auto f = [](const Vec& x) { return x[0] * x[0]; };
    auto gle = [](const Vec& x) { return x[0] * x[0] + 0.3; };  // f <= g pointwise
    ConvexFn fs = legendre_transform(f, box, 101);
    ConvexFn gs = legendre_transform(gle, box, 101);
    for (int i = 0; i < 101; ++i) {
        const double s = -2.0 + 4.0 * i / 100.0;
        CHECK(fs({s}) >= gs({s}) - 1e-12);
    }
}

TEST_CASE("Fenchel-Young holds on sampled pairs") {
    Box box{{-2.0, -2.0}, {2.0, 2.0}};
    auto f = [](const Vec& x) { return 0.5 * (x[0] * x[0] + 2.0 * x[1] * x[1]) + 0.1 * x[0]; };
    ConvexFn fs = legendre_transform(f, box, 33);
    SplitMix64 rng(17);
    for (int it = 0; it < 500; ++it) {
        Vec x = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        Vec s = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        CHECK(f(x) + fs(s) >= dot(s, x) - 5e-2);  // interp slack at this resolution
    }
}

TEST_CASE("double transform never exceeds the original") {
    Box box{{-3.0}, {3.0}};
    for (auto f : {+[](const Vec& x) { return 0.5 * x[0] * x[0]; },
                   +[](const Vec& x) { return std::abs(x[0]) + 0.2 * x[0]; }}) {
        const int res = 129;
        ConvexFn g = legendre_transform(f, box, res);
        ConvexFn gg = legendre_transform(g, box, res);
        for (int i = 0; i < res; ++i) {
            const double x = -3.0 + 6.0 * i / (res - 1);
            CHECK(gg({x}) <= f({x}) + 1e-9);
        }
    }
}

TEST_CASE("involution residual shrinks with resolution") {
    Box box{{-3.0}, {3.0}};
    auto quad = [](const Vec& x) { return 0.5 * x[0] * x[0]; };
    double prev = kInf;
    for (int k = 6; k <= 10; ++k) {
        const double r = involution_residual(quad, box, 1 << k);
        CHECK(r < prev);
        CHECK(r < 5.0 * 6.0 / ((1 << k) - 1));  // < 5 grid spacings
        prev = r;
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("piecewise ramp involution converges") {
    // the box must cover the slope range {0, 2} as well as the segment [0,1]
    Box box{{-3.0}, {3.0}};
    auto ramp = [](const Vec& x) { return std::max(0.0, 2.0 * x[0] - 1.0); };
    double prev = kInf;
    for (int res : {33, 129, 513}) {
        const double r = involution_residual(ramp, box, res);
        CHECK(r <= prev + 1e-12);
        prev = r;
    }
    CHECK(prev < 2e-2);
}

TEST_CASE("affine input with on-grid slope has near-zero residual") {
    Box box{{-3.0}, {3.0}};
    // s-nodes at -3 + 6k/(res-1); res = 7 puts slope 2 exactly on the lattice
    auto aff = [](const Vec& x) { return 2.0 * x[0] + 1.0; };
    CHECK(involution_residual(aff, box, 7) < 1e-12);
    CHECK(involution_residual(aff, box, 13) < 1e-12);
}

TEST_CASE("coarse grids are rejected, not silently accepted") {
    Box box{{-1.0}, {1.0}};
    CHECK_THROWS_AS(legendre_transform([](const Vec&) { return 0.0; }, box, 1), Error);
}
