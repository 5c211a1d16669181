#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "gapcount/field.hpp"

using namespace gapcount;

TEST_CASE("bump01 saturates exactly and is monotone") {
    CHECK(bump01(-1.0) == 0.0);
    CHECK(bump01(0.0) == 0.0);
    CHECK(bump01(1.0) == 1.0);
    CHECK(bump01(2.0) == 1.0);
    CHECK(bump01(0.5) == Catch::Approx(0.5).margin(1e-15));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        double v = bump01(i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("smooth-step field saturates outside the transition window") {
    SmoothStepField f(0.5, 1.0, 0.0, 0.05);
    CHECK(f.B(-0.5) == 0.5);
    CHECK(f.B(-10.0) == 0.5);
    CHECK(f.B(0.5) == 1.0);
    CHECK(f.B(10.0) == 1.0);
    CHECK(f.B(0.0) == Catch::Approx(0.75).margin(1e-12));
    CHECK(f.x_plus() == 0.5);
    CHECK(f.B_minus() == 0.5);
    CHECK(f.B_plus() == 1.0);
}

TEST_CASE("primitive b is monotone with correct slopes and b(0) = 0") {
    auto f = std::make_shared<SmoothStepField>(0.5, 1.0, 0.0, 0.05);
    PotentialB pot(f);
    CHECK(pot.b(0.0) == Catch::Approx(0.0).margin(1e-14));
    double prev = pot.b(-20.0);
    for (double x = -19.5; x <= 20.0; x += 0.5) {
        double v = pot.b(x);
        CHECK(v > prev);
        prev = v;
    }
    // Far left and right the slope equals the saturated field strength.
    CHECK(pot.b(-12.0) - pot.b(-13.0) == Catch::Approx(0.5).margin(1e-10));
    CHECK(pot.b(13.0) - pot.b(12.0) == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("binv round-trips through b") {
    auto f = std::make_shared<SmoothStepField>(0.32, 0.4, -3.2, 0.03);
    PotentialB pot(f);
    for (double k : {-4.0, -1.3, -0.2, 0.0, 0.17, 2.5, 9.0}) {
        double x = pot.binv(k);
        CHECK(pot.b(x) == Catch::Approx(k).margin(1e-10));
    }
    for (double x : {-7.0, -3.2, 0.0, 1.0, 6.5}) {
        CHECK(pot.binv(pot.b(x)) == Catch::Approx(x).margin(1e-9));
    }
}

TEST_CASE("constant field has linear b and no saturation point") {
    auto f = std::make_shared<ConstantField>(2.0);
    PotentialB pot(f);
    CHECK(pot.b(3.0) == Catch::Approx(6.0));
    CHECK(pot.binv(6.0) == Catch::Approx(3.0));
    CHECK(pot.x_plus() == -std::numeric_limits<double>::infinity());
}

TEST_CASE("step field clamps and reports its jump point") {
    auto f = std::make_shared<StepField>(0.5, 1.0, 1.0);
    PotentialB pot(f);
    CHECK(f->x_plus() == 1.0);
    // b is piecewise linear: slope 0.5 left of 1, slope 1 right of 1.
    CHECK(pot.b(-2.0) == Catch::Approx(-1.0).margin(1e-9));
    CHECK(pot.b(3.0) == Catch::Approx(0.5 + 2.0).margin(1e-9));
}

TEST_CASE("sampled field interpolates and finds the saturation point") {
    SampledField f({0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 1.0, 1.0});
    CHECK(f.B(1.5) == Catch::Approx(0.75));
    CHECK(f.B_minus() == 0.5);
    CHECK(f.B_plus() == 1.0);
    CHECK(f.x_plus() == Catch::Approx(2.0).margin(1e-9));

    SampledField rising({0.0, 1.0}, {0.5, 1.0});
    CHECK(rising.x_plus() == Catch::Approx(1.0).margin(1e-9));

    SampledField flat({0.0, 1.0}, {0.7, 0.7});
    CHECK(flat.x_plus() == -std::numeric_limits<double>::infinity());

    SampledField sagging({0.0, 1.0, 2.0}, {0.5, 1.0, 0.8});
    CHECK(sagging.x_plus() == std::numeric_limits<double>::infinity());
}

TEST_CASE("field constructors reject broken parameters") {
    CHECK_THROWS_AS(ConstantField(0.0), ConfigError);
    CHECK_THROWS_AS(SmoothStepField(1.0, 0.5, 0.0, 0.05), ConfigError);
    CHECK_THROWS_AS(SmoothStepField(0.5, 1.0, 0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(SampledField({0.0}, {1.0}), ConfigError);
    CHECK_THROWS_AS(SampledField({0.0, 0.0}, {1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(SampledField({0.0, 1.0}, {0.0, 1.0}), ConfigError);
}
