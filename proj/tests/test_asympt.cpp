#include <catch2/catch_amalgamated.hpp>

#include <gapcount/asympt.hpp>
#include <gapcount/potential.hpp>
#include <gapcount/region.hpp>

#include <cmath>
#include <vector>

using namespace gapcount;

TEST_CASE("kappa solves t log t = s") {
    REQUIRE(kappa(0.0) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(kappa(std::exp(1.0)) == Catch::Approx(std::exp(1.0)).margin(1e-10));
    double prev = kappa(0.05);
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        double t = kappa(s);
        REQUIRE(std::abs(t * std::log(t) - s) < 1e-10);
        REQUIRE(t > prev);
        prev = t;
    }
    REQUIRE_THROWS_AS(kappa(-0.1), ConfigError);
}

TEST_CASE("segment heights of simple regions") {
    REQUIRE(c_minus(make_rect(1.0, 3.0, 2.0, 7.0)) == Catch::Approx(5.0).margin(1e-12));
    REQUIRE(c_minus(make_disc(0.0, 0.0, 2.0)) == Catch::Approx(4.0).margin(1e-12));
    REQUIRE(c_minus_clipped(make_disc(0.0, 0.0, 2.0), 1.0) ==
            Catch::Approx(2.0 * std::sqrt(3.0)).margin(1e-12));
    Region tri = make_polygon({{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}});
    REQUIRE(c_minus(tri) > 3.99);
    REQUIRE(c_minus(tri) < 4.0 + 1e-9);
    REQUIRE_THROWS_AS(make_polygon({{0.0, 0.0}, {2.0, 2.0}, {2.0, 0.0}, {0.0, 2.0}}), ConfigError);
}

TEST_CASE("disc segment areas agree with the closed form") {
    double r = 2.0;
    REQUIRE(disc_segment_area(r, 0.0) == Catch::Approx(M_PI * r * r / 2.0).margin(1e-12));
    double d = 1.0;
    double expect = r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
    REQUIRE(disc_segment_area(r, d) == Catch::Approx(expect).margin(1e-12));
    REQUIRE(disc_segment_area(r, d) + disc_segment_area(r, -d) ==
            Catch::Approx(M_PI * r * r).margin(1e-12));
}

TEST_CASE("weighted reach is translation covariant and disc bounded") {
    Region d1 = make_disc(5.0, 1.0, 2.0);
    Region d2 = make_disc(9.0, 1.0, 2.0);
    double c1 = c_plus(d1, 0.0);
    double c2 = c_plus(d2, 4.0);
    REQUIRE(c1 > 0.5);
    REQUIRE(std::abs(c1 - c2) < 1e-8);
    // The centered enclosing disc is one admissible choice, hence an upper bound.
    double bound = 2.0 * kappa(5.0 / (2.0 * std::exp(1.0)));
    REQUIRE(c1 <= bound + 1e-9);
    REQUIRE(c_plus(make_disc(-3.0, 0.0, 1.0), 0.0) == 0.0);
}

TEST_CASE("corridor constants order for an offset box") {
    Region box = make_rect(1.5, 3.5, 0.0, 10.0);
    CorridorConstants cc = corridor_constants(box, box, 1.0, 0.5);
    REQUIRE(cc.C_minus == Catch::Approx(10.0 / (2.0 * M_PI)).margin(1e-9));
    REQUIRE(cc.C_plus > cc.C_minus);
    REQUIRE_FALSE(cc.lower_degenerate);
}

TEST_CASE("phase space volumes match closed forms") {
    PowerLawV P(2.0, 0.0, 0.0);
    double l = 1e-3;
    REQUIRE(volume_N(l, P, -50.0) == Catch::Approx((1.0 / l - 1.0) / 2.0).epsilon(1e-9));
    REQUIRE(volume_N(l, P, 0.0) == Catch::Approx((1.0 / l - 1.0) / 4.0).epsilon(1e-9));

    GaussV G(0.5, 1.0, 0.0, 2.0);
    double lg = 0.01;
    REQUIRE(volume_N(lg, G, 1.0) == Catch::Approx(2.0 * std::log(0.5 / lg)).epsilon(1e-9));
    REQUIRE(volume_N(0.6, G, -20.0) == 0.0);

    IndicatorV I(0.3, make_rect(1.0, 3.0, -2.0, 5.0));
    REQUIRE(volume_N(0.1, I, -10.0) == Catch::Approx(14.0 / (2.0 * M_PI)).epsilon(1e-12));
    REQUIRE(volume_N(0.1, I, 2.0) == Catch::Approx(7.0 / (2.0 * M_PI)).epsilon(1e-12));
    REQUIRE(volume_N(0.4, I, -10.0) == 0.0);
}

TEST_CASE("grid volume extrapolation reproduces the analytic value") {
    GaussV G(0.5, 1.0, 0.0, 2.0);
    double l = 0.01;
    double exact = volume_N(l, G, 1.0);
    double g1 = volume_N_grid(l, G, 1.0, 1024);
    double g2 = volume_N_grid(l, G, 1.0, 2048);
    double rich = (4.0 * g2 - g1) / 3.0;
    REQUIRE(std::abs(rich - exact) < 0.01 * exact);
}

TEST_CASE("power law volumes scale homogeneously") {
    PowerLawV P(2.0, 0.0, 0.0);
    double eps = 0.05;
    double d = homogeneity_defect(P, 1e-3, -50.0, eps);
    REQUIRE(d == Catch::Approx(eps / (1.0 - eps * eps)).epsilon(1e-4));
    REQUIRE(homogeneity_defect(P, 1e-3, -50.0, -eps) == Catch::Approx(-d).margin(1e-10));
}

TEST_CASE("square root log fit recovers a synthetic coefficient") {
    std::vector<double> lambdas;
    std::vector<int> lower, upper;
    for (int i = 0; i < 16; ++i) {
        double l = 1e-8 * std::pow(1e6, double(i) / 15);
        lambdas.push_back(l);
        int c = static_cast<int>(std::lround(3.0 * std::sqrt(std::abs(std::log(l)))));
        lower.push_back(c);
        upper.push_back(c);
    }
    SqrtLogFit f = fit_sqrt_log(lambdas, lower, upper);
    REQUIRE(f.points_used == 6);
    REQUIRE_FALSE(f.flagged);
    REQUIRE(f.coefficient == Catch::Approx(3.0).epsilon(0.05));

    std::vector<int> zeros(lambdas.size(), 0);
    SqrtLogFit z = fit_sqrt_log(lambdas, zeros, zeros);
    REQUIRE(z.flagged);
    REQUIRE(z.coefficient == 0.0);
}

TEST_CASE("volume ratio trend detects convergence") {
    std::vector<double> lambdas = {1e-4, 1e-3, 1e-2, 1e-1};
    std::vector<double> volumes = {1e4, 1e3, 1e2, 1e1};
    double Bp = 0.2;
    std::vector<double> good(4), bad(4);
    std::vector<double> r_good = {1.02, 1.05, 1.2, 1.9};
    std::vector<double> r_bad = {1.4, 1.05, 1.2, 1.9};
    for (int i = 0; i < 4; ++i) {
        good[i] = r_good[i] * Bp * volumes[i];
        bad[i] = r_bad[i] * Bp * volumes[i];
    }
    VolumeRatioFit fg = fit_volume_ratio(lambdas, good, volumes, Bp);
    REQUIRE(fg.trend_ok);
    REQUIRE(fg.terminal == Catch::Approx(1.02).epsilon(1e-12));
    VolumeRatioFit fb = fit_volume_ratio(lambdas, bad, volumes, Bp);
    REQUIRE_FALSE(fb.trend_ok);
    std::vector<double> degenerate = {1.0, 0.0, 1.0, 1.0};
    REQUIRE_THROWS_AS(fit_volume_ratio(lambdas, good, degenerate, Bp), NumericsError);
}
