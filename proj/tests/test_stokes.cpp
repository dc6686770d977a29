#include <doctest.h>

#include <cmath>
#include <random>

#include "polarkit/error.hpp"
#include "polarkit/stokes.hpp"

using namespace polarkit;

namespace {

// Valid Stokes vector with dop <= 1, drawn via polar parameterization so the
// physical invariant holds by construction.
StokesVector random_valid(std::mt19937& rng) {
    std::uniform_real_distribution<double> s0_dist(1e-3, 1e4);
    std::uniform_real_distribution<double> dop_dist(0.0, 1.0);
    std::uniform_real_distribution<double> aop_dist(-kPi / 2, kPi / 2);
    const double s0 = s0_dist(rng);
    const double d = dop_dist(rng);
    const double a = aop_dist(rng);
    return {s0, s0 * d * std::cos(2 * a), s0 * d * std::sin(2 * a)};
}

} // namespace

TEST_CASE("intensity_at matches the forward model") {
    CHECK(intensity_at({200, 0, 0}, 0.0) == doctest::Approx(100).epsilon(1e-12));
    CHECK(intensity_at({200, 200, 0}, kPi / 2) == doctest::Approx(0).epsilon(1e-12));
    CHECK(intensity_at({2, 0.6, 0.8}, kPi / 4) == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("forward_quad substitution examples") {
    const IntensityQuad q1 = forward_quad({200, 200, 0});
    CHECK(q1.i0 == 200);
    CHECK(q1.i45 == 100);
    CHECK(q1.i90 == 0);
    CHECK(q1.i135 == 100);

    const IntensityQuad q2 = forward_quad({200, 0, 0});
    CHECK(q2.i0 == 100);
    CHECK(q2.i45 == 100);
    CHECK(q2.i90 == 100);
    CHECK(q2.i135 == 100);
}

TEST_CASE("forward_quad satisfies i0+i90 == i45+i135") {
    std::mt19937 rng(20260817);
    for (int i = 0; i < 1000; ++i) {
        const StokesVector s = random_valid(rng);
        const IntensityQuad q = forward_quad(s);
        CHECK(q.i0 + q.i90 == doctest::Approx(q.i45 + q.i135).epsilon(1e-12));
        CHECK(q.i0 + q.i90 == doctest::Approx(s.s0).epsilon(1e-12));
    }
}

TEST_CASE("stokes_from_quad inverts the worked examples") {
    const StokesVector s1 = stokes_from_quad({100, 100, 100, 100});
    CHECK(s1.s0 == 200);
    CHECK(s1.s1 == 0);
    CHECK(s1.s2 == 0);

    const StokesVector s2 = stokes_from_quad({200, 100, 0, 100});
    CHECK(s2.s0 == 200);
    CHECK(s2.s1 == 200);
    CHECK(s2.s2 == 0);
}

TEST_CASE("round trip is exact to 1e-12 relative") {
    std::mt19937 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const StokesVector s = random_valid(rng);
        const StokesVector r = stokes_from_quad(forward_quad(s));
        CHECK(std::abs(r.s0 - s.s0) <= 1e-12 * s.s0);
        CHECK(std::abs(r.s1 - s.s1) <= 1e-12 * s.s0);
        CHECK(std::abs(r.s2 - s.s2) <= 1e-12 * s.s0);
    }
}

TEST_CASE("aop examples and branch convention") {
    CHECK(aop({1, 1, 0}).radians == 0);
    CHECK(aop({1, 0, 1}).radians == doctest::Approx(kPi / 4).epsilon(1e-15));
    // Boundary: fully vertical light sits at +pi/2, not -pi/2.
    CHECK(aop({1, -1, 0}).radians == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK_FALSE(aop({1, 1, 0}).degenerate);
}

TEST_CASE("aop degenerate flag on unpolarized input") {
    const Aop a = aop({5, 0, 0});
    CHECK(a.radians == 0);
    CHECK(a.degenerate);
}

TEST_CASE("aop range stays inside (-pi/2, pi/2]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        const Aop a = aop({10, dist(rng), dist(rng)});
        CHECK(a.radians > -kPi / 2 - 1e-15);
        CHECK(a.radians <= kPi / 2 + 1e-15);
    }
}

TEST_CASE("dop worked examples") {
    CHECK(dop({1, 0, 0}).ratio == 0);
    CHECK(dop({200, 200, 0}).ratio == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dop({2, 0.6, 0.8}).ratio == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("dop error and clamp bands") {
    CHECK_THROWS_AS(dop({0, 0, 0}), ZeroIntensityError);
    CHECK_THROWS_AS(dop({-1, 0, 0}), NonPhysicalError);
    // Inside the clamp band (1, 1+1e-6]: snapped to 1.
    CHECK(dop({1.0, 1.0 + 5e-7, 0}).ratio == 1.0);
    // Beyond the band: corruption, not rounding noise.
    CHECK_THROWS_AS(dop({1.0, 1.1, 0}), NonPhysicalError);
}

TEST_CASE("dop and aop are scale invariant") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> k_dist(1e-3, 1e3);
    for (int i = 0; i < 300; ++i) {
        const StokesVector s = random_valid(rng);
        if (s.s1 == 0 && s.s2 == 0) {
            continue;
        }
        const double k = k_dist(rng);
        const StokesVector ks{k * s.s0, k * s.s1, k * s.s2};
        CHECK(dop(ks).ratio == doctest::Approx(dop(s).ratio).epsilon(1e-12));
        CHECK(aop(ks).radians == doctest::Approx(aop(s).radians).epsilon(1e-12));
    }
}

TEST_CASE("rotate_frame keeps dop and shifts aop by theta mod pi") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> theta_dist(-4 * kPi, 4 * kPi);
    for (int i = 0; i < 300; ++i) {
        const StokesVector s = random_valid(rng);
        const double d0 = dop(s).ratio;
        if (d0 < 1e-6) {
            continue;
        }
        const double theta = theta_dist(rng);
        const StokesVector r = rotate_frame(s, theta);
        CHECK(dop(r).ratio == doctest::Approx(d0).epsilon(1e-11));
        const double expected = wrap_aop(aop(s).radians - theta);
        double diff = std::abs(wrap_aop(aop(r).radians - expected));
        diff = std::min(diff, kPi - diff); // seam at +-pi/2 is the same state
        CHECK(diff <= 1e-9);
    }
}

TEST_CASE("rotate_frame agrees with evaluating intensities at shifted angles") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> theta_dist(-kPi, kPi);
    std::uniform_real_distribution<double> alpha_dist(-kPi, kPi);
    for (int i = 0; i < 300; ++i) {
        const StokesVector s = random_valid(rng);
        const double theta = theta_dist(rng);
        const double alpha = alpha_dist(rng);
        CHECK(intensity_at(s, alpha + theta) ==
              doctest::Approx(intensity_at(rotate_frame(s, theta), alpha)).epsilon(1e-10));
    }
}

TEST_CASE("wrap_aop folds the open boundary to +pi/2") {
    CHECK(wrap_aop(-kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(wrap_aop(kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(wrap_aop(kPi) == doctest::Approx(0).epsilon(1e-15));
    CHECK(wrap_aop(0.3 + 5 * kPi) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("is_physical accepts the dop<=1 cone only") {
    CHECK(StokesVector{1, 0.6, 0.8}.is_physical());
    CHECK_FALSE(StokesVector{1, 1.2, 0}.is_physical());
    CHECK_FALSE(StokesVector{-1, 0, 0}.is_physical());
}
