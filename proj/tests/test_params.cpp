#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asep/params.hpp"
#include "asep/rng.hpp"

using namespace asep;

TEST_CASE("phi special values") {
    CHECK(phi(0.5, 0.0, 0.0, Sign::Plus) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phi(0.5, 0.0, 0.0, Sign::Minus) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(phi(1.0, 1.0, 0.0, Sign::Plus) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    CHECK_THROWS_AS(phi(0.0, 1.0, 0.0, Sign::Plus), std::domain_error);
    CHECK_THROWS_AS(phi(1.0, -1.0, 0.0, Sign::Plus), std::domain_error);
    CHECK_THROWS_AS(phi(1.0, 1.0, 1.0, Sign::Plus), std::domain_error);
}

TEST_CASE("phi vieta identities") {
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const double x = 0.05 + 3.0 * rng.uniform();
        const double y = 3.0 * rng.uniform();
        const double q = 0.95 * rng.uniform();
        const double pp = phi(x, y, q, Sign::Plus), pm = phi(x, y, q, Sign::Minus);
        CHECK(pp * pm == doctest::Approx(-y / x).epsilon(1e-11));
        CHECK(pp + pm == doctest::Approx((1.0 - q - x + y) / x).epsilon(1e-11));
        CHECK(pp >= 0.0);
        CHECK(pm <= 1e-15);
        CHECK(pm > -1.0);
    }
}

TEST_CASE("to_fan known points") {
    const FanParams p1 = to_fan({1, 1, 0, 0, 0});
    CHECK(p1.a == doctest::Approx(0.0));
    CHECK(p1.b == doctest::Approx(0.0));
    CHECK(p1.c == 0.0);
    CHECK(p1.d == 0.0);

    const FanParams p2 = to_fan({0.5, 0.25, 0, 0, 0});
    CHECK(p2.a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p2.b == doctest::Approx(3.0).epsilon(1e-14));

    const FanParams p3 = to_fan({1, 1, 1, 1, 0});
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(p3.a == doctest::Approx(golden).epsilon(1e-14));
    CHECK(p3.b == doctest::Approx(golden).epsilon(1e-14));
    CHECK(p3.c == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    CHECK(p3.d == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
}

TEST_CASE("from_fan inverts to_fan") {
    const BoundaryRates r1 = from_fan(FanParams{0, 0, 0, 0, 0});
    CHECK(r1.alpha == doctest::Approx(1.0));
    CHECK(r1.beta == doctest::Approx(1.0));
    CHECK(r1.gamma == doctest::Approx(0.0));
    CHECK(r1.delta == doctest::Approx(0.0));

    const BoundaryRates r2 = from_fan(FanParams{1, 3, 0, 0, 0});
    CHECK(r2.alpha == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(r2.beta == doctest::Approx(0.25).epsilon(1e-14));

    // round trips both ways
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        FanParams p{3.0 * rng.uniform(), 3.0 * rng.uniform(), -0.95 * rng.uniform(), -0.95 * rng.uniform(),
                    0.9 * rng.uniform()};
        const FanParams back = to_fan(from_fan(p));
        CHECK(back.a == doctest::Approx(p.a).epsilon(1e-12));
        CHECK(back.b == doctest::Approx(p.b).epsilon(1e-12));
        CHECK(back.c == doctest::Approx(p.c).epsilon(1e-12));
        CHECK(back.d == doctest::Approx(p.d).epsilon(1e-12));

        BoundaryRates r{0.2 + 2.0 * rng.uniform(), 0.2 + 2.0 * rng.uniform(), 2.0 * rng.uniform(),
                        2.0 * rng.uniform(), 0.9 * rng.uniform()};
        const BoundaryRates back2 = from_fan(to_fan(r));
        CHECK(back2.alpha == doctest::Approx(r.alpha).epsilon(1e-11));
        CHECK(back2.beta == doctest::Approx(r.beta).epsilon(1e-11));
        CHECK(back2.gamma == doctest::Approx(r.gamma).epsilon(1e-11));
        CHECK(back2.delta == doctest::Approx(r.delta).epsilon(1e-11));
    }
}

TEST_CASE("from_fan is exact on rationals") {
    const RatFanParams p = rat_fan_params("1/2", "1/2", "-3/10", "-1/5", "2/5");
    const RatBoundaryRates r = from_fan(p);
    // alpha = (1-q)/((1+a)(1+c)) = (3/5)/((3/2)(7/10)) = 4/7
    CHECK(r.alpha == Rat("4/7"));
    CHECK(r.gamma == Rat("6/70"));
}

TEST_CASE("classify") {
    auto info = classify(FanParams{0.5, 0.5, 0, 0, 0});
    CHECK(info.phase == Phase::MaximalCurrent);
    CHECK(info.region == Region::Fan);

    info = classify(FanParams{2, 0.3, 0, 0, 0});
    CHECK(info.phase == Phase::LowDensity);
    CHECK(info.region == Region::Fan);

    info = classify(FanParams{2, 2, 0, 0, 0});
    CHECK(info.phase == Phase::PhaseBoundary);
    CHECK(info.region == Region::Shock);

    info = classify(FanParams{0.3, 2, 0, 0, 0});
    CHECK(info.phase == Phase::HighDensity);

    info = classify(FanParams{1, 1, 0, 0, 0});
    CHECK(info.phase == Phase::PhaseBoundary);
    CHECK(info.region == Region::RegionBoundary);
}

TEST_CASE("effective densities") {
    auto [l, r] = effective_densities(FanParams{0, 0, 0, 0, 0});
    CHECK(l == doctest::Approx(1.0));
    CHECK(r == doctest::Approx(0.0));
    std::tie(l, r) = effective_densities(FanParams{1, 1, 0, 0, 0});
    CHECK(l == doctest::Approx(0.5));
    CHECK(r == doctest::Approx(0.5));
    std::tie(l, r) = effective_densities(FanParams{3, 0.25, 0, 0, 0});
    CHECK(l == doctest::Approx(0.25));
    CHECK(r == doctest::Approx(0.2));
}

TEST_CASE("rational decimal parsing") {
    CHECK(rat_from_decimal("0.3") == Rat(3, 10));
    CHECK(rat_from_decimal("-0.4") == Rat(-2, 5));
    CHECK(rat_from_decimal("2") == Rat(2));
    CHECK(rat_from_decimal("1/3") == Rat(1, 3));
    CHECK(rat_from_decimal("1.5e-2") == Rat(3, 200));
    CHECK(rat_from_decimal("2e3") == Rat(2000));
}

TEST_CASE("validation errors") {
    const FanParams bad_a{-1, 0, 0, 0, 0};
    CHECK_THROWS_AS(bad_a.validate(), std::domain_error);
    const FanParams bad_c{0, 0, -1, 0, 0};
    CHECK_THROWS_AS(bad_c.validate(), std::domain_error);
    const FanParams shock{2, 2, 0, 0, 0};
    CHECK_THROWS_AS(shock.require_fan(), std::domain_error);
    const BoundaryRates bad_alpha{0, 1, 0, 0, 0};
    CHECK_THROWS_AS(bad_alpha.validate(), std::domain_error);
}
