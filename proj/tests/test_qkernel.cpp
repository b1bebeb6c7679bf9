#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asep/qkernel.hpp"
#include "asep/rng.hpp"

using namespace asep;

TEST_CASE("qpochhammer finite") {
    CHECK(qpochhammer(0.7, 0.3, 0) == 1.0);
    CHECK(qpochhammer(0.5, 0.0, 3) == doctest::Approx(0.5));
    CHECK(qpochhammer(0.5, 0.5, 2) == doctest::Approx(0.375));
    CHECK(qpochhammer(Rat(1, 2), Rat(1, 2), 2) == Rat(3, 8));
}

TEST_CASE("qpochhammer recurrence holds exactly in rational mode") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const Rat z(static_cast<long>(rng.below(2000)) - 1000, 997);
        const Rat q(static_cast<long>(rng.below(999)), 1000);
        const long n = static_cast<long>(rng.below(12));
        CHECK(qpochhammer(z, q, n + 1) == qpochhammer(z, q, n) * (Rat(1) - z * ipow(q, n)));
    }
}

TEST_CASE("qpochhammer infinite certificate") {
    const auto r = qpochhammer_inf(0.5, 0.5, 1e-12);
    // (1/2; 1/2)_inf = 0.2887880950866...
    CHECK(r.value == doctest::Approx(0.288788095086602).epsilon(1e-10));
    CHECK(r.rel_err_bound < 1e-10);
    CHECK(qpochhammer_inf(0.3, 0.0, 1e-12).value == doctest::Approx(0.7));
}

TEST_CASE("entropy") {
    CHECK(entropy_h(0.0) == 0.0);
    CHECK(entropy_h(1.0) == 0.0);
    CHECK(entropy_h(0.5) == doctest::Approx(-std::log(2.0)));
    CHECK(entropy_h(1.5) == kInf);
    CHECK(entropy_h(-0.1) == kInf);
}

TEST_CASE("entropy convexity") {
    Rng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.uniform(), y = rng.uniform(), t = rng.uniform();
        const double lhs = entropy_h(t * x + (1 - t) * y);
        const double rhs = t * entropy_h(x) + (1 - t) * entropy_h(y);
        CHECK(lhs <= rhs + 1e-12);
    }
}

TEST_CASE("current constant") {
    CHECK(current_j(0, 0) == doctest::Approx(0.25));
    CHECK(current_j(2, 0.1) == doctest::Approx(2.0 / 9.0));
    CHECK(current_j(1, 1) == doctest::Approx(0.25));
    CHECK(current_j(0.3, 4) == doctest::Approx(4.0 / 25.0));
}

TEST_CASE("step weight branches") {
    CHECK(step_weight<double>(0, 1, 0, 0.7, -0.2, -0.3) == 0.0);
    CHECK(step_weight<double>(0, 1, 1, 0.5, 0.0, -0.4) == doctest::Approx(0.6));
    CHECK(step_weight<double>(3, 0, 1, 0.0, -0.5, -0.5) == doctest::Approx(1.0));
    // open TASEP degeneration at x = 0
    const double c = -0.25, d = -0.5;
    CHECK(step_weight<double>(0, 1, 0, 0.0, c, d) == 0.0);
    CHECK(step_weight<double>(0, 1, 1, 0.0, c, d) == doctest::Approx(1 + d));
    CHECK(step_weight<double>(0, 0, 0, 0.0, c, d) == doctest::Approx(1 + c));
    CHECK(step_weight<double>(0, 0, 1, 0.0, c, d) == doctest::Approx(1 - c * d));
    for (long x = 1; x <= 5; ++x)
        for (int u = 0; u <= 1; ++u)
            for (int v = 0; v <= 1; ++v) CHECK(step_weight<double>(x, u, v, 0.0, c, d) == doctest::Approx(1.0));
}

TEST_CASE("step weight range") {
    Rng rng(9);
    for (int i = 0; i < 2000; ++i) {
        const long x = static_cast<long>(rng.below(6));
        const int u = static_cast<int>(rng.below(2)), v = static_cast<int>(rng.below(2));
        const double q = 0.99 * rng.uniform(), c = -0.99 * rng.uniform(), d = -0.99 * rng.uniform();
        const double w = step_weight(x, u, v, q, c, d);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
        if (w == 0.0) {
            CHECK(x == 0);
            CHECK(u == 1);
            CHECK(v == 0);
        }
    }
}

TEST_CASE("float and rational backends agree") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const long zn = static_cast<long>(rng.below(1000));
        const long qn = static_cast<long>(rng.below(999));
        const Rat z(zn, 1000), q(qn, 1000);
        const long n = static_cast<long>(rng.below(20));
        const double exact = to_double(qpochhammer(z, q, n));
        const double fl = qpochhammer(to_double(z), to_double(q), n);
        CHECK(fl == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("numeric mode validation") {
    CHECK_THROWS_AS(NumericMode::log_float(1e-5), std::invalid_argument);
    CHECK_THROWS_AS(NumericMode::log_float(0.0), std::invalid_argument);
    CHECK(NumericMode::log_float(1e-9).tol == doctest::Approx(1e-9));
}

TEST_CASE("scaled vec") {
    ScaledVec v;
    v.w = {1e200, 1e180};
    v.renormalize();
    CHECK(v.w[0] == doctest::Approx(1.0));
    CHECK(v.log_sum() == doctest::Approx(std::log(1e200 + 1e180)).epsilon(1e-12));
}
