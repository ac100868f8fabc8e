#include <doctest.h>

#include "quadprop/coefficients.hpp"
#include "quadprop/errors.hpp"

#include <cmath>
#include <random>

using namespace quadprop;

TEST_CASE("coefficient values and derivatives") {
    auto c = CoefficientFn::constant(2.5);
    CHECK(c.value(0.3) == 2.5);
    CHECK(c.derivative(1.0) == 0.0);
    CHECK(c.is_constant());

    auto p = CoefficientFn::polynomial({1.0, -2.0, 0.5});
    CHECK(p.value(2.0) == doctest::Approx(1.0 - 4.0 + 2.0).epsilon(1e-14));
    CHECK(p.derivative(2.0) == doctest::Approx(-2.0 + 2.0 * 0.5 * 2.0).epsilon(1e-14));
    CHECK_FALSE(p.is_constant());

    auto s = CoefficientFn::sinusoid(1.0, 0.5, 2.0, M_PI / 2.0); // 1 + 0.5 cos(2t)
    CHECK(s.value(0.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(s.value(M_PI / 2.0) == doctest::Approx(0.5).epsilon(1e-12));

    auto pw = CoefficientFn::piecewise({1.0, 2.0}, {3.0, 4.0, 5.0});
    CHECK(pw.value(0.5) == 3.0);
    CHECK(pw.value(1.5) == 4.0);
    CHECK(pw.value(2.5) == 5.0);
    CHECK(pw.derivative(0.5) == 0.0);
}

TEST_CASE("derivative matches central finite differences at 50 random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ts(0.05, 9.5);
    auto check_fd = [&](const CoefficientFn& f) {
        const double h = 1e-5;
        for (int i = 0; i < 50; ++i) {
            const double t = ts(rng);
            const double fd = (f.value(t + h) - f.value(t - h)) / (2.0 * h);
            const double an = f.derivative(t);
            CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
        }
    };
    check_fd(CoefficientFn::constant(1.7));
    check_fd(CoefficientFn::polynomial({0.2, -1.3, 0.7, 0.05}));
    check_fd(CoefficientFn::sinusoid(0.4, 1.2, 3.0, 0.3));
}

TEST_CASE("exact integrals") {
    auto p = CoefficientFn::polynomial({0.0, 1.0}); // t
    CHECK(p.integral(0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    auto s = CoefficientFn::sinusoid(0.0, 1.0, 1.0, 0.0); // sin t
    CHECK(s.integral(0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-12));
    auto pw = CoefficientFn::piecewise({1.0}, {2.0, 3.0});
    CHECK(pw.integral(0.0, 2.0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(pw.integral(2.0, 0.0) == doctest::Approx(-5.0).epsilon(1e-14));
}

TEST_CASE("piecewise shape errors") {
    CHECK_THROWS_AS(CoefficientFn::piecewise({1.0}, {2.0}), SpecError);
}
