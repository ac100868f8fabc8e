#include <doctest.h>

#include "quadprop/errors.hpp"
#include "quadprop/mehler.hpp"

#include <cmath>
#include <memory>

using namespace quadprop;

namespace {

std::shared_ptr<const CharacteristicSolution> solved(const HamiltonianSpec& spec, double t_max) {
    return std::make_shared<CharacteristicSolution>(solve_characteristic(spec, 0, t_max));
}

HamiltonianSpec full_custom() {
    // all four coefficient channels active (g != 0 exercises delta/epsilon/kappa fully)
    HamiltonianSpec s;
    s.dimension = 1;
    s.axes.push_back({CoefficientFn::constant(0.3), CoefficientFn::constant(0.1),
                      CoefficientFn::constant(0.2), CoefficientFn::constant(0.4)});
    s.t_max = 16.0;
    return s;
}

} // namespace

TEST_CASE("isotropic phases at t = pi/4") {
    auto spec = preset("isotropic");
    auto sol = solved(spec, 2.0);
    PhaseCalculator calc(spec, 0, sol);
    auto p = calc.at(M_PI / 4.0);
    CHECK(p.alpha == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(p.beta == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(p.gamma == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p.delta == 0.0);
    CHECK(p.epsilon == 0.0);
    CHECK(p.kappa == 0.0);
}

TEST_CASE("free particle phases reproduce exp(i (x-y)^2 / 2t)") {
    auto spec = preset("free");
    auto sol = solved(spec, 4.0);
    PhaseCalculator calc(spec, 0, sol);
    auto p = calc.at(2.0);
    CHECK(p.alpha == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(p.beta == doctest::Approx(-0.5).epsilon(1e-13));
    CHECK(p.gamma == doctest::Approx(0.25).epsilon(1e-11));
    CHECK(p.kappa == 0.0);
}

TEST_CASE("constant field: linear and constant phase terms") {
    PresetParams pp;
    pp.E = 1.0;
    auto spec = preset("constant_field", pp);
    auto sol = solved(spec, 4.0);
    PhaseCalculator calc(spec, 0, sol);
    for (double t : {0.5, 1.0, 2.5}) {
        auto p = calc.at(t);
        CHECK(p.delta == doctest::Approx(pp.E * t / 2.0).epsilon(1e-10));
        CHECK(p.epsilon == doctest::Approx(pp.E * t / 2.0).epsilon(1e-10));
        CHECK(p.kappa == doctest::Approx(-pp.E * pp.E * t * t * t / 24.0).epsilon(1e-9));
    }
}

TEST_CASE("riccati oracle agrees with the integral formulas") {
    SUBCASE("isotropic") {
        auto spec = preset("isotropic");
        auto sol = solved(spec, 2.0);
        PhaseCalculator calc(spec, 0, sol);
        auto a = calc.at(1.0);
        auto b = riccati_oracle(spec, 0, 1e-3, 1.0);
        CHECK(std::abs(a.alpha - b.alpha) < 1e-6);
        CHECK(std::abs(a.beta - b.beta) < 1e-6);
        CHECK(std::abs(a.gamma - b.gamma) < 1e-6);
        CHECK(std::abs(a.delta - b.delta) < 1e-6);
        CHECK(std::abs(a.epsilon - b.epsilon) < 1e-6);
        CHECK(std::abs(a.kappa - b.kappa) < 1e-6);
    }
    SUBCASE("free") {
        auto b = riccati_oracle(preset("free"), 0, 1e-3, 2.0);
        CHECK(std::abs(b.alpha - 0.25) < 1e-8);
    }
    SUBCASE("damped with the alpha identity") {
        PresetParams pp;
        pp.lambda = 0.6;
        auto spec = preset("damped", pp);
        auto sol = solved(spec, 2.0);
        PhaseCalculator calc(spec, 0, sol);
        auto a = calc.at(0.9);
        auto b = riccati_oracle(spec, 0, 1e-3, 0.9);
        CHECK(std::abs(a.alpha - b.alpha) < 1e-6);
        CHECK(std::abs(a.gamma - b.gamma) < 1e-6);
        const double c = spec.axes[0].c.value(0.9);
        const auto cp = sol->eval(0.9);
        CHECK(std::abs(a.alpha + c / 2.0 - cp.mu_prime / (2.0 * cp.mu)) < 1e-8);
    }
    SUBCASE("all channels active") {
        auto spec = full_custom();
        auto sol = solved(spec, 2.0);
        PhaseCalculator calc(spec, 0, sol);
        auto a = calc.at(1.2);
        auto b = riccati_oracle(spec, 0, 1e-3, 1.2);
        CHECK(std::abs(a.alpha - b.alpha) < 1e-6);
        CHECK(std::abs(a.beta - b.beta) < 1e-6);
        CHECK(std::abs(a.gamma - b.gamma) < 1e-6);
        CHECK(std::abs(a.delta - b.delta) < 1e-6);
        CHECK(std::abs(a.epsilon - b.epsilon) < 1e-6);
        CHECK(std::abs(a.kappa - b.kappa) < 1e-6);
    }
}

TEST_CASE("riccati oracle rejects bad windows") {
    CHECK_THROWS_AS(riccati_oracle(preset("free"), 0, 0.5, 1.0), SpecError);
    // caustic of the isotropic row at pi lies inside [t0, 4]
    CHECK_THROWS_AS(riccati_oracle(preset("isotropic"), 0, 1e-3, 4.0), NumericError);
}

TEST_CASE("finite-difference residuals of the coefficient ODE system") {
    auto run = [](const HamiltonianSpec& spec, double lo, double hi, double dt) {
        auto sol = solved(spec, hi + 0.5);
        PhaseCalculator calc(spec, 0, sol);
        std::vector<MehlerPhase> traj;
        for (double t = lo; t <= hi + dt / 2.0; t += dt) traj.push_back(calc.at(t));
        return residual_check(spec, 0, traj);
    };
    CHECK(run(preset("isotropic"), 0.1, 1.0, 1e-3) < 1e-5);
    // the free-particle quotient coefficients are rational in t, so the stencil
    // error floor applies to them as well; the linear-channel equations vanish
    CHECK(run(preset("free"), 0.1, 1.0, 1e-3) < 1e-5);
    PresetParams pp;
    pp.omega = 2.0;
    CHECK(run(preset("anisotropic", pp), 0.1, 1.0, 1e-3) < 1e-5);
}

TEST_CASE("anisotropic crosses the turning point: continuation matches closed form") {
    PresetParams pp;
    pp.omega = 2.0;
    auto spec = preset("anisotropic", pp);
    auto sol = solved(spec, 1.5);
    PhaseCalculator calc(spec, 0, sol);
    // past t = pi/4 the quotient formulas are singular; gamma stays cot-like
    for (double t : {0.9, 1.1, 1.3}) {
        auto p = calc.at(t);
        const double w = 2.0;
        CHECK(p.gamma == doctest::Approx(w * std::cos(w * t) / (2.0 * std::sin(w * t))).epsilon(1e-9));
        CHECK(p.alpha == doctest::Approx(w * std::cos(w * t) / (2.0 * std::sin(w * t))).epsilon(1e-11));
    }
}

TEST_CASE("post-caustic evaluation via the companion identity") {
    auto spec = preset("isotropic");
    auto sol = solved(spec, 6.0);
    PhaseCalculator calc(spec, 0, sol);
    auto p = calc.at(4.0); // past the caustic at pi
    CHECK(p.gamma == doctest::Approx(std::cos(4.0) / (2.0 * std::sin(4.0))).epsilon(1e-10));
    CHECK(p.caustics_before == 1);
    CHECK_THROWS_AS(calc.at(M_PI), CausticError);
}

TEST_CASE("all three evaluation routes coincide before the turning point") {
    auto spec = full_custom();
    auto sol = solved(spec, 2.0);
    PhaseCalculator calc(spec, 0, sol);
    for (double t : {0.3, 0.8, 1.4}) {
        auto a = calc.at(t);
        auto b = calc.companion_form_at(t);
        CHECK(std::abs(a.gamma - b.gamma) < 1e-10);
        CHECK(std::abs(a.delta - b.delta) < 1e-10);
        CHECK(std::abs(a.epsilon - b.epsilon) < 1e-10);
        CHECK(std::abs(a.kappa - b.kappa) < 1e-10);
    }
}

TEST_CASE("small-time limits") {
    auto spec = full_custom();
    auto sol = solved(spec, 1.0);
    PhaseCalculator calc(spec, 0, sol);
    const double g0 = spec.axes[0].g.value(0.0);
    const double c0 = spec.axes[0].c.value(0.0);
    double prev_err = 1e9;
    for (double t : {1e-3, 1e-4}) {
        auto p = calc.at(t);
        const double err = std::abs(p.delta - g0);
        CHECK(err < 5.0 * t);
        CHECK(err < prev_err);
        prev_err = err;
        CHECK(std::abs(p.epsilon + g0) < 5.0 * t);
        CHECK(std::abs(p.kappa) < 5.0 * t);
        // t beta -> -1, 2 t alpha -> 1 - t c
        CHECK(t * p.beta == doctest::Approx(-1.0).epsilon(1e-5));
        CHECK(2.0 * t * p.alpha == doctest::Approx(1.0 - t * c0).epsilon(1e-5));
    }
}
