#include <doctest.h>

#include "quadprop/characteristic.hpp"
#include "quadprop/errors.hpp"

#include <array>
#include <cmath>

using namespace quadprop;

namespace {

// independent fixed-step classical RK4 for mu'' + 4 sigma(t) mu = 0
std::array<double, 2> rk4_mu(const HamiltonianSpec& spec, double t_end, double h) {
    double t = 0.0, mu = 0.0, mup = 1.0;
    auto acc = [&](double tt, double m) { return -4.0 * sigma_of_t(spec, 0, tt) * m; };
    const long n = std::lround(t_end / h);
    for (long i = 0; i < n; ++i) {
        const double k1m = mup, k1p = acc(t, mu);
        const double k2m = mup + 0.5 * h * k1p, k2p = acc(t + 0.5 * h, mu + 0.5 * h * k1m);
        const double k3m = mup + 0.5 * h * k2p, k3p = acc(t + 0.5 * h, mu + 0.5 * h * k2m);
        const double k4m = mup + h * k3p, k4p = acc(t + h, mu + h * k3m);
        mu += h / 6.0 * (k1m + 2 * k2m + 2 * k3m + k4m);
        mup += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        t += h;
    }
    return {mu, mup};
}

} // namespace

TEST_CASE("closed_form_mu branches") {
    auto [m1, mp1] = closed_form_mu(0.25, M_PI / 2.0);
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mp1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    auto [m2, mp2] = closed_form_mu(0.0, 3.2);
    CHECK(m2 == 3.2);
    CHECK(mp2 == 1.0);

    auto [m3, mp3] = closed_form_mu(-1.0, 1.0);
    CHECK(m3 == doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-14)); // 1.8134302039235095
    CHECK(mp3 == doctest::Approx(std::cosh(2.0)).epsilon(1e-14));      // 3.7621956910836314
}

TEST_CASE("closed-form detection and exact free/isotropic values") {
    auto iso = solve_characteristic(preset("isotropic"), 0, 2.0);
    CHECK(iso.method() == CharacteristicSolution::Method::ClosedForm);
    CHECK(iso.eval(1.0).mu == doctest::Approx(std::sin(1.0)).epsilon(1e-12));

    auto fr = solve_characteristic(preset("free"), 0, 10.0);
    for (std::size_t i = 0; i < fr.grid_times().size(); ++i)
        CHECK(fr.grid_point(i).mu == fr.grid_times()[i]);
}

TEST_CASE("numeric solve matches closed form for constant sigma") {
    CharacteristicOptions opt;
    opt.force_numeric = true;
    auto sol = solve_characteristic(preset("isotropic"), 0, 10.0, opt);
    CHECK(sol.method() == CharacteristicSolution::Method::Numeric);
    for (int i = 0; i <= 500; ++i) {
        const double t = 10.0 * i / 500.0;
        auto p = sol.eval(t);
        CHECK(std::abs(p.mu - std::sin(t)) < 1e-8);
        CHECK(std::abs(p.mu_prime - std::cos(t)) < 1e-8);
    }
}

TEST_CASE("Wronskian is a constant of motion on numeric solves") {
    HamiltonianSpec spec = preset("forced_parametric", [] {
        PresetParams p;
        p.omega_sq = CoefficientFn::sinusoid(1.0, 0.5, 2.0, M_PI / 2.0); // 1 + 0.5 cos(2t)
        p.force = CoefficientFn::constant(0.0);
        return p;
    }());
    auto sol = solve_characteristic(spec, 0, 5.0);
    CHECK(sol.method() == CharacteristicSolution::Method::Numeric);
    for (std::size_t i = 0; i < sol.grid_times().size(); ++i) {
        auto p = sol.grid_point(i);
        CHECK(std::abs(p.mu_prime * p.nu - p.mu * p.nu_prime - 1.0) < 1e-9);
    }
}

TEST_CASE("Mathieu-type coefficient against step-halved RK4 oracle") {
    HamiltonianSpec spec = preset("forced_parametric", [] {
        PresetParams p;
        p.omega_sq = CoefficientFn::sinusoid(1.0, 0.5, 2.0, M_PI / 2.0);
        p.force = CoefficientFn::constant(0.0);
        return p;
    }());
    auto sol = solve_characteristic(spec, 0, 5.0);
    auto coarse = rk4_mu(spec, 5.0, 1e-3);
    auto fine = rk4_mu(spec, 5.0, 5e-4);
    // the halved-step oracle is converged well below the comparison tolerance
    CHECK(std::abs(coarse[0] - fine[0]) < 1e-9);
    CHECK(std::abs(sol.eval(5.0).mu - fine[0]) < 1e-7);
    CHECK(std::abs(sol.eval(5.0).mu_prime - fine[1]) < 1e-7);
}

TEST_CASE("time reversal recovers the initial data") {
    HamiltonianSpec spec = preset("forced_parametric", [] {
        PresetParams p;
        p.omega_sq = CoefficientFn::sinusoid(1.0, 0.5, 2.0, M_PI / 2.0);
        p.force = CoefficientFn::constant(0.0);
        return p;
    }());
    auto sol = solve_characteristic(spec, 0, 5.0);
    auto end = sol.eval(5.0);
    auto rhs = [&](double t, const std::array<double, 4>& y) -> std::array<double, 4> {
        const double s4 = 4.0 * sigma_of_t(spec, 0, t);
        return {y[1], -s4 * y[0], y[3], -s4 * y[2]};
    };
    OdeOptions oo;
    oo.abs_tol = oo.rel_tol = 1e-11;
    std::array<double, 4> y_end = {end.mu, end.mu_prime, end.nu, end.nu_prime};
    auto back = integrate_ode(rhs, y_end, 5.0, 0.0, oo);
    CHECK(std::abs(back.y.back()[0] - 0.0) < 1e-7);
    CHECK(std::abs(back.y.back()[1] - 1.0) < 1e-7);
    CHECK(std::abs(back.y.back()[2] - 1.0) < 1e-7);
    CHECK(std::abs(back.y.back()[3] - 0.0) < 1e-7);
}

TEST_CASE("caustics") {
    auto iso = solve_characteristic(preset("isotropic"), 0, 8.0);
    auto zs = find_caustics(iso, 0.1, 7.0);
    REQUIRE(zs.size() == 2);
    CHECK(zs[0] == doctest::Approx(M_PI).epsilon(1e-10));
    CHECK(zs[1] == doctest::Approx(2.0 * M_PI).epsilon(1e-10));
    CHECK(iso.caustics_before(1.0) == 0);
    CHECK(iso.caustics_before(4.0) == 1);
    CHECK(iso.caustics_before(7.0) == 2);
    // caustics are simple: mu' stays away from zero there
    for (double z : zs) CHECK(std::abs(iso.eval(z).mu_prime) > 0.9);

    CHECK(find_caustics(solve_characteristic(preset("free"), 0, 10.0), 0.1, 10.0).empty());
    CHECK(find_caustics(solve_characteristic(preset("repulsive"), 0, 10.0), 0.1, 10.0).empty());
}

TEST_CASE("domain errors") {
    auto spec = preset("isotropic");
    CHECK_THROWS_AS(solve_characteristic(spec, 0, spec.t_max + 5.0), SpecError);
    CHECK_THROWS_AS(solve_characteristic(spec, 2, 1.0), SpecError);
}
