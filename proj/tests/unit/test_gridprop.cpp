#include <doctest.h>

#include "quadprop/errors.hpp"
#include "quadprop/gridprop.hpp"

#include <cmath>
#include <random>

using namespace quadprop;

namespace {

GridState gauss_state(const Grid& g, double center, double width = 1.0, double momentum = 0.0) {
    return make_state(g, gaussian_profile(g.axes[0], center, width, momentum));
}

} // namespace

TEST_CASE("free-particle spreading via direct quadrature") {
    auto grid = make_grid(512, 0.0, 40.0 / 512.0);
    auto phi = gauss_state(grid, 0.0);
    Propagator prop(preset("free"), 2.0);
    auto out = prop.propagate(phi, 1.0, Method::Direct);
    // position variance of |psi|^2 grows to (1 + t^2)/2
    CHECK(position_variance(out)[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(l2_norm(out) - 1.0) < 1e-9);
}

TEST_CASE("coherent state crosses the origin at a quarter period") {
    auto grid = make_grid(512, 0.0, 20.0 / 512.0);
    auto phi = gauss_state(grid, 2.0);
    Propagator prop(preset("isotropic"), 2.0);
    auto out = prop.propagate(phi, M_PI / 2.0, Method::Direct);
    CHECK(std::abs(centroid(out)[0]) < 1e-4);
}

TEST_CASE("near-identity propagation returns the input") {
    auto grid = make_grid(256, 0.0, 16.0 / 256.0);
    auto phi = gauss_state(grid, 0.3);
    for (const char* name : {"free", "isotropic", "damped"}) {
        Propagator prop(preset(name), 1.0);
        auto out = prop.propagate(phi, 1e-4, Method::Direct);
        CHECK(l2_distance(resample(out, grid), phi) < 1e-3);
    }
}

TEST_CASE("fast path agrees with direct quadrature") {
    Propagator prop(preset("free"), 2.0);
    auto grid = make_grid(256, 0.0, 16.0 / 256.0);
    auto phi = gauss_state(grid, 0.0);
    auto phases = prop.phases_at(1.0);
    auto direct = apply_direct(phases, phi, nullptr, true);
    auto fast = resample(apply_fast(phases, phi, true), grid);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < grid.axes[0].n; ++i) {
        worst = std::max(worst, std::abs(fast.values[i] - direct.values[i]));
        scale = std::max(scale, std::abs(direct.values[i]));
    }
    CHECK(worst / scale < 1e-6);
}

TEST_CASE("fast path is exactly unitary and invertible") {
    auto grid = make_grid(256, 0.4, 24.0 / 256.0); // off-center grid on purpose
    std::mt19937_64 rng(71);
    auto phi = make_state(grid, random_smooth_profile(grid.axes[0], rng, 6));
    Propagator prop(preset("damped"), 2.0);
    auto phases = prop.phases_at(0.9);
    auto fwd = apply_fast(phases, phi, true);
    CHECK(std::abs(l2_norm(fwd) - l2_norm(phi)) < 1e-12);
    CHECK(fwd.grid.axes[0].scale_history.size() == 1);
    auto back = apply_fast_inverse(phases, fwd, true);
    // round trip reproduces the state on a center-zero grid with the original spacing
    CHECK(back.grid.axes[0].spacing == doctest::Approx(grid.axes[0].spacing).epsilon(1e-12));
    auto cmp = resample(phi, back.grid);
    CHECK(l2_distance(back, cmp) < 1e-9);
}

TEST_CASE("harmonic ground state is stationary under the fast path") {
    auto grid = make_grid(256, 0.0, 20.0 / 256.0);
    auto phi = gauss_state(grid, 0.0);
    Propagator prop(preset("isotropic"), 2.0);
    auto phases = prop.phases_at(M_PI / 2.0);
    auto out = apply_fast(phases, phi, true);
    // scaled grid spacing 2 pi mu / (N dx) with mu = 1
    CHECK(out.grid.axes[0].spacing ==
          doctest::Approx(2.0 * M_PI / (256.0 * grid.axes[0].spacing)).epsilon(1e-12));
    // |U phi_0| equals the analytic ground-state profile at the scaled points
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double x = out.grid.axes[0].point(i);
        const double expect = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
        CHECK(std::abs(std::abs(out.values[i]) - expect) < 1e-7);
    }
}

TEST_CASE("full-period harmonic propagation returns the state up to a global phase") {
    auto grid = make_grid(512, 0.0, 20.0 / 512.0);
    auto phi = gauss_state(grid, 1.5);
    Propagator prop(preset("isotropic"), 7.0);
    // just outside the caustic guard band at 2 pi; the split-step branch handles it
    const double t = 2.0 * M_PI - 3e-6;
    auto out = prop.propagate(phi, t, Method::Fast);
    // U(2 pi) = -Id for the isotropic row
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.values.size(); ++i)
        worst = std::max(worst, std::abs(out.values[i] + phi.values[i]));
    CHECK(worst < 1e-5);
}

TEST_CASE("propagate refuses inside the caustic guard band") {
    auto grid = make_grid(128, 0.0, 16.0 / 128.0);
    auto phi = gauss_state(grid, 0.0);
    Propagator prop(preset("isotropic"), 4.0);
    CHECK_THROWS_AS(prop.propagate(phi, M_PI, Method::Fast), CausticError);
    try {
        prop.propagate(phi, M_PI, Method::Direct);
    } catch (const CausticError& e) {
        CHECK(std::abs(e.time - M_PI) < 1e-9); // diagnostic names the caustic time
    }
}

TEST_CASE("two-time composition equals one-shot propagation") {
    auto grid = make_grid(256, 0.0, 24.0 / 256.0);
    std::mt19937_64 rng(5);
    auto phi = make_state(grid, random_smooth_profile(grid.axes[0], rng, 5));
    Propagator prop(preset("isotropic"), 2.0);
    auto a = prop.propagate(phi, 0.4, Method::Fast);
    auto b = prop.two_time_apply(a, 0.4, 0.9, Method::Fast);
    auto direct = prop.propagate(phi, 0.9, Method::Fast);
    CHECK(l2_distance(resample(b, grid), resample(direct, grid)) < 1e-6);
}

TEST_CASE("two-time round trip and identity") {
    auto grid = make_grid(256, 0.0, 24.0 / 256.0);
    std::mt19937_64 rng(6);
    auto phi = make_state(grid, random_smooth_profile(grid.axes[0], rng, 5));
    Propagator prop(preset("damped"), 2.0);
    SUBCASE("s == t is the identity") {
        auto out = prop.two_time_apply(phi, 0.7, 0.7, Method::Fast);
        CHECK(l2_distance(out, phi) < 1e-9);
    }
    SUBCASE("s -> t -> s returns the input") {
        auto fwd = prop.two_time_apply(phi, 0.5, 1.1, Method::Fast);
        auto back = prop.two_time_apply(fwd, 1.1, 0.5, Method::Fast);
        CHECK(l2_distance(resample(back, grid), phi) < 1e-6);
    }
    SUBCASE("direct two-time at s == t refuses") {
        CHECK_THROWS_AS(prop.two_time_apply(phi, 0.7, 0.7, Method::Direct), NumericError);
    }
}

TEST_CASE("free particle two-time step equals a time-translated single step") {
    auto grid = make_grid(256, 0.0, 24.0 / 256.0);
    auto phi = gauss_state(grid, 0.0);
    Propagator prop(preset("free"), 3.0);
    auto at1 = prop.propagate(phi, 1.0, Method::Direct);
    auto two = prop.two_time_apply(at1, 1.0, 2.0, Method::Direct);
    auto one = prop.propagate(at1, 1.0, Method::Direct); // constant coefficients translate in time
    CHECK(l2_distance(two, one) < 1e-7);
}

TEST_CASE("dispersive sup bound") {
    std::mt19937_64 rng(9);
    SUBCASE("free particle matches the 1/sqrt(2 pi t) envelope") {
        auto grid = make_grid(256, 0.0, 20.0 / 256.0);
        auto phi = gauss_state(grid, 0.0);
        Propagator prop(preset("free"), 2.0);
        auto [lhs, rhs] = prop.dispersive_sup_check(phi, 0.0, 1.0);
        CHECK(rhs == doctest::Approx(l1_norm(phi) / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
        CHECK(lhs <= rhs * (1.0 + 1e-6));
    }
    SUBCASE("repulsive row decays exponentially") {
        auto grid = make_grid(256, 0.0, 20.0 / 256.0);
        auto phi = make_state(grid, random_smooth_profile(grid.axes[0], rng, 5));
        Propagator prop(preset("repulsive"), 4.0);
        auto [lhs3, rhs3] = prop.dispersive_sup_check(phi, 0.0, 3.0);
        CHECK(lhs3 <= rhs3 * (1.0 + 1e-6));
        CHECK(rhs3 < 0.2 * l1_norm(phi)); // sinh growth of mu drives the bound down
    }
}

TEST_CASE("unitarity of both paths on random states") {
    auto grid = make_grid(256, 0.0, 28.0 / 256.0);
    std::mt19937_64 rng(2025);
    for (const char* name : {"free", "isotropic", "anisotropic"}) {
        Propagator prop(preset(name), 2.0);
        for (int k = 0; k < 5; ++k) {
            auto phi = make_state(grid, random_smooth_profile(grid.axes[0], rng, 6));
            for (Method m : {Method::Fast, Method::Direct}) {
                auto out = prop.propagate(phi, 0.8, m);
                CHECK(std::abs(l2_norm(out) / l2_norm(phi) - 1.0) < 1e-7);
            }
        }
    }
}

TEST_CASE("strong continuity in time") {
    auto grid = make_grid(256, 0.0, 20.0 / 256.0);
    auto phi = gauss_state(grid, 0.5);
    Propagator prop(preset("isotropic"), 2.0);
    auto base = prop.propagate(phi, 0.7, Method::Direct);
    double prev = 1e9;
    for (double h : {0.04, 0.02, 0.01}) {
        auto moved = prop.propagate(phi, 0.7 + h, Method::Direct);
        const double d = l2_distance(moved, base);
        CHECK(d < 0.6 * prev); // shrinks at least linearly in h
        prev = d;
    }
}

TEST_CASE("separable two-dimensional propagation") {
    PresetParams pp;
    pp.omega1 = 1.0;
    pp.omega2 = 1.0;
    auto spec = preset("hybrid", pp);
    std::vector<GridAxis> axes = {{64, 0.0, 16.0 / 64.0, {}}, {64, 0.0, 16.0 / 64.0, {}}};
    auto grid = make_grid(axes);
    auto phi = product_state(grid, {gaussian_profile(grid.axes[0], 0.0, 1.0, 0.0),
                                    gaussian_profile(grid.axes[1], 0.5, 1.0, 0.0)});
    Propagator prop(spec, 2.0);
    auto out = prop.propagate(phi, 0.7, Method::Direct);
    CHECK(std::abs(l2_norm(out) - 1.0) < 1e-7);
    // hyperbolic axis spreads, trigonometric axis stays bounded
    auto var = position_variance(out);
    CHECK(var[0] > 0.8);
    CHECK(var[1] < 0.8);
}

TEST_CASE("initial-data limit with a fitted constant") {
    auto grid = make_grid(256, 0.0, 16.0 / 256.0);
    auto phi = gauss_state(grid, 0.5, 1.0, 0.3);
    Propagator prop(preset("isotropic"), 1.0);
    double cmax = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        auto out = prop.propagate(phi, eps, Method::Fast);
        cmax = std::max(cmax, l2_distance(resample(out, grid), phi) / eps);
    }
    CHECK(cmax < 10.0);
}
