#include "quadprop/verify.hpp"

#include "quadprop/errors.hpp"
#include "quadprop/gridprop.hpp"
#include "quadprop/io.hpp"
#include "quadprop/kernel.hpp"
#include "quadprop/nls.hpp"
#include "quadprop/strichartz.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace quadprop {

namespace {

constexpr double INF = std::numeric_limits<double>::infinity();

struct PresetRow {
    const char* name;
    Table1 table;
    double t_lo, t_hi; // time window where both quadrature paths resolve on the shared grid
};

const PresetRow kRows[] = {
    {"free", Table1::G0, 0.55, 1.0},   {"constant_field", Table1::G1, 0.55, 1.0},
    {"isotropic", Table1::G2, 0.6, 1.2}, {"repulsive", Table1::G3, 0.5, 0.8},
    {"anisotropic", Table1::G4, 0.5, 1.0}, {"damped", Table1::G7, 0.6, 1.3},
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

GridState random_state(const Grid& g, std::mt19937_64& rng, int max_order = 6) {
    std::vector<std::vector<cdouble>> profs;
    for (const auto& ax : g.axes) profs.push_back(random_smooth_profile(ax, rng, max_order));
    return product_state(g, profs);
}

// least-squares frequency fit of y ~ A cos(w t) + B sin(w t)
double fit_frequency(const std::vector<double>& ts, const std::vector<double>& ys, double w_lo,
                     double w_hi) {
    auto sse = [&](double w) {
        double cc = 0, cs = 0, ss = 0, cy = 0, sy = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double c = std::cos(w * ts[i]), s = std::sin(w * ts[i]);
            cc += c * c;
            cs += c * s;
            ss += s * s;
            cy += c * ys[i];
            sy += s * ys[i];
        }
        const double det = cc * ss - cs * cs;
        const double A = (ss * cy - cs * sy) / det;
        const double B = (cc * sy - cs * cy) / det;
        double e = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double r = A * std::cos(w * ts[i]) + B * std::sin(w * ts[i]) - ys[i];
            e += r * r;
        }
        return e;
    };
    double best_w = w_lo, best_e = INF;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double w = w_lo + (w_hi - w_lo) * i / n;
        const double e = sse(w);
        if (e < best_e) {
            best_e = e;
            best_w = w;
        }
    }
    // golden-section refinement around the grid minimum
    double a = best_w - (w_hi - w_lo) / n, b = best_w + (w_hi - w_lo) / n;
    for (int it = 0; it < 60; ++it) {
        const double m1 = a + 0.382 * (b - a), m2 = a + 0.618 * (b - a);
        if (sse(m1) < sse(m2)) b = m2;
        else a = m1;
    }
    return 0.5 * (a + b);
}

CheckResult check_table1(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"table1_reproduction", false, 0.0, 1e-9, "", 0.0, 10.0};
    const int n_xy = opt.full ? 200 : 40;
    std::mt19937_64 rng(opt.seed + 1);
    std::uniform_real_distribution<double> xs(-2.5, 2.5);
    for (const auto& row : kRows) {
        Propagator prop(preset(row.name), 2.0);
        for (double t : {0.3, 0.7, 1.1}) {
            auto phases = prop.phases_at(t);
            for (int i = 0; i < n_xy; ++i) {
                const double x = xs(rng), y = xs(rng);
                const auto pipe = eval_kernel(phases, {&x, 1}, {&y, 1});
                const auto table = table1_kernel(row.table, x, y, t);
                r.measured = std::max(r.measured, std::abs(pipe - table) / std::abs(table));
            }
        }
    }
    r.pass = r.measured < r.threshold;
    r.detail = "6 presets x {0.3, 0.7, 1.1} x " + std::to_string(n_xy) + " points";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_sigma_negative_control(const VerifyOptions&) {
    Timer tm;
    CheckResult r{"sigma_convention_negative_control", false, 0.0, 1e-3, "", 0.0, 0.0};
    PropagatorOptions po;
    po.convention = SigmaConvention::PrintedBOverTwo;
    Propagator prop(preset("isotropic"), 2.0, po);
    auto phases = prop.phases_at(0.7);
    double dev = 0.0;
    for (double x : {0.4, 1.1}) {
        for (double y : {-0.8, 0.6}) {
            const auto pipe = eval_kernel(phases, {&x, 1}, {&y, 1});
            const auto table = table1_kernel(Table1::G2, x, y, 0.7);
            dev = std::max(dev, std::abs(pipe - table) / std::abs(table));
        }
    }
    r.measured = dev;
    r.pass = dev > r.threshold; // the printed b/2 convention must fail to reproduce the row
    r.detail = "printed b/2 variant must break the isotropic row";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_dual_path(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"dual_path_coefficients", false, 0.0, 1e-6, "", 0.0, 30.0};
    const int n_t = opt.full ? 20 : 6;
    for (const auto& row : kRows) {
        auto spec = preset(row.name);
        auto sol = std::make_shared<CharacteristicSolution>(solve_characteristic(spec, 0, 1.4));
        PhaseCalculator calc(spec, 0, sol);
        for (int i = 0; i < n_t; ++i) {
            const double t = 0.05 + (1.3 - 0.05) * i / (n_t - 1);
            auto a = calc.at(t);
            auto b = riccati_oracle(spec, 0, 1e-3, t);
            for (double d : {a.alpha - b.alpha, a.beta - b.beta, a.gamma - b.gamma,
                             a.delta - b.delta, a.epsilon - b.epsilon, a.kappa - b.kappa})
                r.measured = std::max(r.measured, std::abs(d));
        }
    }
    r.pass = r.measured < r.threshold;
    r.detail = "6 presets x " + std::to_string(n_t) + " times in [0.05, 1.3]";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_unitarity(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"unitarity", false, 0.0, 1e-7, "", 0.0, 60.0};
    const std::size_t n_grid = 256;
    const int n_states = opt.full ? 50 : 8;
    auto grid = make_grid(n_grid, 0.0, 28.0 / static_cast<double>(n_grid));
    std::mt19937_64 rng(opt.seed + 3);
    for (const auto& row : kRows) {
        Propagator prop(preset(row.name), 2.0);
        std::uniform_real_distribution<double> td(row.t_lo, row.t_hi);
        for (int k = 0; k < n_states; ++k) {
            auto phi = random_state(grid, rng);
            const double t = td(rng);
            for (Method m : {Method::Fast, Method::Direct}) {
                auto out = prop.propagate(phi, t, m);
                r.measured = std::max(r.measured, std::abs(l2_norm(out) / l2_norm(phi) - 1.0));
            }
        }
    }
    r.pass = r.measured < r.threshold;
    r.detail = std::to_string(n_states) + " random states per preset, N=" + std::to_string(n_grid) +
               ", both paths";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_group_law(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"group_law", false, 0.0, 1e-5, "", 0.0, 60.0};
    const std::size_t n_grid = 256;
    auto grid = make_grid(n_grid, 0.0, 28.0 / static_cast<double>(n_grid));
    std::mt19937_64 rng(opt.seed + 4);
    const double times[3] = {0.45, 0.8, 1.15};
    for (const char* name : {"free", "isotropic", "damped"}) {
        Propagator prop(preset(name), 2.0);
        auto phi = random_state(grid, rng);
        const double nrm = l2_norm(phi);
        for (double s : times)
            for (double tau : times)
                for (double t : times) {
                    auto one = prop.two_time_apply(phi, 0.0, s, Method::Fast);
                    auto mid = prop.two_time_apply(one, s, tau, Method::Fast);
                    auto lhs = prop.two_time_apply(mid, tau, t, Method::Fast);
                    auto rhs = prop.two_time_apply(one, s, t, Method::Fast);
                    auto d = l2_distance(resample(lhs, grid), resample(rhs, grid));
                    r.measured = std::max(r.measured, d / nrm);
                }
    }
    r.pass = r.measured < r.threshold;
    r.detail = "3x3x3 (s,tau,t) grid, presets free/isotropic/damped";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_fast_vs_direct(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"fast_vs_direct", false, 0.0, 1e-6, "", 0.0, 120.0};
    std::vector<std::size_t> sizes = opt.full ? std::vector<std::size_t>{64, 128, 256}
                                              : std::vector<std::size_t>{64, 128};
    for (const char* name : {"free", "isotropic"}) {
        Propagator prop(preset(name), 2.0);
        for (std::size_t n : sizes) {
            auto grid = make_grid(n, 0.0, 16.0 / static_cast<double>(n));
            std::vector<std::vector<cdouble>> inputs;
            inputs.push_back(gaussian_profile(grid.axes[0], 0.0, 1.0, 0.0));
            for (int h = 1; h <= 3; ++h) inputs.push_back(hermite_profile(grid.axes[0], h));
            for (auto& prof : inputs) {
                auto phi = make_state(grid, prof);
                for (double t : {0.7, 1.1}) {
                    auto phases = prop.phases_at(t);
                    auto direct = apply_direct(phases, phi, nullptr, true);
                    auto fast = resample(apply_fast(phases, phi, true), grid);
                    double num = 0.0, den = 0.0;
                    for (std::size_t i = 0; i < direct.values.size(); ++i) {
                        num = std::max(num, std::abs(fast.values[i] - direct.values[i]));
                        den = std::max(den, std::abs(direct.values[i]));
                    }
                    r.measured = std::max(r.measured, num / den);
                }
            }
        }
    }
    r.pass = r.measured < r.threshold;
    r.detail = "Gaussian + Hermite 1..3, free/isotropic, N in {64,128,256}";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_dispersive(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"dispersive_bound", false, 0.0, 1.0 + 1e-6, "", 0.0, 30.0};
    const int n_draw = opt.full ? 30 : 8;
    std::mt19937_64 rng(opt.seed + 6);
    struct Win {
        const char* name;
        double d_lo, d_hi;
    };
    const Win wins[] = {{"free", 0.5, 2.0},      {"constant_field", 0.5, 2.0},
                        {"isotropic", 0.5, 2.6}, {"repulsive", 0.5, 2.5},
                        {"anisotropic", 0.35, 1.1}, {"damped", 0.5, 3.0}};
    double worst_ratio = 0.0;
    for (const auto& w : wins) {
        PresetParams pp;
        pp.t_max = 8.0;
        Propagator prop(preset(w.name, pp), 4.0);
        auto grid = make_grid(256, 0.0, 20.0 / 256.0);
        std::uniform_real_distribution<double> sd(0.05, 0.35), dd(w.d_lo, w.d_hi);
        for (int k = 0; k < n_draw; ++k) {
            auto phi = random_state(grid, rng);
            const double s = sd(rng), diff = dd(rng);
            auto [lhs, rhs] = prop.dispersive_sup_check(phi, s, s + diff);
            worst_ratio = std::max(worst_ratio, lhs / rhs);
        }
    }
    {
        // hybrid: hyperbolic x trigonometric tensor case, exponentially decaying bound
        PresetParams pp;
        pp.omega1 = 1.0;
        pp.omega2 = 1.0;
        pp.t_max = 8.0;
        Propagator prop(preset("hybrid", pp), 3.0);
        std::vector<GridAxis> axes = {{128, 0.0, 20.0 / 128.0, {}}, {128, 0.0, 20.0 / 128.0, {}}};
        auto grid = make_grid(axes);
        std::uniform_real_distribution<double> sd(0.05, 0.3), dd(0.6, 2.5);
        const int n2 = opt.full ? n_draw : 4;
        for (int k = 0; k < n2; ++k) {
            auto phi = random_state(grid, rng, 4);
            const double s = sd(rng), diff = dd(rng);
            auto [lhs, rhs] = prop.dispersive_sup_check(phi, s, s + diff);
            worst_ratio = std::max(worst_ratio, lhs / rhs);
        }
    }
    r.measured = worst_ratio;
    r.pass = worst_ratio <= r.threshold;
    r.detail = std::to_string(n_draw) + " draws per preset incl. hybrid";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_coherent_isotropic(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"coherent_state_isotropic", false, 0.0, 1e-3, "", 0.0, 30.0};
    const std::size_t n = 512;
    auto grid = make_grid(n, 0.0, 20.0 / static_cast<double>(n));
    auto phi = make_state(grid, gaussian_profile(grid.axes[0], 2.0, 1.0, 0.0));
    Propagator prop(preset("isotropic"), 2.0 * M_PI);
    const int samples = opt.full ? 40 : 12;
    for (int i = 0; i < samples; ++i) {
        const double t = 0.2 + (2.0 * M_PI - 0.4) * i / (samples - 1);
        if (std::abs(std::sin(t)) < 0.16) continue; // stay clear of the caustics
        auto out = prop.propagate(phi, t, Method::Direct);
        r.measured = std::max(r.measured, std::abs(centroid(out)[0] - 2.0 * std::cos(t)));
    }
    r.pass = r.measured < r.threshold;
    r.detail = "centroid vs 2 cos t over [0, 2pi], N=" + std::to_string(n);
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_coherent_damped(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"coherent_state_damped_frequency", false, 0.0, 0.01, "", 0.0, 60.0};
    const double w = 0.8; // sqrt(1 - 0.6^2)
    const double periods = opt.full ? 3.0 : 1.5;
    const double horizon = periods * 2.0 * M_PI / w;
    PresetParams pp;
    pp.lambda = 0.6;
    pp.t_max = horizon + 1.0;
    const std::size_t n = 512;
    auto grid = make_grid(n, 0.0, 24.0 / static_cast<double>(n));
    auto phi = make_state(grid, gaussian_profile(grid.axes[0], 2.0, 1.0, 0.0));
    Propagator prop(preset("damped", pp), horizon);
    std::vector<double> ts, cs;
    const int samples = opt.full ? 60 : 24;
    for (int i = 0; i < samples; ++i) {
        const double t = 0.25 + (horizon - 0.5) * i / (samples - 1);
        if (std::abs(std::sin(w * t)) < 0.17) continue;
        auto out = prop.propagate(phi, t, Method::Direct);
        ts.push_back(t);
        cs.push_back(centroid(out)[0]);
    }
    const double w_fit = fit_frequency(ts, cs, 0.7, 0.9);
    r.measured = std::abs(w_fit - w) / w;
    r.pass = r.measured < r.threshold;
    std::ostringstream os;
    os << "fitted " << w_fit << " over " << periods << " periods, " << ts.size() << " samples";
    r.detail = os.str();
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_nls_linear_limit(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"nls_linear_limit", false, 0.0, 1e-4, "", 0.0, 90.0};
    const std::size_t n = opt.full ? 512 : 256;
    for (const char* name : {"isotropic", "damped"}) {
        auto spec = preset(name);
        auto grid = make_grid(n, 0.0, 20.0 / static_cast<double>(n));
        auto u0 = make_state(grid, gaussian_profile(grid.axes[0], 1.0, 1.0, 0.0));
        Nonlinearity nl;
        nl.p = 3.0;
        nl.h = CoefficientFn::constant(0.0);
        auto traj = solve_nls(spec, nl, u0, 1.0, 1e-3);
        Propagator prop(spec, 1.5);
        auto ref = prop.propagate(u0, traj.snapshots.back().first, Method::Direct);
        r.measured = std::max(r.measured, l2_distance(traj.snapshots.back().second, ref));
    }
    r.pass = r.measured < r.threshold;
    r.detail = "h = 0 over [0,1] vs the exact propagator, dt = 1e-3";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_nls_soliton(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"nls_soliton_shape", false, 0.0, 1e-3, "", 0.0, 180.0};
    const double T = opt.full ? 5.0 : 1.0;
    const std::size_t n = opt.full ? 1024 : 512;
    auto grid = make_grid(n, 1.0, 40.0 / static_cast<double>(n));
    auto u0 = make_state(grid, soliton_profile(grid.axes[0], 1.0, 0.5, 0.0));
    Nonlinearity nl;
    nl.p = 3.0;
    nl.h = CoefficientFn::constant(-1.0);
    PresetParams pp;
    pp.t_max = T + 1.0;
    auto traj = solve_nls(preset("free", pp), nl, u0, T, 1e-3);
    for (const auto& [t, s] : traj.snapshots) {
        if (t == 0.0) continue;
        double acc = 0.0;
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double x = s.grid.axes[0].point(i);
            const double exact = 1.0 / std::cosh(x - 0.5 * t);
            const double d = std::abs(s.values[i]) - exact;
            acc += d * d;
        }
        r.measured = std::max(r.measured, std::sqrt(acc * s.grid.cell_volume()));
    }
    r.pass = r.measured < r.threshold;
    r.detail = "sech profile translating at speed 1/2 over [0," + std::to_string(T) + "]";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_nls_order(const VerifyOptions& opt) {
    Timer tm;
    CheckResult r{"nls_strang_order", false, 0.0, 0.25, "", 0.0, 60.0};
    const std::size_t n = opt.full ? 256 : 128;
    auto spec = preset("damped");
    auto grid = make_grid(n, 0.0, 24.0 / static_cast<double>(n));
    auto u0 = make_state(grid, gaussian_profile(grid.axes[0], 1.2, 1.0, 0.0));
    Nonlinearity nl;
    nl.p = 3.0;
    nl.h = CoefficientFn::constant(1.0);
    const double T = 0.4;
    auto run = [&](double dt) {
        NlsOptions no;
        no.log_centroid = false;
        return solve_nls(spec, nl, u0, T, dt, no).snapshots.back().second;
    };
    auto ref = run(2.5e-4);
    const double e1 = l2_distance(run(2e-3), ref);
    const double e2 = l2_distance(run(1e-3), ref);
    const double order = std::log2(e1 / e2);
    r.measured = std::abs(order - 2.0);
    r.pass = r.measured < r.threshold;
    std::ostringstream os;
    os << "order " << order << " (errors " << e1 << " / " << e2 << ")";
    r.detail = os.str();
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_nls_supercritical(const VerifyOptions&) {
    Timer tm;
    CheckResult r{"nls_supercritical_rejection", false, 0.0, 1.0, "", 0.0, 5.0};
    auto grid = make_grid(64, 0.0, 0.25);
    auto u0 = make_state(grid, gaussian_profile(grid.axes[0], 0.0, 1.0, 0.0));
    Nonlinearity nl;
    nl.p = 5.0;
    try {
        solve_nls(preset("free"), nl, u0, 0.1, 1e-2);
        r.detail = "p = 5, d = 1 was not rejected";
    } catch (const SpecError& e) {
        const std::string msg = e.what();
        r.pass = msg.find("p - 1 < 4/d") != std::string::npos;
        r.measured = r.pass ? 0.0 : 1.0;
        r.detail = "rejected citing the subcritical window";
    }
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_small_time(const VerifyOptions&) {
    Timer tm;
    CheckResult r{"small_time_asymptotics", false, 0.0, 0.5, "", 0.0, 5.0};
    double worst_ratio = 0.0, worst_err = 0.0;
    for (const auto& row : kRows) {
        auto spec = preset(row.name);
        Propagator prop(spec, 1.0);
        const double g0 = spec.axes[0].g.value(0.0);
        const double c0 = spec.axes[0].c.value(0.0);
        const double x = 0.7, y = -0.4;
        double prev = INF;
        for (double t : {1e-2, 1e-3, 1e-4}) {
            auto phases = prop.phases_at(t);
            auto v = eval_kernel(phases, {&x, 1}, {&y, 1});
            const cdouble I(0.0, 1.0);
            auto ratio = v * std::sqrt(2.0 * M_PI * I * t) *
                         std::exp(-I * (x - y) * (x - y) / (2.0 * t)) * std::exp(-I * g0 * (x - y)) *
                         std::exp(I * c0 * (x * x - y * y) / 2.0);
            const double err = std::abs(ratio - 1.0);
            if (std::isfinite(prev) && prev > 1e-10)
                worst_ratio = std::max(worst_ratio, err / prev);
            worst_err = std::max(worst_err, err / ((t == 1e-2) ? 1e-1 : (t == 1e-3) ? 1e-2 : 1e-3));
            prev = err;
        }
    }
    // at-least-linear shrink: each decade of t cuts the error by at least 1/0.5
    r.measured = std::max(worst_ratio, worst_err);
    r.pass = worst_ratio < 0.5 && worst_err < 1.0;
    r.detail = "normalized kernel ratio -> 1 across t in {1e-2, 1e-3, 1e-4}";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_strichartz_table(const VerifyOptions&) {
    Timer tm;
    CheckResult r{"strichartz_admissibility_table", false, 0.0, 0.0, "", 0.0, 10.0};
    struct Row {
        double q, r, sigma;
        Admissibility expect;
    };
    static const Row table[] = {
        {4.0, INF, 0.5, Admissibility::Sharp},      {6.0, 6.0, 0.5, Admissibility::Sharp},
        {8.0, 4.0, 0.5, Admissibility::Sharp},      {INF, 2.0, 0.5, Admissibility::Sharp},
        {3.0, 6.0, 1.0, Admissibility::Sharp},      {4.0, 4.0, 1.0, Admissibility::Sharp},
        {6.0, 3.0, 1.0, Admissibility::Sharp},      {INF, 2.0, 1.0, Admissibility::Sharp},
        {2.0, 6.0, 1.5, Admissibility::Sharp},      {4.0, 3.0, 1.5, Admissibility::Sharp},
        {INF, 2.0, 1.5, Admissibility::Sharp},      {2.0, 4.0, 2.0, Admissibility::Sharp},
        {3.0, 3.0, 2.0, Admissibility::Sharp},      {INF, 2.0, 2.0, Admissibility::Sharp},
        {2.0, INF, 1.0, Admissibility::ForbiddenEndpoint},
        {6.0, 8.0, 0.5, Admissibility::Nonsharp},   {8.0, 8.0, 0.5, Admissibility::Nonsharp},
        {INF, 3.0, 0.5, Admissibility::Nonsharp},   {INF, 8.0, 0.5, Admissibility::Nonsharp},
        {3.0, 8.0, 1.0, Admissibility::Nonsharp},   {4.0, 8.0, 1.0, Admissibility::Nonsharp},
        {6.0, 6.0, 1.0, Admissibility::Nonsharp},   {8.0, 3.0, 1.0, Admissibility::Nonsharp},
        {8.0, 8.0, 1.0, Admissibility::Nonsharp},   {INF, 3.0, 1.0, Admissibility::Nonsharp},
        {INF, 8.0, 1.0, Admissibility::Nonsharp},   {2.0, INF, 1.5, Admissibility::Nonsharp},
        {2.5, INF, 1.5, Admissibility::Nonsharp},   {3.0, 8.0, 1.5, Admissibility::Nonsharp},
        {4.0, 6.0, 1.5, Admissibility::Nonsharp},   {6.0, 3.0, 1.5, Admissibility::Nonsharp},
        {6.0, 8.0, 1.5, Admissibility::Nonsharp},   {8.0, 3.0, 1.5, Admissibility::Nonsharp},
        {8.0, 8.0, 1.5, Admissibility::Nonsharp},   {INF, 3.0, 1.5, Admissibility::Nonsharp},
        {2.0, 2.0, 0.5, Admissibility::Inadmissible}, {2.0, 3.0, 0.5, Admissibility::Inadmissible},
        {2.0, 6.0, 0.5, Admissibility::Inadmissible}, {2.0, INF, 0.5, Admissibility::Inadmissible},
        {2.5, 2.5, 0.5, Admissibility::Inadmissible}, {2.5, 4.0, 0.5, Admissibility::Inadmissible},
        {2.5, 8.0, 0.5, Admissibility::Inadmissible}, {3.0, 2.0, 0.5, Admissibility::Inadmissible},
        {3.0, 3.0, 0.5, Admissibility::Inadmissible}, {3.0, 6.0, 0.5, Admissibility::Inadmissible},
        {3.0, INF, 0.5, Admissibility::Inadmissible}, {4.0, 2.5, 0.5, Admissibility::Inadmissible},
        {4.0, 4.0, 0.5, Admissibility::Inadmissible}, {4.0, 8.0, 0.5, Admissibility::Inadmissible},
        {6.0, 2.5, 0.5, Admissibility::Inadmissible},
    };
    int mismatches = 0;
    for (const auto& row : table)
        if (is_admissible(row.q, row.r, row.sigma) != row.expect) ++mismatches;
    auto ep = endpoint(1.5);
    if (!(ep.q == 2.0 && std::abs(ep.r - 6.0) < 1e-14)) ++mismatches;
    auto ep2 = endpoint(2.0);
    if (!(ep2.q == 2.0 && std::abs(ep2.r - 4.0) < 1e-14)) ++mismatches;
    try {
        endpoint(1.0);
        ++mismatches;
    } catch (const SpecError&) {
    }
    r.measured = mismatches;
    r.pass = mismatches == 0;
    r.detail = "50-pair frozen table plus endpoint cases";
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_weak_l1(const VerifyOptions&) {
    Timer tm;
    CheckResult r{"weak_l1_decay_weight", false, 0.0, 0.5, "", 0.0, 10.0};
    const double om[2] = {1.0, 1.0};
    const int de[2] = {-1, 1};
    std::vector<double> mesh, w;
    for (double t = 5e-4; t <= 10.0; t += 5e-4) {
        // skip exact zeros of sin (never hit on this mesh, but keep it safe)
        if (std::abs(std::sin(t)) < 1e-9) continue;
        mesh.push_back(t);
        w.push_back(decay_weight(om, de, 0, 0.1, 1.0, t));
    }
    std::vector<double> lambdas;
    for (int i = 0; i <= 24; ++i) lambdas.push_back(std::pow(10.0, 0.0 + 3.0 * i / 24.0));
    auto slope = [](const WeakL1Result& res) {
        // least-squares slope of log(product) against log(lambda); bounded
        // distribution products have slope ~ 0, a growing product has slope ~ 1
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < res.lambda.size(); ++i) {
            if (res.product[i] <= 0.0) continue;
            const double lx = std::log(res.lambda[i]), ly = std::log(res.product[i]);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    auto res = weak_l1_check(mesh, w, lambdas);
    const double grow = slope(res);
    bool theorem_ok = grow <= r.threshold;

    // negative control: w == 1 must be flagged as growing
    std::vector<double> ones(mesh.size(), 1.0);
    std::vector<double> lam2;
    for (int i = 0; i <= 16; ++i) lam2.push_back(0.1 + 0.8 * i / 16.0);
    auto res2 = weak_l1_check(mesh, ones, lam2);
    const double grow2 = slope(res2);
    bool control_flagged = grow2 > r.threshold;

    // free-particle weight 1/|t| has product exactly the interval length factor
    std::vector<double> winv(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) winv[i] = 1.0 / mesh[i];
    std::vector<double> lam3 = {0.2, 1.0, 5.0, 50.0};
    auto res3 = weak_l1_check(mesh, winv, lam3);
    bool free_ok = true;
    for (double p : res3.product)
        if (std::abs(p - 1.0) > 0.05) free_ok = false; // one-sided mesh of [0, 10]

    r.measured = grow;
    r.pass = theorem_ok && control_flagged && free_ok;
    std::ostringstream os;
    os << "theorem-2 log-log slope " << grow << ", control slope " << grow2;
    r.detail = os.str();
    r.seconds = tm.seconds();
    return r;
}

CheckResult check_initial_data_limit(const VerifyOptions&) {
    Timer tm;
    CheckResult r{"initial_data_limit", false, 0.0, 10.0, "", 0.0, 30.0};
    auto grid = make_grid(256, 0.0, 16.0 / 256.0);
    auto phi = make_state(grid, gaussian_profile(grid.axes[0], 0.5, 1.0, 0.3));
    for (const char* name : {"free", "isotropic", "damped"}) {
        Propagator prop(preset(name), 1.0);
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            auto out = prop.propagate(phi, eps, Method::Fast);
            r.measured = std::max(r.measured, l2_distance(resample(out, grid), phi) / eps);
        }
    }
    r.pass = r.measured < r.threshold; // the fitted constant stays finite and modest
    r.detail = "||U(eps) phi - phi|| <= C eps for eps in {1e-2, 1e-3, 1e-4}";
    r.seconds = tm.seconds();
    return r;
}

} // namespace

std::vector<CheckResult> verify_suite(const VerifyOptions& opt) {
    std::vector<std::function<CheckResult()>> jobs = {
        [&] { return check_table1(opt); },
        [&] { return check_sigma_negative_control(opt); },
        [&] { return check_dual_path(opt); },
        [&] { return check_unitarity(opt); },
        [&] { return check_group_law(opt); },
        [&] { return check_fast_vs_direct(opt); },
        [&] { return check_dispersive(opt); },
        [&] { return check_coherent_isotropic(opt); },
        [&] { return check_coherent_damped(opt); },
        [&] { return check_nls_linear_limit(opt); },
        [&] { return check_nls_soliton(opt); },
        [&] { return check_nls_order(opt); },
        [&] { return check_nls_supercritical(opt); },
        [&] { return check_small_time(opt); },
        [&] { return check_strichartz_table(opt); },
        [&] { return check_weak_l1(opt); },
        [&] { return check_initial_data_limit(opt); },
    };

    int threads = opt.threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("QUADPROP_THREADS")) threads = std::atoi(env);
        if (threads <= 0) threads = 1;
    }
    threads = std::min<int>(threads, static_cast<int>(jobs.size()));

    std::vector<CheckResult> results(jobs.size());
    if (threads <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                results[i] = jobs[i]();
            }
        };
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace quadprop
