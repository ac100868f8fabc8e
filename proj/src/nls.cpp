#include "quadprop/nls.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace quadprop {

namespace {
cdouble polar1(double ang) { return cdouble(std::cos(ang), std::sin(ang)); }
} // namespace

bool subcritical_check(double p, int d) {
    if (!(p > 1.0) || d < 1) return false;
    return (p - 1.0) < 4.0 / static_cast<double>(d);
}

StrangStepper::StrangStepper(const HamiltonianSpec& spec, Nonlinearity nl)
    : spec_(&spec), nl_(std::move(nl)) {
    require_pipeline_ready(spec);
    if (!(nl_.p > 1.0)) throw SpecError("nonlinearity exponent must satisfy p > 1");
}

void StrangStepper::nonlinear_kick(GridState& state, double t0, double t1) const {
    const double htau = nl_.h.integral(t0, t1); // exact time integral of the coupling
    if (htau == 0.0) return;
    const double pw = nl_.p - 1.0;
    for (auto& v : state.values) {
        const double a = std::abs(v);
        if (a == 0.0) continue;
        const double amp = (pw == 2.0) ? a * a : std::pow(a, pw);
        if (!std::isfinite(amp)) throw NumericError("nonlinear kick overflow in |u|^(p-1)");
        v *= polar1(-htau * amp);
    }
}

void StrangStepper::kinetic_half(GridState& state, double tau) const {
    for (int a = 0; a < state.grid.dim(); ++a) {
        const auto& ax = state.grid.axes[static_cast<std::size_t>(a)];
        const std::size_t n = ax.n;
        const double dxi = 1.0 / (static_cast<double>(n) * ax.spacing);
        for_each_line(state.values, state.grid, a, [&](std::vector<cdouble>& line) {
            fft_pow2(line, -1);
            for (std::size_t j = 0; j < n; ++j) {
                const double f = (j <= n / 2) ? static_cast<double>(j)
                                              : static_cast<double>(j) - static_cast<double>(n);
                const double xi = f * dxi;
                line[j] *= polar1(-2.0 * M_PI * M_PI * xi * xi * tau);
            }
            fft_pow2(line, +1);
            const double inv = 1.0 / static_cast<double>(n);
            for (auto& v : line) v *= inv;
        });
    }
}

void StrangStepper::potential_full(GridState& state, double t0, double t1) const {
    for (int a = 0; a < state.grid.dim(); ++a) {
        const auto& coeff = spec_->axes[static_cast<std::size_t>(a)];
        const double B = coeff.b.integral(t0, t1);
        const double F = coeff.f.integral(t0, t1);
        if (B == 0.0 && F == 0.0) continue;
        const auto& ax = state.grid.axes[static_cast<std::size_t>(a)];
        for_each_line(state.values, state.grid, a, [&](std::vector<cdouble>& line) {
            for (std::size_t i = 0; i < ax.n; ++i) {
                const double x = ax.point(i);
                line[i] *= polar1(-(B / 2.0 * x * x - F * x));
            }
        });
    }
}

void StrangStepper::dilation_half(GridState& state, double t0, double t1) const {
    for (int a = 0; a < state.grid.dim(); ++a) {
        const auto& coeff = spec_->axes[static_cast<std::size_t>(a)];
        const double C = coeff.c.integral(t0, t1);
        const double G = coeff.g.integral(t0, t1);
        if (C == 0.0 && G == 0.0) continue;
        const auto& ax = state.grid.axes[static_cast<std::size_t>(a)];
        const double scale = std::exp(-C);
        // support must stay on the grid after the coordinate rescale
        if (std::abs(scale - 1.0) > 0.25)
            throw NumericError("dilation sub-flow: rescale factor pushes support off the grid (reduce dt)");
        double shift;
        if (std::abs(C) < 1e-14) {
            shift = G;
        } else {
            shift = (G / C) * (1.0 - scale); // exact for constant c, g on the slice
        }
        const double amp = std::exp(-C / 2.0);
        for_each_line(state.values, state.grid, a, [&](std::vector<cdouble>& line) {
            dilated_line_eval(line, ax, scale, shift);
            for (auto& v : line) v *= amp;
        });
    }
}

void StrangStepper::step(GridState& state, double dt) const {
    const double ta = state.time, tb = state.time + dt, tm = ta + dt / 2.0;
    nonlinear_kick(state, ta, tm);
    dilation_half(state, ta, tm);
    kinetic_half(state, dt / 2.0);
    potential_full(state, ta, tb);
    kinetic_half(state, dt / 2.0);
    dilation_half(state, tm, tb);
    nonlinear_kick(state, tm, tb);
    state.time = tb;
}

GridState step_strang(const HamiltonianSpec& spec, const Nonlinearity& nl, const GridState& state,
                      double dt) {
    StrangStepper stepper(spec, nl);
    GridState out = state;
    stepper.step(out, dt);
    return out;
}

Trajectory solve_nls(const HamiltonianSpec& spec, const Nonlinearity& nl, const GridState& u0,
                     double T, double dt, const NlsOptions& opt) {
    if (!subcritical_check(nl.p, spec.dimension))
        throw SpecError("solve_nls requires a subcritical exponent: 0 < p - 1 < 4/d (got p=" +
                        std::to_string(nl.p) + ", d=" + std::to_string(spec.dimension) + ")");
    if (!(dt > 0.0) || !(T > 0.0)) throw SpecError("solve_nls needs positive T and dt");
    if (u0.time + T > spec.t_max)
        throw SpecError("solve_nls: T exceeds the coefficient validity interval");

    StrangStepper stepper(spec, nl);
    const std::size_t nsteps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    std::size_t stride = opt.snapshot_stride;
    if (stride == 0) stride = std::max<std::size_t>(1, nsteps / 64);

    Trajectory traj;
    traj.dt = dt;
    GridState cur = u0;
    const double sup0 = sup_norm(cur);

    auto log_state = [&](const GridState& s) {
        traj.times.push_back(s.time);
        traj.mass_log.push_back(mass(s));
        traj.sup_log.push_back(sup_norm(s));
        if (opt.log_centroid) traj.centroid_log.push_back(centroid(s));
    };
    log_state(cur);
    traj.snapshots.emplace_back(cur.time, cur);

    for (std::size_t k = 1; k <= nsteps; ++k) {
        stepper.step(cur, dt);
        log_state(cur);
        if (traj.sup_log.back() > opt.blowup_factor * std::max(sup0, 1e-300)) {
            traj.truncated_by_guard = true;
            traj.diagnostic = "blow-up guard: sup|u| exceeded " +
                              std::to_string(opt.blowup_factor) + " times its initial value at t=" +
                              std::to_string(cur.time);
            traj.snapshots.emplace_back(cur.time, cur);
            return traj;
        }
        if (k % stride == 0 || k == nsteps) traj.snapshots.emplace_back(cur.time, cur);
    }
    return traj;
}

} // namespace quadprop
