#include "quadprop/mehler.hpp"
#include "quadprop/errors.hpp"
#include "quadprop/ode.hpp"
#include "quadprop/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace quadprop {

namespace {

// last solution-grid index with t_grid[i] <= t (and <= limit index)
std::size_t node_below(const std::vector<double>& ts, double t, std::size_t limit) {
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - ts.begin() - 1, 0));
    return std::min(i, limit);
}

} // namespace

PhaseCalculator::PhaseCalculator(const HamiltonianSpec& spec, int axis,
                                 std::shared_ptr<const CharacteristicSolution> sol,
                                 const PhaseOptions& opt)
    : spec_(&spec), axis_(axis), sol_(std::move(sol)), opt_(opt) {
    if (axis < 0 || axis >= spec.dimension) throw SpecError("axis out of range");
    const auto& ax = spec.axes[static_cast<std::size_t>(axis)];
    has_force_ = !(ax.f.is_zero() && ax.g.is_zero());
    c0_ = ax.c.value(0.0);

    const auto& ts = sol_->grid_times();
    const std::size_t n = ts.size();

    auto fcg = [&ax](double t) { return ax.f.value(t) - ax.c.value(t) * ax.g.value(t); };
    auto w_delta = [&](double t) {
        auto p = sol_->eval(t);
        return fcg(t) * p.mu + ax.g.value(t) * p.mu_prime;
    };
    auto w_nu = [&](double t) {
        auto p = sol_->eval(t);
        return fcg(t) * p.nu + ax.g.value(t) * p.nu_prime;
    };

    QuadratureOptions cell;
    cell.abs_tol = std::max(opt_.quad_abs_tol / static_cast<double>(n), 1e-15);

    auto build = [&](Cumulative& c, const std::function<double(double)>& f, std::size_t upto) {
        c.value.assign(upto + 1, 0.0);
        c.deriv.assign(upto + 1, 0.0);
        c.deriv[0] = f(ts[0]);
        for (std::size_t i = 0; i < upto; ++i) {
            c.value[i + 1] = c.value[i] + integrate(f, ts[i], ts[i + 1], cell);
            c.deriv[i + 1] = f(ts[i + 1]);
        }
    };

    if (has_force_) {
        build(i_delta_, w_delta, n - 1);
        build(j_nu_, w_nu, n - 1);
        build(p_kappa_, [&](double t) { return cum_eval(i_delta_, t) * w_nu(t); }, n - 1);
    }

    // quotient-route integrals only make sense before mu' first vanishes
    const auto& turns = sol_->turning_points();
    quotient_end_ = turns.empty() ? sol_->t_max() : 0.9 * turns.front();
    const std::size_t qn = node_below(ts, quotient_end_, n - 1);

    auto sigma = [&](double t) { return sigma_of_t(*spec_, axis_, t, opt_.convention); };
    auto inv_mup2 = [&](double t) {
        const double mp = sol_->eval(t).mu_prime;
        return 1.0 / (mp * mp);
    };
    build(i_gamma_, [&](double t) { return sigma(t) * inv_mup2(t); }, qn);
    if (has_force_) {
        build(i_eps1_, [&](double t) { return cum_eval(i_delta_, t) * sigma(t) * inv_mup2(t); }, qn);
        build(i_eps2_, [&](double t) { return fcg(t) / sol_->eval(t).mu_prime; }, qn);
        build(i_kap1_, [&](double t) {
            const double id = cum_eval(i_delta_, t);
            return sigma(t) * id * id * inv_mup2(t);
        }, qn);
        build(i_kap2_, [&](double t) { return cum_eval(i_delta_, t) * fcg(t) / sol_->eval(t).mu_prime; }, qn);
    }

    // ODE continuation of (gamma, epsilon, kappa) across the turning point, up to
    // just before the first caustic (both the RHS and the coefficients diverge there)
    ode_table_end_ = quotient_end_;
    if (!turns.empty() && quotient_end_ < sol_->t_max()) {
        const auto& caus = sol_->caustics();
        double stop = sol_->t_max();
        for (double c : caus)
            if (c > quotient_end_) {
                stop = c - std::max(1e-4, 10.0 * sol_->caustic_guard(c));
                break;
            }
        // an unbracketed caustic at the very end of the solved interval would
        // stall the continuation; cap at the first grid node where mu collapses
        for (double tn : sol_->grid_times()) {
            if (tn <= quotient_end_) continue;
            if (tn >= stop) break;
            const auto pn = sol_->eval(tn);
            if (std::abs(pn.mu) < 1e-4 * std::max(1.0, std::abs(pn.mu_prime))) {
                stop = tn;
                break;
            }
        }
        if (stop > quotient_end_) {
            // seed from the quotient-route evaluation (exact partial quadrature;
            // the Hermite-interpolated tables are not accurate enough this close
            // to the turning point)
            const MehlerPhase p0 = at(quotient_end_);
            std::array<double, 3> y0 = {p0.gamma, p0.epsilon, p0.kappa};
            auto rhs = [&](double t, const std::array<double, 3>&) -> std::array<double, 3> {
                const auto p = sol_->eval(t);
                const double beta = -1.0 / p.mu;
                const double g = ax.g.value(t);
                const double delta = has_force_ ? cum_eval(i_delta_, t) / p.mu : 0.0;
                return {-beta * beta / 2.0, (g - delta) * beta, g * delta - delta * delta / 2.0};
            };
            OdeOptions oo;
            oo.abs_tol = opt_.ode_tol;
            oo.rel_tol = opt_.ode_tol;
            oo.max_step = 0.002; // keep the Hermite dense output well below the phase tolerance
            continuation_ = integrate_ode(rhs, y0, quotient_end_, stop, oo);
            ode_table_end_ = stop;
        }
    }
}

double PhaseCalculator::cum_eval(const Cumulative& c, double t) const {
    // cubic Hermite on the cumulative table (value + integrand at the nodes)
    const auto& ts = sol_->grid_times();
    std::size_t i1 = node_below(ts, t, c.value.size() - 1);
    if (i1 + 1 >= c.value.size()) i1 = c.value.size() - 2;
    const std::size_t i0 = i1;
    const double h = ts[i0 + 1] - ts[i0];
    const double s = (t - ts[i0]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * c.value[i0] + (s3 - 2 * s2 + s) * h * c.deriv[i0] +
           (-2 * s3 + 3 * s2) * c.value[i0 + 1] + (s3 - s2) * h * c.deriv[i0 + 1];
}

double PhaseCalculator::cum_partial(const Cumulative& c, const std::function<double(double)>& f,
                                    double t) const {
    const auto& ts = sol_->grid_times();
    const std::size_t i = node_below(ts, t, c.value.size() - 1);
    QuadratureOptions q;
    q.abs_tol = opt_.quad_abs_tol;
    return c.value[i] + integrate(f, ts[i], t, q);
}

void PhaseCalculator::base_phase(double t, MehlerPhase& p) const {
    const auto& ax = spec_->axes[static_cast<std::size_t>(axis_)];
    const auto cp = sol_->eval(t);
    p.t = t;
    p.axis = axis_;
    p.sigma = sigma_of_t(*spec_, axis_, t, opt_.convention);
    p.mu = cp.mu;
    p.mu_prime = cp.mu_prime;
    p.caustics_before = sol_->caustics_before(t);
    p.alpha = cp.mu_prime / (2.0 * cp.mu) - ax.c.value(t) / 2.0;
    p.beta = -1.0 / cp.mu;
}

MehlerPhase PhaseCalculator::at(double t) const {
    if (t <= 0.0 || t > sol_->t_max())
        throw NumericError("phase evaluation outside (0, t_max]");
    if (sol_->in_caustic_band(t)) throw CausticError(t, std::abs(sol_->eval(t).mu));

    MehlerPhase p{};
    base_phase(t, p);
    const auto& ax = spec_->axes[static_cast<std::size_t>(axis_)];

    if (t <= quotient_end_) {
        auto sigma = [&](double tau) { return sigma_of_t(*spec_, axis_, tau, opt_.convention); };
        auto inv_mup2 = [&](double tau) {
            const double mp = sol_->eval(tau).mu_prime;
            return 1.0 / (mp * mp);
        };
        const double ig = cum_partial(i_gamma_, [&](double tau) { return sigma(tau) * inv_mup2(tau); }, t);
        p.gamma = 1.0 / (2.0 * p.mu * p.mu_prime) - 2.0 * ig + c0_ / 2.0;
        if (has_force_) {
            auto fcg = [&ax](double tau) { return ax.f.value(tau) - ax.c.value(tau) * ax.g.value(tau); };
            auto w_delta = [&](double tau) {
                auto q = sol_->eval(tau);
                return fcg(tau) * q.mu + ax.g.value(tau) * q.mu_prime;
            };
            const double id = cum_partial(i_delta_, w_delta, t);
            p.delta = id / p.mu;
            const double ie1 = cum_partial(i_eps1_, [&](double tau) {
                return cum_eval(i_delta_, tau) * sigma(tau) * inv_mup2(tau);
            }, t);
            const double ie2 = cum_partial(i_eps2_, [&](double tau) {
                return fcg(tau) / sol_->eval(tau).mu_prime;
            }, t);
            p.epsilon = -p.delta / p.mu_prime + 4.0 * ie1 + ie2;
            const double ik1 = cum_partial(i_kap1_, [&](double tau) {
                const double idt = cum_eval(i_delta_, tau);
                return sigma(tau) * idt * idt * inv_mup2(tau);
            }, t);
            const double ik2 = cum_partial(i_kap2_, [&](double tau) {
                return cum_eval(i_delta_, tau) * fcg(tau) / sol_->eval(tau).mu_prime;
            }, t);
            p.kappa = p.mu / (2.0 * p.mu_prime) * p.delta * p.delta - 2.0 * ik1 - ik2;
        }
        return p;
    }

    if (t <= ode_table_end_) {
        std::array<double, 3> y;
        hermite_eval(continuation_, t, y);
        p.gamma = y[0];
        p.epsilon = y[1];
        p.kappa = y[2];
        if (has_force_) {
            auto w_delta = [&](double tau) {
                auto q = sol_->eval(tau);
                return (ax.f.value(tau) - ax.c.value(tau) * ax.g.value(tau)) * q.mu +
                       ax.g.value(tau) * q.mu_prime;
            };
            p.delta = cum_partial(i_delta_, w_delta, t) / p.mu;
        }
        return p;
    }

    return companion_fill(t, p);
}

MehlerPhase PhaseCalculator::companion_form_at(double t) const {
    if (t <= 0.0 || t > sol_->t_max())
        throw NumericError("phase evaluation outside (0, t_max]");
    if (sol_->in_caustic_band(t)) throw CausticError(t, std::abs(sol_->eval(t).mu));
    MehlerPhase p{};
    base_phase(t, p);
    return companion_fill(t, p);
}

MehlerPhase PhaseCalculator::companion_fill(double t, MehlerPhase& p) const {
    const auto cp = sol_->eval(t);
    p.gamma = cp.nu / (2.0 * cp.mu) + c0_ / 2.0;
    if (has_force_) {
        const auto& ax = spec_->axes[static_cast<std::size_t>(axis_)];
        auto fcg = [&ax](double tau) { return ax.f.value(tau) - ax.c.value(tau) * ax.g.value(tau); };
        auto w_delta = [&](double tau) {
            auto q = sol_->eval(tau);
            return fcg(tau) * q.mu + ax.g.value(tau) * q.mu_prime;
        };
        auto w_nu = [&](double tau) {
            auto q = sol_->eval(tau);
            return fcg(tau) * q.nu + ax.g.value(tau) * q.nu_prime;
        };
        const double id = cum_partial(i_delta_, w_delta, t);
        const double j = cum_partial(j_nu_, w_nu, t);
        const double pk = cum_partial(p_kappa_, [&](double tau) { return cum_eval(i_delta_, tau) * w_nu(tau); }, t);
        p.delta = id / cp.mu;
        p.epsilon = j - id * cp.nu / cp.mu;
        p.kappa = id * id * cp.nu / (2.0 * cp.mu) - pk;
    }
    return p;
}

MehlerPhase phase_coefficients(const HamiltonianSpec& spec, const CharacteristicSolution& sol,
                               int axis, double t, const PhaseOptions& opt) {
    std::shared_ptr<const CharacteristicSolution> alias(std::shared_ptr<void>(), &sol);
    return PhaseCalculator(spec, axis, alias, opt).at(t);
}

MehlerPhase riccati_oracle(const HamiltonianSpec& spec, int axis, double t0, double t, double tol) {
    if (!(t0 > 0.0 && t0 <= 0.01)) throw SpecError("riccati_oracle: t0 must lie in (0, 0.01]");
    if (t <= t0) throw SpecError("riccati_oracle: t must exceed t0");
    auto sol = std::make_shared<CharacteristicSolution>(
        solve_characteristic(spec, axis, std::min(t * 1.0000001, spec.t_max)));
    for (double c : sol->caustics())
        if (c >= t0 && c <= t)
            throw NumericError("riccati_oracle: caustic inside [t0, t] at t=" + std::to_string(c));

    PhaseCalculator calc(spec, axis, sol);
    const MehlerPhase p0 = calc.at(t0);

    const auto& ax = spec.axes[static_cast<std::size_t>(axis)];
    auto rhs = [&](double tau, const std::array<double, 6>& y) -> std::array<double, 6> {
        const double b = ax.b.value(tau), c = ax.c.value(tau);
        const double f = ax.f.value(tau), g = ax.g.value(tau);
        const double al = y[0], be = y[1], de = y[3];
        return {-(b / 2.0 + 2.0 * c * al + 2.0 * al * al),
                -(c + 2.0 * al) * be,
                -be * be / 2.0,
                -(c + 2.0 * al) * de + f + 2.0 * al * g,
                (g - de) * be,
                g * de - de * de / 2.0};
    };
    OdeOptions oo;
    oo.abs_tol = tol;
    oo.rel_tol = tol;
    oo.state_bound = 1e10; // alpha blows up approaching a caustic
    std::array<double, 6> y = {p0.alpha, p0.beta, p0.gamma, p0.delta, p0.epsilon, p0.kappa};
    auto knots = axis_knots(spec, axis);
    knots.erase(std::remove_if(knots.begin(), knots.end(),
                               [&](double k) { return k <= t0 || k >= t; }),
                knots.end());
    knots.push_back(t);
    double lo = t0;
    for (double hi : knots) {
        auto seg = integrate_ode(rhs, y, lo, hi, oo);
        y = seg.y.back();
        lo = hi;
    }

    MehlerPhase p{};
    const auto cp = sol->eval(t);
    p.t = t;
    p.axis = axis;
    p.sigma = sigma_of_t(spec, axis, t);
    p.mu = cp.mu;
    p.mu_prime = cp.mu_prime;
    p.caustics_before = sol->caustics_before(t);
    p.alpha = y[0];
    p.beta = y[1];
    p.gamma = y[2];
    p.delta = y[3];
    p.epsilon = y[4];
    p.kappa = y[5];
    return p;
}

double residual_check(const HamiltonianSpec& spec, int axis,
                      const std::vector<MehlerPhase>& trajectory) {
    if (trajectory.size() < 3) throw SpecError("residual_check needs at least 3 samples");
    const double dt = trajectory[1].t - trajectory[0].t;
    for (std::size_t i = 1; i < trajectory.size(); ++i)
        if (std::abs(trajectory[i].t - trajectory[i - 1].t - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw SpecError("residual_check needs uniform time samples");

    const auto& ax = spec.axes[static_cast<std::size_t>(axis)];
    double worst = 0.0;
    // five-point central differences: the quotient coefficients are rational in t
    // with large third derivatives at small t, which a three-point stencil cannot
    // resolve at the documented tolerances
    for (std::size_t i = 2; i + 2 < trajectory.size(); ++i) {
        const MehlerPhase& m = trajectory[i];
        auto dd = [&](double MehlerPhase::* field) {
            return (-(trajectory[i + 2].*field) + 8.0 * (trajectory[i + 1].*field) -
                    8.0 * (trajectory[i - 1].*field) + (trajectory[i - 2].*field)) /
                   (12.0 * dt);
        };
        const double b = ax.b.value(m.t), c = ax.c.value(m.t);
        const double f = ax.f.value(m.t), g = ax.g.value(m.t);
        const double r1 = dd(&MehlerPhase::alpha) + b / 2.0 + 2.0 * c * m.alpha + 2.0 * m.alpha * m.alpha;
        const double r2 = dd(&MehlerPhase::beta) + (c + 2.0 * m.alpha) * m.beta;
        const double r3 = dd(&MehlerPhase::gamma) + m.beta * m.beta / 2.0;
        const double r4 = dd(&MehlerPhase::delta) + (c + 2.0 * m.alpha) * m.delta - f - 2.0 * m.alpha * g;
        const double r5 = dd(&MehlerPhase::epsilon) - (g - m.delta) * m.beta;
        const double r6 = dd(&MehlerPhase::kappa) - g * m.delta + m.delta * m.delta / 2.0;
        for (double r : {r1, r2, r3, r4, r5, r6}) worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace quadprop
