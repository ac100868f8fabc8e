#include "quadprop/characteristic.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace quadprop {

namespace {

CharacteristicSolution::Point closed_form_point(double sigma, double t) {
    CharacteristicSolution::Point p{};
    if (sigma > 0.0) {
        const double w = 2.0 * std::sqrt(sigma);
        p.mu = std::sin(w * t) / w;
        p.mu_prime = std::cos(w * t);
        p.nu = std::cos(w * t);
        p.nu_prime = -w * std::sin(w * t);
    } else if (sigma < 0.0) {
        const double w = 2.0 * std::sqrt(-sigma);
        p.mu = std::sinh(w * t) / w;
        p.mu_prime = std::cosh(w * t);
        p.nu = std::cosh(w * t);
        p.nu_prime = w * std::sinh(w * t);
    } else {
        p.mu = t;
        p.mu_prime = 1.0;
        p.nu = 1.0;
        p.nu_prime = 0.0;
    }
    return p;
}

// Bisection refinement of a sign change of `value` bracketed by [lo, hi].
template <typename F>
double bisect(F value, double lo, double hi) {
    double flo = value(lo);
    for (int i = 0; i < 200 && (hi - lo) > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = value(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Scan fn over a dense grid and collect refined zeros (simple sign changes).
template <typename F>
std::vector<double> scan_zeros(F fn, double t0, double t1, double spacing) {
    std::vector<double> zeros;
    const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>((t1 - t0) / spacing) + 1);
    double prev_t = t0;
    double prev_v = fn(t0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
        const double v = fn(t);
        if (prev_v == 0.0) {
            zeros.push_back(prev_t);
        } else if ((prev_v < 0.0) != (v < 0.0)) {
            zeros.push_back(bisect(fn, prev_t, t));
        }
        prev_t = t;
        prev_v = v;
    }
    return zeros;
}

} // namespace

std::pair<double, double> closed_form_mu(double sigma, double t) {
    auto p = closed_form_point(sigma, t);
    return {p.mu, p.mu_prime};
}

CharacteristicSolution::Point CharacteristicSolution::eval(double t) const {
    if (t < 0.0 || t > t_max_ * (1.0 + 1e-12))
        throw NumericError("characteristic evaluation outside solved interval");
    if (method_ == Method::ClosedForm)
        return closed_form_point(sigma_const_, t);
    std::array<double, 4> y;
    hermite_eval(table_, t, y);
    return {y[0], y[1], y[2], y[3]};
}

CharacteristicSolution::Point CharacteristicSolution::grid_point(std::size_t i) const {
    const auto& y = table_.y[i];
    return {y[0], y[1], y[2], y[3]};
}

int CharacteristicSolution::caustics_before(double t) const {
    int n = 0;
    for (double c : caustics_) {
        if (c < t - caustic_guard(t)) ++n;
        else break;
    }
    return n;
}

double CharacteristicSolution::caustic_guard(double t) const {
    return 1e-6 * std::max(1.0, std::abs(eval(t).mu_prime));
}

bool CharacteristicSolution::in_caustic_band(double t) const {
    // |mu(t)| <= guard near an actual caustic; the structural zero at t = 0 is
    // not a caustic (phases are evaluable arbitrarily close to 0+)
    for (double c : caustics_) {
        const double slope = std::max(std::abs(eval(c).mu_prime), 1e-12);
        if (std::abs(t - c) <= caustic_guard(c) / slope) return true;
    }
    return false;
}

CharacteristicSolution solve_characteristic(const HamiltonianSpec& spec, int axis, double t_max,
                                            const CharacteristicOptions& options) {
    const double tol = options.tol;
    const SigmaConvention convention = options.convention;
    require_pipeline_ready(spec);
    if (axis < 0 || axis >= spec.dimension) throw SpecError("axis out of range");
    if (t_max <= 0.0) throw SpecError("t_max must be positive");
    if (t_max > spec.t_max)
        throw SpecError("t_max exceeds coefficient validity interval");

    const auto& ax = spec.axes[static_cast<std::size_t>(axis)];
    CharacteristicSolution sol;
    sol.t_max_ = t_max;

    // dense grid spacing <= 0.01 * min(1, 1/sqrt(max|4 sigma|)) so no double crossing is skipped
    double max4s = 0.0;
    for (int i = 0; i <= 256; ++i) {
        const double t = t_max * static_cast<double>(i) / 256.0;
        max4s = std::max(max4s, std::abs(4.0 * sigma_of_t(spec, axis, t, convention)));
    }
    const double h_dense = 0.01 * std::min(1.0, 1.0 / std::sqrt(std::max(max4s, 1.0)));

    const bool const_sigma = ax.b.is_constant() && ax.c.is_constant() && !options.force_numeric;
    if (const_sigma) {
        sol.method_ = CharacteristicSolution::Method::ClosedForm;
        sol.sigma_const_ = sigma_of_t(spec, axis, 0.0, convention);
        // keep a uniform grid anyway: phase integrals and caustic scans walk it
        const std::size_t n = static_cast<std::size_t>(t_max / h_dense) + 2;
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = t_max * static_cast<double>(i) / static_cast<double>(n);
            auto p = closed_form_point(sol.sigma_const_, t);
            sol.table_.t.push_back(t);
            sol.table_.y.push_back({p.mu, p.mu_prime, p.nu, p.nu_prime});
            const double s4 = 4.0 * sol.sigma_const_;
            sol.table_.dy.push_back({p.mu_prime, -s4 * p.mu, p.nu_prime, -s4 * p.nu});
        }
    } else {
        sol.method_ = CharacteristicSolution::Method::Numeric;
        auto rhs = [&](double t, const std::array<double, 4>& y) -> std::array<double, 4> {
            const double s4 = 4.0 * sigma_of_t(spec, axis, t, convention);
            return {y[1], -s4 * y[0], y[3], -s4 * y[2]};
        };
        OdeOptions opt;
        opt.abs_tol = tol;
        opt.rel_tol = tol;
        opt.max_step = h_dense;
        // integrate segment-wise between coefficient knots so the RHS stays smooth per step
        auto knots = axis_knots(spec, axis);
        knots.erase(std::remove_if(knots.begin(), knots.end(),
                                   [&](double k) { return k <= 0.0 || k >= t_max; }),
                    knots.end());
        knots.push_back(t_max);
        std::array<double, 4> y = {0.0, 1.0, 1.0, 0.0};
        double t0 = 0.0;
        for (double t1 : knots) {
            auto seg = integrate_ode(rhs, y, t0, t1, opt);
            const std::size_t skip = sol.table_.t.empty() ? 0 : 1;
            sol.table_.t.insert(sol.table_.t.end(), seg.t.begin() + skip, seg.t.end());
            sol.table_.y.insert(sol.table_.y.end(), seg.y.begin() + skip, seg.y.end());
            sol.table_.dy.insert(sol.table_.dy.end(), seg.dy.begin() + skip, seg.dy.end());
            y = seg.y.back();
            t0 = t1;
        }
    }

    auto mu_of = [&sol](double t) { return sol.eval(t).mu; };
    auto mup_of = [&sol](double t) { return sol.eval(t).mu_prime; };
    const double eps0 = std::min(1e-9, h_dense * 1e-3); // skip the structural zero at t=0
    sol.caustics_ = scan_zeros(mu_of, eps0, t_max, h_dense);
    sol.turning_points_ = scan_zeros(mup_of, eps0, t_max, h_dense);
    return sol;
}

std::vector<double> find_caustics(const CharacteristicSolution& sol, double lo, double hi) {
    std::vector<double> out;
    for (double c : sol.caustics())
        if (c >= lo && c <= hi) out.push_back(c);
    return out;
}

} // namespace quadprop
