#include "quadprop/hamiltonian.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace quadprop {

double sigma_of_t(const HamiltonianSpec& spec, int axis, double t, SigmaConvention convention) {
    if (axis < 0 || axis >= spec.dimension)
        throw SpecError("axis out of range");
    if (t < 0.0 || t > spec.t_max)
        throw SpecError("t outside coefficient validity interval [0, t_max]");
    if (spec.kinetic != 0.5)
        throw SpecError("sigma_of_t requires kinetic coefficient a = 1/2");
    const AxisCoefficients& ax = spec.axes[static_cast<std::size_t>(axis)];
    const double b = ax.b.value(t);
    const double c = ax.c.value(t);
    const double cp = ax.c.derivative(t);
    const double bterm = (convention == SigmaConvention::TableConsistent) ? b / 4.0 : b / 2.0;
    return bterm - c * c / 4.0 - cp / 4.0;
}

std::vector<Diagnostic> validate(const HamiltonianSpec& spec) {
    std::vector<Diagnostic> out;
    if (spec.dimension < 1)
        out.push_back({-1, "dimension", "must be >= 1"});
    if (spec.axes.size() != static_cast<std::size_t>(std::max(spec.dimension, 0)))
        out.push_back({-1, "axes", "must hold one coefficient quadruple per axis"});
    if (spec.kinetic != 0.5)
        out.push_back({-1, "kinetic", "derivation pipeline requires a = 1/2"});
    if (!(spec.t_max > 0.0) || !std::isfinite(spec.t_max))
        out.push_back({-1, "t_max", "validity interval must be positive and finite"});

    auto check_fn = [&](int axis, const char* name, const CoefficientFn& fn) {
        for (double p : fn.params())
            if (!std::isfinite(p)) {
                out.push_back({axis, name, "parameters must be finite"});
                return;
            }
        if (fn.kind() == CoefficientKind::PiecewiseConstant) {
            const auto& bp = fn.knots();
            if (!std::is_sorted(bp.begin(), bp.end()) ||
                std::adjacent_find(bp.begin(), bp.end()) != bp.end())
                out.push_back({axis, name, "piecewise breakpoints must be strictly increasing"});
        }
    };
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const int axis = static_cast<int>(a);
        check_fn(axis, "b", spec.axes[a].b);
        check_fn(axis, "c", spec.axes[a].c);
        check_fn(axis, "f", spec.axes[a].f);
        check_fn(axis, "g", spec.axes[a].g);
        // the dilation coefficient enters sigma through c'; it must be C^1
        if (spec.axes[a].c.kind() == CoefficientKind::PiecewiseConstant)
            out.push_back({axis, "c", "dilation coefficient must be C^1 (piecewise-constant not allowed)"});
    }
    return out;
}

void require_pipeline_ready(const HamiltonianSpec& spec) {
    auto diags = validate(spec);
    if (!diags.empty()) {
        std::string msg = "spec fails validation:";
        for (const auto& d : diags)
            msg += " [axis " + std::to_string(d.axis) + " " + d.field + ": " + d.rule + "]";
        throw SpecError(msg);
    }
}

HamiltonianSpec preset(const std::string& name, const PresetParams& p) {
    auto zero = CoefficientFn::constant(0.0);
    HamiltonianSpec spec;
    spec.kinetic = 0.5;
    spec.t_max = p.t_max;
    auto axis = [&](CoefficientFn b, CoefficientFn c, CoefficientFn f, CoefficientFn g) {
        spec.axes.push_back({std::move(b), std::move(c), std::move(f), std::move(g)});
    };

    if (name == "free") {
        spec.dimension = 1;
        axis(zero, zero, zero, zero);
    } else if (name == "constant_field") {
        if (!std::isfinite(p.E)) throw SpecError("constant_field: E must be finite");
        spec.dimension = 1;
        axis(zero, zero, CoefficientFn::constant(p.E), zero);
    } else if (name == "isotropic") {
        spec.dimension = 1;
        axis(CoefficientFn::constant(1.0), zero, zero, zero);
    } else if (name == "repulsive") {
        spec.dimension = 1;
        axis(CoefficientFn::constant(-1.0), zero, zero, zero);
    } else if (name == "anisotropic") {
        if (!std::isfinite(p.omega) || p.omega <= 0.0)
            throw SpecError("anisotropic: omega must be positive and finite");
        spec.dimension = 1;
        axis(CoefficientFn::constant(p.omega * p.omega), zero, zero, zero);
    } else if (name == "damped") {
        // b=1, c=-lambda; characteristic frequency sqrt(1-lambda^2) must stay real
        if (!(p.lambda >= 0.0 && p.lambda < 1.0))
            throw SpecError("damped: requires 0 <= lambda < 1");
        spec.dimension = 1;
        axis(CoefficientFn::constant(1.0), CoefficientFn::constant(-p.lambda), zero, zero);
    } else if (name == "hybrid") {
        if (!std::isfinite(p.omega1) || !std::isfinite(p.omega2) || p.omega1 <= 0.0 || p.omega2 <= 0.0)
            throw SpecError("hybrid: omega1, omega2 must be positive and finite");
        spec.dimension = 2;
        axis(CoefficientFn::constant(-p.omega1 * p.omega1), zero, zero, zero);
        axis(CoefficientFn::constant(p.omega2 * p.omega2), zero, zero, zero);
    } else if (name == "forced_parametric") {
        spec.dimension = 1;
        axis(p.omega_sq, zero, p.force, zero);
    } else {
        throw SpecError("unknown preset: " + name);
    }
    spec.dimension = static_cast<int>(spec.axes.size());
    require_pipeline_ready(spec);
    return spec;
}

std::vector<double> axis_knots(const HamiltonianSpec& spec, int axis) {
    if (axis < 0 || axis >= spec.dimension)
        throw SpecError("axis out of range");
    std::set<double> ks;
    const auto& ax = spec.axes[static_cast<std::size_t>(axis)];
    for (const CoefficientFn* fn : {&ax.b, &ax.c, &ax.f, &ax.g})
        for (double k : fn->knots())
            if (k > 0.0 && k < spec.t_max) ks.insert(k);
    return {ks.begin(), ks.end()};
}

} // namespace quadprop
