#include "quadprop/strichartz.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadprop {

namespace {
constexpr double INF = std::numeric_limits<double>::infinity();
double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }
} // namespace

Admissibility is_admissible(double q, double r, double sigma) {
    if (!(sigma > 0.0)) throw SpecError("is_admissible requires sigma > 0");
    if (q < 2.0 || r < 2.0) return Admissibility::Inadmissible;
    if (q == 2.0 && std::isinf(r) && sigma == 1.0) return Admissibility::ForbiddenEndpoint;
    const double lhs = inv(q) + sigma * inv(r);
    const double rhs = sigma / 2.0;
    const double tol = 1e-12 * std::max(1.0, rhs);
    if (std::abs(lhs - rhs) <= tol) return Admissibility::Sharp;
    return lhs < rhs ? Admissibility::Nonsharp : Admissibility::Inadmissible;
}

ExponentPair endpoint(double sigma) {
    if (!(sigma > 1.0)) throw SpecError("endpoint requires sigma > 1");
    ExponentPair p;
    p.q = 2.0;
    p.r = 2.0 * sigma / (sigma - 1.0);
    p.sigma = sigma;
    p.sharp = true;
    return p;
}

double decay_weight(std::span<const double> omegas, std::span<const int> deltas, int k,
                    double delta_cut, double C, double t) {
    const std::size_t d = omegas.size();
    if (d == 0 || deltas.size() != d) throw SpecError("decay_weight needs matching omega/delta lists");
    if (k < 0 || static_cast<std::size_t>(k) >= d) throw SpecError("decay_weight: axis out of range");
    if (deltas[static_cast<std::size_t>(k)] != -1)
        throw SpecError("decay_weight: the distinguished axis must be hyperbolic (delta = -1)");
    for (std::size_t j = 0; j < d; ++j)
        if (j != static_cast<std::size_t>(k) && deltas[j] != 1)
            throw SpecError("decay_weight: non-distinguished axes must have delta = +1");
    if (!(delta_cut > 0.0)) throw SpecError("decay_weight: delta_cut must be positive");

    const double at = std::abs(t);
    if (at <= delta_cut) {
        if (at == 0.0) throw NumericError("decay_weight singular at t = 0");
        return C / at;
    }
    // |t| in the exponential: the hyperbolic-axis factor stems from 1/|sinh|, even in t
    double prod = std::exp(-omegas[static_cast<std::size_t>(k)] * at);
    for (std::size_t j = 0; j < d; ++j) {
        if (j == static_cast<std::size_t>(k)) continue;
        const double s = std::sin(omegas[j] * t);
        if (std::abs(s) < 1e-9) throw NumericError("decay_weight evaluated at a sine zero");
        prod /= 2.0 * M_PI * std::abs(s);
    }
    return C * std::pow(prod, 1.0 / static_cast<double>(d));
}

WeakL1Result weak_l1_check(std::span<const double> t_mesh, std::span<const double> w_samples,
                           std::span<const double> lambdas) {
    if (t_mesh.size() != w_samples.size() || t_mesh.size() < 3)
        throw SpecError("weak_l1_check needs matching mesh and samples");
    for (std::size_t i = 1; i < t_mesh.size(); ++i) {
        const double h = t_mesh[i] - t_mesh[i - 1];
        if (!(h > 0.0)) throw SpecError("weak_l1_check: mesh must be increasing");
        if (h > 1e-3 + 1e-12)
            throw SpecError("weak_l1_check: mesh does not resolve the sine singularities (spacing > 1e-3)");
    }
    WeakL1Result out;
    for (double lam : lambdas) {
        double measure = 0.0;
        for (std::size_t i = 0; i + 1 < t_mesh.size(); ++i) {
            // midpoint attribution of each cell
            const double w = 0.5 * (w_samples[i] + w_samples[i + 1]);
            if (w > lam) measure += t_mesh[i + 1] - t_mesh[i];
        }
        out.lambda.push_back(lam);
        out.product.push_back(lam * measure);
        out.max_product = std::max(out.max_product, lam * measure);
    }
    return out;
}

double mixed_norm(const Trajectory& traj, double q, double r) {
    if (traj.snapshots.empty()) throw SpecError("mixed_norm: empty trajectory");
    if (q < 2.0 || r < 2.0) throw SpecError("mixed_norm: q, r must lie in [2, inf]");

    auto space_norm = [&](const GridState& s) -> double {
        if (std::isinf(r)) return sup_norm(s);
        double acc = 0.0;
        for (const auto& v : s.values) acc += std::pow(std::abs(v), r);
        return std::pow(acc * s.grid.cell_volume(), 1.0 / r);
    };

    if (std::isinf(q)) {
        double m = 0.0;
        for (const auto& [t, s] : traj.snapshots) m = std::max(m, space_norm(s));
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < traj.snapshots.size(); ++i) {
        const double dt = traj.snapshots[i + 1].first - traj.snapshots[i].first;
        acc += std::pow(space_norm(traj.snapshots[i].second), q) * dt;
    }
    // trailing snapshot weighted by the step size so single-snapshot trajectories work
    if (traj.snapshots.size() == 1)
        acc = std::pow(space_norm(traj.snapshots[0].second), q) * traj.dt;
    return std::pow(acc, 1.0 / q);
}

} // namespace quadprop
